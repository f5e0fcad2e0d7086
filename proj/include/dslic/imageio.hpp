#pragma once

#include <cstdint>
#include <filesystem>
#include <span>

#include "dslic/image.hpp"
#include "dslic/plane.hpp"

namespace dslic {

/// Decodes PNG (any colour type, 8/16 bit) or binary PNM (P5/P6).
/// Throws Error{io} for unreadable files, Error{format} for anything else it
/// cannot decode and Error{dimension} for zero-sized images.
Image load_image(const std::filesystem::path& path);

/// Label maps are stored as 16-bit single-channel PNG, pixel value = label.
/// Labels must lie in [0, 65535].
void save_label_map(const LabelMap& labels, const std::filesystem::path& path);
LabelMap load_label_map(const std::filesystem::path& path);

void save_rgb_png(const Plane<Rgb>& pixels, const std::filesystem::path& path);
void save_grey8_png(const Plane<std::uint8_t>& pixels,
                    const std::filesystem::path& path);

}  // namespace dslic
