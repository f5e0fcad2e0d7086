#include "png_codec.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>

#include "dslic/error.hpp"

namespace dslic::png {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open(const std::filesystem::path& path, const char* mode) {
  File f(std::fopen(path.c_str(), mode));
  if (!f)
    throw Error(ErrorCode::io, "cannot open '" + path.string() + "': " +
                                   std::strerror(errno));
  return f;
}

// libpng reports errors through longjmp; the message is parked here so it can
// be rethrown as an exception once control is back in C++.
struct ErrorSink {
  std::jmp_buf jump;
  char message[256] = {};
};

void on_error(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<ErrorSink*>(png_get_error_ptr(png));
  std::snprintf(sink->message, sizeof sink->message, "%s", msg);
  std::longjmp(sink->jump, 1);
}

void on_warning(png_structp, png_const_charp) {}

enum class Mode { rgb8, grey };

// Everything that libpng may longjmp over is plain data owned by the caller.
bool decode(std::FILE* fp, Mode mode, Raster& out, ErrorSink& sink,
            bool& colour_rejected) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink,
                                           on_error, on_warning);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  if (setjmp(sink.jump)) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }

  png_init_io(png, fp);
  png_read_info(png, info);
  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int color_type = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);

  if (mode == Mode::rgb8) {
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8)
      png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (depth == 16) png_set_strip_16(png);
    png_set_strip_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY ||
        color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
      png_set_gray_to_rgb(png);
  } else {
    if (color_type != PNG_COLOR_TYPE_GRAY) {
      colour_rejected = true;
      png_destroy_read_struct(&png, &info, nullptr);
      return false;
    }
    if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  }
  png_read_update_info(png, info);

  const int channels = png_get_channels(png, info);
  const int out_depth = png_get_bit_depth(png, info);
  const png_size_t rowbytes = png_get_rowbytes(png, info);

  out.width = static_cast<int>(width);
  out.height = static_cast<int>(height);
  out.channels = channels;
  out.bit_depth = out_depth;
  out.samples.assign(static_cast<std::size_t>(width) * height * channels, 0);

  std::vector<png_byte> row(rowbytes);
  for (png_uint_32 y = 0; y < height; ++y) {
    png_read_row(png, row.data(), nullptr);
    std::uint16_t* dst = out.samples.data() +
                         static_cast<std::size_t>(y) * width * channels;
    const std::size_t n = static_cast<std::size_t>(width) * channels;
    if (out_depth == 16) {
      for (std::size_t i = 0; i < n; ++i)
        dst[i] = static_cast<std::uint16_t>((row[2 * i] << 8) | row[2 * i + 1]);
    } else {
      for (std::size_t i = 0; i < n; ++i) dst[i] = row[i];
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

Raster read(const std::filesystem::path& path, Mode mode) {
  File f = open(path, "rb");
  png_byte sig[8] = {};
  if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw Error(ErrorCode::format, "'" + path.string() + "' is not a PNG file");
  std::rewind(f.get());

  Raster out;
  ErrorSink sink;
  bool colour_rejected = false;
  if (!decode(f.get(), mode, out, sink, colour_rejected)) {
    if (colour_rejected)
      throw Error(ErrorCode::format,
                  "'" + path.string() + "' is not a single-channel PNG");
    throw Error(ErrorCode::format, "cannot decode '" + path.string() +
                                       "': " + std::string(sink.message));
  }
  if (out.width == 0 || out.height == 0)
    throw Error(ErrorCode::dimension, "'" + path.string() + "' is empty");
  return out;
}

bool encode(std::FILE* fp, const Raster& r, const std::vector<png_byte>& bytes,
            ErrorSink& sink) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink,
                                            on_error, on_warning);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(sink.jump)) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, r.width, r.height, r.bit_depth,
               r.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride =
      static_cast<std::size_t>(r.width) * r.channels * (r.bit_depth / 8);
  for (int y = 0; y < r.height; ++y)
    png_write_row(png, bytes.data() + y * stride);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

}  // namespace

bool has_signature(const std::filesystem::path& path) {
  File f = open(path, "rb");
  png_byte sig[8] = {};
  return std::fread(sig, 1, 8, f.get()) == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

Raster read_rgb8(const std::filesystem::path& path) {
  return read(path, Mode::rgb8);
}

Raster read_grey(const std::filesystem::path& path) {
  return read(path, Mode::grey);
}

void write(const std::filesystem::path& path, const Raster& r) {
  if (r.width <= 0 || r.height <= 0)
    throw Error(ErrorCode::dimension, "cannot write an empty PNG");
  if ((r.channels != 1 && r.channels != 3) ||
      (r.bit_depth != 8 && r.bit_depth != 16) ||
      r.samples.size() != static_cast<std::size_t>(r.width) * r.height * r.channels)
    throw Error(ErrorCode::invalid_argument, "malformed raster");

  std::vector<png_byte> bytes;
  bytes.reserve(r.samples.size() * (r.bit_depth / 8));
  for (std::uint16_t s : r.samples) {
    if (r.bit_depth == 16) bytes.push_back(static_cast<png_byte>(s >> 8));
    bytes.push_back(static_cast<png_byte>(s & 0xff));
  }

  File f = open(path, "wb");
  ErrorSink sink;
  if (!encode(f.get(), r, bytes, sink))
    throw Error(ErrorCode::io, "cannot encode '" + path.string() +
                                   "': " + std::string(sink.message));
  if (std::fflush(f.get()) != 0)
    throw Error(ErrorCode::io, "write failed for '" + path.string() + "'");
}

}  // namespace dslic::png
