#include "dslic/imageio.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "dslic/error.hpp"
#include "png_codec.hpp"

namespace dslic {
namespace {

// sRGB -> XYZ (D65). The reference white is the image of (1,1,1) under this
// matrix, which makes pure white land exactly on L=100, a=b=0.
constexpr double kM[3][3] = {{0.4124564, 0.3575761, 0.1804375},
                             {0.2126729, 0.7151522, 0.0721750},
                             {0.0193339, 0.1191920, 0.9503041}};
constexpr double kWhiteX = kM[0][0] + kM[0][1] + kM[0][2];
constexpr double kWhiteY = kM[1][0] + kM[1][1] + kM[1][2];
constexpr double kWhiteZ = kM[2][0] + kM[2][1] + kM[2][2];

constexpr double kEpsilon = 216.0 / 24389.0;
constexpr double kKappa = 24389.0 / 27.0;

const std::array<double, 256>& linear_table() {
  static const std::array<double, 256> table = [] {
    std::array<double, 256> t{};
    for (int i = 0; i < 256; ++i) {
      const double c = i / 255.0;
      t[i] = c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
    }
    return t;
  }();
  return table;
}

double lab_f(double t) {
  return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0;
}

// --- PNM ------------------------------------------------------------------

class PnmReader {
 public:
  explicit PnmReader(std::string bytes) : bytes_(std::move(bytes)) {}

  int next_int(const std::filesystem::path& path) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(uc(bytes_[pos_])))
      throw Error(ErrorCode::format, "malformed PNM header in '" +
                                         path.string() + "'");
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(uc(bytes_[pos_]))) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > std::numeric_limits<int>::max())
        throw Error(ErrorCode::format, "PNM header value overflows");
    }
    return static_cast<int>(value);
  }

  // Exactly one whitespace byte separates the header from the raster.
  void end_header() { ++pos_; }

  std::size_t remaining() const {
    return pos_ < bytes_.size() ? bytes_.size() - pos_ : 0;
  }
  unsigned char byte(std::size_t i) const { return uc(bytes_[pos_ + i]); }

 private:
  static unsigned char uc(char c) { return static_cast<unsigned char>(c); }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(uc(bytes_[pos_]))) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string bytes_;
  std::size_t pos_ = 2;
};

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Image load_pnm(const std::filesystem::path& path, std::string bytes) {
  const bool colour = bytes[1] == '6';
  PnmReader reader(std::move(bytes));
  const int width = reader.next_int(path);
  const int height = reader.next_int(path);
  const int maxval = reader.next_int(path);
  reader.end_header();
  if (width == 0 || height == 0)
    throw Error(ErrorCode::dimension, "'" + path.string() + "' is empty");
  if (maxval < 1 || maxval > 65535)
    throw Error(ErrorCode::format, "bad PNM maxval in '" + path.string() + "'");

  const int channels = colour ? 3 : 1;
  const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
  const std::size_t count = static_cast<std::size_t>(width) * height * channels;
  if (reader.remaining() < count * sample_bytes)
    throw Error(ErrorCode::format, "truncated PNM '" + path.string() + "'");

  auto sample = [&](std::size_t i) -> std::uint8_t {
    unsigned v = sample_bytes == 2
                     ? (reader.byte(2 * i) << 8) | reader.byte(2 * i + 1)
                     : reader.byte(i);
    if (v > static_cast<unsigned>(maxval)) v = maxval;
    if (maxval == 255) return static_cast<std::uint8_t>(v);
    return static_cast<std::uint8_t>(std::lround(v * 255.0 / maxval));
  };

  std::vector<Rgb> pixels(static_cast<std::size_t>(width) * height);
  for (std::size_t p = 0; p < pixels.size(); ++p) {
    if (colour) {
      pixels[p] = {sample(3 * p), sample(3 * p + 1), sample(3 * p + 2)};
    } else {
      const std::uint8_t v = sample(p);
      pixels[p] = {v, v, v};
    }
  }
  return Image::from_rgb(width, height, std::move(pixels));
}

}  // namespace

double to_greyscale(Rgb px) noexcept {
  return (0.299 * px.r + 0.587 * px.g + 0.114 * px.b) / 255.0;
}

Lab srgb_to_lab(Rgb px) noexcept {
  const auto& lin = linear_table();
  const double r = lin[px.r], g = lin[px.g], b = lin[px.b];
  const double x = (kM[0][0] * r + kM[0][1] * g + kM[0][2] * b) / kWhiteX;
  const double y = (kM[1][0] * r + kM[1][1] * g + kM[1][2] * b) / kWhiteY;
  const double z = (kM[2][0] * r + kM[2][1] * g + kM[2][2] * b) / kWhiteZ;
  const double fx = lab_f(x), fy = lab_f(y), fz = lab_f(z);
  const double l = y > kEpsilon ? 116.0 * fy - 16.0 : kKappa * y;
  return {l, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Image Image::from_rgb(int width, int height, std::vector<Rgb> pixels) {
  if (width <= 0 || height <= 0)
    throw Error(ErrorCode::dimension, "image dimensions must be positive");
  Image img;
  img.rgb_ = Plane<Rgb>(width, height, std::move(pixels));
  img.grey_ = Plane<double>(width, height);
  img.lab_ = Plane<Lab>(width, height);
  for (std::size_t i = 0; i < img.rgb_.size(); ++i) {
    img.grey_[i] = to_greyscale(img.rgb_[i]);
    img.lab_[i] = srgb_to_lab(img.rgb_[i]);
  }
  return img;
}

Image load_image(const std::filesystem::path& path) {
  std::string bytes = slurp(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6'))
    return load_pnm(path, std::move(bytes));
  if (!png::has_signature(path))
    throw Error(ErrorCode::format,
                "'" + path.string() + "' is neither PNG nor binary PPM/PGM");

  png::Raster raster = png::read_rgb8(path);
  std::vector<Rgb> pixels(static_cast<std::size_t>(raster.width) * raster.height);
  for (std::size_t p = 0; p < pixels.size(); ++p)
    pixels[p] = {static_cast<std::uint8_t>(raster.samples[3 * p]),
                 static_cast<std::uint8_t>(raster.samples[3 * p + 1]),
                 static_cast<std::uint8_t>(raster.samples[3 * p + 2])};
  return Image::from_rgb(raster.width, raster.height, std::move(pixels));
}

void save_label_map(const LabelMap& labels, const std::filesystem::path& path) {
  png::Raster raster{labels.width(), labels.height(), 1, 16, {}};
  raster.samples.reserve(labels.size());
  for (std::int32_t v : labels.values()) {
    if (v < 0 || v > 65535)
      throw Error(ErrorCode::range,
                  "label " + std::to_string(v) + " does not fit in 16 bits");
    raster.samples.push_back(static_cast<std::uint16_t>(v));
  }
  png::write(path, raster);
}

LabelMap load_label_map(const std::filesystem::path& path) {
  png::Raster raster = png::read_grey(path);
  std::vector<std::int32_t> labels(raster.samples.begin(), raster.samples.end());
  return LabelMap(raster.width, raster.height, std::move(labels));
}

void save_rgb_png(const Plane<Rgb>& pixels, const std::filesystem::path& path) {
  png::Raster raster{pixels.width(), pixels.height(), 3, 8, {}};
  raster.samples.reserve(pixels.size() * 3);
  for (const Rgb& px : pixels.values()) {
    raster.samples.push_back(px.r);
    raster.samples.push_back(px.g);
    raster.samples.push_back(px.b);
  }
  png::write(path, raster);
}

void save_grey8_png(const Plane<std::uint8_t>& pixels,
                    const std::filesystem::path& path) {
  png::Raster raster{pixels.width(), pixels.height(), 1, 8,
                     {pixels.values().begin(), pixels.values().end()}};
  png::write(path, raster);
}

}  // namespace dslic
