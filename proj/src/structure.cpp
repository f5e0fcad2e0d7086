#include "dslic/structure.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <new>
#include <mutex>
#include <numeric>

#include "dslic/error.hpp"

namespace dslic {
namespace {

constexpr int kRows = 4;
constexpr int kCols = 4;
// Kernels at least this wide go through the FFT path.
constexpr int kFftMinRadius = 16;

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(ErrorCode::invalid_argument, "sigma must be positive");
}

// Sum of the kernel taps that land inside [0, n) around each position.
std::vector<double> support_weights(const std::vector<double>& kernel, int n) {
  const int radius = static_cast<int>(kernel.size() / 2);
  std::vector<double> weight(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - radius); j <= std::min(n - 1, i + radius); ++j)
      weight[i] += kernel[j - i + radius];
  return weight;
}

// Output rows [y, y + R) of the vertical pass. `k` points at the centre of a
// kernel padded with kRows - 1 zeros on each side, so taps outside the
// support contribute nothing. Each input row is read once per block of R
// output rows.
template <int R>
void blur_row_block(const double* in, int w, int h, const double* k, int radius,
                    const double* weight, int y, double* out) {
  const int y_lo = std::max(0, y - radius);
  const int y_hi = std::min(h - 1, y + R - 1 + radius);
  const std::size_t stride = static_cast<std::size_t>(w);

  int x = 0;
  for (; x + kCols <= w; x += kCols) {
    double acc[R][kCols] = {};
    for (int yy = y_lo; yy <= y_hi; ++yy) {
      const double* src = in + yy * stride + x;
      for (int ry = 0; ry < R; ++ry) {
        const double kq = k[yy - y - ry];
        for (int b = 0; b < kCols; ++b) acc[ry][b] += kq * src[b];
      }
    }
    for (int ry = 0; ry < R; ++ry)
      for (int b = 0; b < kCols; ++b)
        out[(y + ry) * stride + x + b] = acc[ry][b] / weight[y + ry];
  }
  for (; x < w; ++x) {
    double acc[R] = {};
    for (int yy = y_lo; yy <= y_hi; ++yy) {
      const double v = in[yy * stride + x];
      for (int ry = 0; ry < R; ++ry) acc[ry] += k[yy - y - ry] * v;
    }
    for (int ry = 0; ry < R; ++ry) out[(y + ry) * stride + x] = acc[ry] / weight[y + ry];
  }
}

// Along y. Near the top and bottom the support is truncated and the in-bounds
// taps renormalised.
Plane<double> blur_columns(const Plane<double>& in,
                           const std::vector<double>& kernel) {
  const int radius = static_cast<int>(kernel.size() / 2);
  const int h = in.height();

  std::vector<double> padded(kernel.size() + 2 * (kRows - 1), 0.0);
  std::copy(kernel.begin(), kernel.end(), padded.begin() + (kRows - 1));

  const std::vector<double> weight = support_weights(kernel, h);

  const double* k = padded.data() + radius + (kRows - 1);  // k[j], |j| <= r + kRows - 1
  const double* src = in.values().data();
  Plane<double> out(in.width(), h);
  double* dst = out.values().data();
  int y = 0;
  for (; y + kRows <= h; y += kRows)
    blur_row_block<kRows>(src, in.width(), h, k, radius, weight.data(), y, dst);
  for (; y < h; ++y)
    blur_row_block<1>(src, in.width(), h, k, radius, weight.data(), y, dst);
  return out;
}

// Along x, one row at a time through a zero-padded copy of the row.
Plane<double> blur_rows(const Plane<double>& in,
                        const std::vector<double>& kernel) {
  constexpr int kLanes = 8;
  const int radius = static_cast<int>(kernel.size() / 2);
  const int w = in.width(), taps = static_cast<int>(kernel.size());
  const std::vector<double> weight = support_weights(kernel, w);

  std::vector<double> buf(static_cast<std::size_t>(w) + 2 * radius, 0.0);
  Plane<double> out(w, in.height());
  for (int y = 0; y < in.height(); ++y) {
    std::copy(in.row(y).begin(), in.row(y).end(), buf.begin() + radius);
    double* dst = out.row(y).data();
    int x = 0;
    for (; x + kLanes <= w; x += kLanes) {
      double acc[kLanes] = {};
      for (int j = 0; j < taps; ++j) {
        const double kj = kernel[j];
        const double* src = buf.data() + x + j;
        for (int b = 0; b < kLanes; ++b) acc[b] += kj * src[b];
      }
      for (int b = 0; b < kLanes; ++b) dst[x + b] = acc[b] / weight[x + b];
    }
    for (; x < w; ++x) {
      double acc = 0.0;
      for (int j = 0; j < taps; ++j) acc += kernel[j] * buf[x + j];
      dst[x] = acc / weight[x];
    }
  }
  return out;
}

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

// Owns a plan; creation and destruction take the planner lock.
struct Plan {
  fftw_plan p = nullptr;
  template <typename Make>
  explicit Plan(Make make) {
    {
      std::lock_guard lock(planner_mutex());
      p = make();
    }
    if (!p) throw Error(ErrorCode::range, "FFT plan creation failed");
  }
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
};

// Smallest n' >= n with no prime factor above 5.
int fft_size(int n) {
  for (;; ++n) {
    int m = n;
    for (int p : {2, 3, 5})
      while (m % p == 0) m /= p;
    if (m == 1) return n;
  }
}

// DFT of the kernel wrapped around a length-n circle. The kernel is
// symmetric, so the spectrum is real.
std::vector<double> kernel_spectrum(const std::vector<double>& kernel, int n) {
  const int radius = static_cast<int>(kernel.size() / 2);
  std::vector<double> wrapped(n, 0.0);
  for (int j = -radius; j <= radius; ++j) wrapped[(j + n) % n] += kernel[j + radius];
  std::vector<std::complex<double>> spec(n / 2 + 1);
  Plan plan([&] {
    return fftw_plan_dft_r2c_1d(n, wrapped.data(),
                                reinterpret_cast<fftw_complex*>(spec.data()),
                                FFTW_ESTIMATE);
  });
  fftw_execute(plan.p);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = (i <= n / 2 ? spec[i] : spec[n - i]).real();
  return out;
}

// Same operator as blur_rows(blur_columns(.)): the zero-padded product of the
// two 1-D convolutions is one 2-D circular convolution once the padding
// covers the kernel radius, and the border renormalisation factors per axis.
Plane<double> blur_fft(const Plane<double>& in, const std::vector<double>& kernel) {
  const int radius = static_cast<int>(kernel.size() / 2);
  const int w = in.width(), h = in.height();
  const int nx = fft_size(w + radius), ny = fft_size(h + radius);
  const int cols = nx / 2 + 1;

  std::unique_ptr<double, FftwFree> real(
      fftw_alloc_real(static_cast<std::size_t>(nx) * ny));
  std::unique_ptr<fftw_complex, FftwFree> spec(
      fftw_alloc_complex(static_cast<std::size_t>(ny) * cols));
  if (!real || !spec) throw std::bad_alloc();

  const Plan forward([&] {
    return fftw_plan_dft_r2c_2d(ny, nx, real.get(), spec.get(), FFTW_ESTIMATE);
  });
  const Plan backward([&] {
    return fftw_plan_dft_c2r_2d(ny, nx, spec.get(), real.get(), FFTW_ESTIMATE);
  });

  double* buf = real.get();
  std::fill(buf, buf + static_cast<std::size_t>(nx) * ny, 0.0);
  for (int y = 0; y < h; ++y)
    std::copy(in.row(y).begin(), in.row(y).end(), buf + static_cast<std::size_t>(y) * nx);
  fftw_execute(forward.p);

  const std::vector<double> kx = kernel_spectrum(kernel, nx);
  const std::vector<double> ky = kernel_spectrum(kernel, ny);
  const double scale = 1.0 / (static_cast<double>(nx) * ny);
  for (int v = 0; v < ny; ++v) {
    fftw_complex* row = spec.get() + static_cast<std::size_t>(v) * cols;
    const double fy = ky[v] * scale;
    for (int u = 0; u < cols; ++u) {
      const double f = kx[u] * fy;
      row[u][0] *= f;
      row[u][1] *= f;
    }
  }
  fftw_execute(backward.p);

  const std::vector<double> wx = support_weights(kernel, w);
  const std::vector<double> wy = support_weights(kernel, h);
  Plane<double> out(w, h);
  for (int y = 0; y < h; ++y) {
    const double* src = buf + static_cast<std::size_t>(y) * nx;
    double* dst = out.row(y).data();
    for (int x = 0; x < w; ++x) dst[x] = src[x] / (wx[x] * wy[y]);
  }
  return out;
}

}  // namespace

Plane<double> gradient_magnitude(const Plane<double>& grey) {
  const int w = grey.width(), h = grey.height();
  if (w < 2 || h < 2)
    throw Error(ErrorCode::dimension, "gradient needs at least a 2x2 image");

  Plane<double> mag(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double dx, dy;
      if (x == 0)
        dx = grey.at(1, y) - grey.at(0, y);
      else if (x == w - 1)
        dx = grey.at(w - 1, y) - grey.at(w - 2, y);
      else
        dx = 0.5 * (grey.at(x + 1, y) - grey.at(x - 1, y));
      if (y == 0)
        dy = grey.at(x, 1) - grey.at(x, 0);
      else if (y == h - 1)
        dy = grey.at(x, h - 1) - grey.at(x, h - 2);
      else
        dy = 0.5 * (grey.at(x, y + 1) - grey.at(x, y - 1));
      mag.at(x, y) = std::sqrt(dx * dx + dy * dy);
    }
  }
  return mag;
}

std::vector<double> gaussian_kernel(double sigma) {
  check_sigma(sigma);
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  const double denom = 2.0 * sigma * sigma;
  for (int i = -radius; i <= radius; ++i)
    k[i + radius] = std::exp(-(static_cast<double>(i) * i) / denom);
  const double sum = std::accumulate(k.begin(), k.end(), 0.0);
  for (double& v : k) v /= sum;
  return k;
}

Plane<double> gaussian_blur(const Plane<double>& plane, double sigma) {
  const std::vector<double> kernel = gaussian_kernel(sigma);
  if (plane.empty()) return plane;
  if (static_cast<int>(kernel.size() / 2) >= kFftMinRadius)
    return blur_fft(plane, kernel);
  return blur_rows(blur_columns(plane, kernel), kernel);
}

StructureMap compute_structure(const Plane<double>& grey, double sigma,
                               double clamp) {
  check_sigma(sigma);
  if (!(clamp > 0.0) || !std::isfinite(clamp))
    throw Error(ErrorCode::invalid_argument, "clamp must be positive");

  Plane<double> clamped = gradient_magnitude(grey);
  for (double& v : clamped.values()) v = std::min(v, clamp);

  StructureMap smap;
  smap.sigma = sigma;
  smap.clamp = clamp;
  smap.f = gaussian_blur(clamped, sigma);

  const auto vals = smap.f.values();
  // The input is non-negative; FFT rounding can leave values a hair below 0.
  for (double& v : vals) v = std::max(v, 0.0);
  const double peak = *std::max_element(vals.begin(), vals.end());
  if (peak > 0.0) {
    for (double& v : vals) v /= peak;
  } else {
    // Gradient-free input: no structure anywhere, g collapses to 1.
    std::fill(vals.begin(), vals.end(), 0.0);
  }

  smap.f_mean = std::accumulate(vals.begin(), vals.end(), 0.0) /
                static_cast<double>(vals.size());
  smap.g = Plane<double>(grey.width(), grey.height());
  for (std::size_t i = 0; i < smap.f.size(); ++i)
    smap.g[i] = std::exp(smap.f[i] - smap.f_mean);
  return smap;
}

StructureMap compute_structure(const Image& image, double sigma, double clamp) {
  return compute_structure(image.grey(), sigma, clamp);
}

Plane<std::uint8_t> structure_to_grey8(const StructureMap& smap) {
  Plane<std::uint8_t> out(smap.f.width(), smap.f.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = std::clamp(smap.f[i], 0.0, 1.0);
    out[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
  }
  return out;
}

}  // namespace dslic
