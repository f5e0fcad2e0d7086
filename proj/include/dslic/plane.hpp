#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dslic/error.hpp"

namespace dslic {

/// Row-major width x height raster of T.
template <typename T>
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 0 || height < 0)
      throw Error(ErrorCode::dimension, "negative plane dimension");
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }
  Plane(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width < 0 || height < 0 ||
        data_.size() != static_cast<std::size_t>(width) * height)
      throw Error(ErrorCode::dimension, "plane data does not match dimensions");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& at(int x, int y) { return data_[index(x, y)]; }
  const T& at(int x, int y) const { return data_[index(x, y)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }
  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::span<T> row(int y) {
    return {data_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }
  std::span<const T> row(int y) const {
    return {data_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  const std::vector<T>& vector() const noexcept { return data_; }

  bool operator==(const Plane&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Per-pixel cluster or region index.
using LabelMap = Plane<std::int32_t>;

}  // namespace dslic
