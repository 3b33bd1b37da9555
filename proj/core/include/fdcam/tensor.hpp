#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fdcam {

// Throws InputError with `message` unless `condition` holds.
void require(bool condition, const std::string& message);

// Throws NumericError unless every entry is finite.
void require_finite(const std::vector<double>& values, const std::string& context);

// Dense 2D map, row-major.
struct Grid {
  int height = 0;
  int width = 0;
  std::vector<double> values;

  Grid() = default;
  Grid(int h, int w, double fill = 0.0)
      : height(h), width(w), values(static_cast<std::size_t>(h) * w, fill) {}

  double& at(int y, int x) { return values[static_cast<std::size_t>(y) * width + x]; }
  double at(int y, int x) const { return values[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const { return values.size(); }
  bool same_shape(const Grid& other) const {
    return height == other.height && width == other.width;
  }
};

// Dense channels-first 3D tensor (channel, row, column), row-major planes.
// Images are Tensor3 with channels == 3 (RGB, values in [0, 1]).
struct Tensor3 {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> values;

  Tensor3() = default;
  Tensor3(int c, int h, int w, double fill = 0.0)
      : channels(c),
        height(h),
        width(w),
        values(static_cast<std::size_t>(c) * h * w, fill) {}

  std::size_t plane_size() const { return static_cast<std::size_t>(height) * width; }
  std::size_t size() const { return values.size(); }

  double& at(int c, int y, int x) {
    return values[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  double at(int c, int y, int x) const {
    return values[(static_cast<std::size_t>(c) * height + y) * width + x];
  }

  double* channel_data(int c) { return values.data() + c * plane_size(); }
  const double* channel_data(int c) const { return values.data() + c * plane_size(); }

  bool same_shape(const Tensor3& other) const {
    return channels == other.channels && height == other.height && width == other.width;
  }

  Grid channel(int c) const;
  bool all_finite() const;
};

using Image = Tensor3;

}  // namespace fdcam
