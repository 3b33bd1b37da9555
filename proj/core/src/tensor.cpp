#include "fdcam/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fdcam/errors.hpp"
#include "fdcam/hashing.hpp"

namespace fdcam {

void require(bool condition, const std::string& message) {
  if (!condition) {
    throw InputError(message);
  }
}

void require_finite(const std::vector<double>& values, const std::string& context) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw NumericError(context + ": non-finite value");
    }
  }
}

Grid Tensor3::channel(int c) const {
  require(c >= 0 && c < channels, "Tensor3::channel: index out of range");
  Grid g(height, width);
  const double* src = channel_data(c);
  std::copy(src, src + plane_size(), g.values.begin());
  return g;
}

bool Tensor3::all_finite() const {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return std::string(buf);
}

}  // namespace fdcam
