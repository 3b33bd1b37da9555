#include "fdcam/cam.hpp"

#include <algorithm>
#include <cmath>

#include "fdcam/errors.hpp"
#include "fdcam/weighting.hpp"

namespace fdcam {
namespace {

constexpr double kDegenerateRange = 1e-12;

}  // namespace

Grid weighted_activation_sum(const Tensor3& activations, const std::vector<double>& weights) {
  require(static_cast<int>(weights.size()) == activations.channels,
          "weighted_activation_sum: one weight per channel required");
  require_finite(weights, "weighted_activation_sum");
  Grid out(activations.height, activations.width);
  for (int k = 0; k < activations.channels; ++k) {
    const double w = weights[k];
    const double* plane = activations.channel_data(k);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out.values[i] += w * plane[i];
    }
  }
  return out;
}

Grid bilinear_upsample(const Grid& map, int out_height, int out_width) {
  require(map.height >= 1 && map.width >= 1, "bilinear_upsample: empty input");
  require(out_height >= 1 && out_width >= 1, "bilinear_upsample: empty output");
  if (out_height == map.height && out_width == map.width) return map;

  Grid out(out_height, out_width);
  const double sy = out_height > 1
                        ? static_cast<double>(map.height - 1) / (out_height - 1)
                        : 0.0;
  const double sx = out_width > 1
                        ? static_cast<double>(map.width - 1) / (out_width - 1)
                        : 0.0;
  for (int y = 0; y < out_height; ++y) {
    const double fy = y * sy;
    const int y0 = std::min(static_cast<int>(fy), map.height - 1);
    const int y1 = std::min(y0 + 1, map.height - 1);
    const double ty = fy - y0;
    for (int x = 0; x < out_width; ++x) {
      const double fx = x * sx;
      const int x0 = std::min(static_cast<int>(fx), map.width - 1);
      const int x1 = std::min(x0 + 1, map.width - 1);
      const double tx = fx - x0;
      // lerp form a + t*(b-a): exact on constant inputs
      const double top = map.at(y0, x0) + tx * (map.at(y0, x1) - map.at(y0, x0));
      const double bottom = map.at(y1, x0) + tx * (map.at(y1, x1) - map.at(y1, x0));
      out.at(y, x) = top + ty * (bottom - top);
    }
  }
  return out;
}

Grid min_max_normalize_map(const Grid& map) {
  require(map.size() >= 1, "min_max_normalize_map: empty map");
  const auto [lo_it, hi_it] = std::minmax_element(map.values.begin(), map.values.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  Grid out(map.height, map.width);
  if (range <= kDegenerateRange) return out;
  for (std::size_t i = 0; i < map.size(); ++i) {
    out.values[i] = (map.values[i] - lo) / range;
  }
  return out;
}

SaliencyMap compose_cam(const Tensor3& activations, const std::vector<double>& weights,
                        int out_height, int out_width) {
  require(out_height >= activations.height && out_width >= activations.width,
          "compose_cam: output size must not be smaller than the activation maps");
  Grid summed = weighted_activation_sum(activations, weights);
  for (double& v : summed.values) {
    if (v < 0.0) v = 0.0;
  }
  Grid upsampled = bilinear_upsample(summed, out_height, out_width);
  SaliencyMap result;
  result.map = min_max_normalize_map(upsampled);
  return result;
}

SaliencyMap grad_cam(const Model& model, const Tensor3& image, int class_index) {
  require(class_index >= 0 && class_index < model.class_count(),
          "grad_cam: class index out of range");
  const Tensor3 activations = model.capture_activations(image);
  const std::vector<double> alpha =
      grad_weights(model.activation_gradients(image, class_index));
  SaliencyMap result =
      compose_cam(activations, alpha, model.input_height(), model.input_width());
  result.class_index = class_index;
  result.method_tag = "grad-cam";
  return result;
}

SaliencyMap fd_cam(const Model& model, const Tensor3& image, int class_index,
                   const CombineConfig& config, WeightBreakdown* breakdown) {
  WeightBreakdown local;
  WeightBreakdown* sink = breakdown ? breakdown : &local;
  const std::vector<double> omega = fd_weights(model, image, class_index, config, sink);
  SaliencyMap result = compose_cam(sink->activations, omega, model.input_height(),
                                   model.input_width());
  result.class_index = class_index;
  result.method_tag = describe(config);
  return result;
}

}  // namespace fdcam
