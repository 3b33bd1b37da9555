#pragma once

#include <string>
#include <vector>

#include "fdcam/model.hpp"
#include "fdcam/tensor.hpp"
#include "fdcam/weighting.hpp"

namespace fdcam {

// The explanation artifact: an H x W map in [0, 1] aligned to the input
// image, plus the class it explains and a method tag.
struct SaliencyMap {
  Grid map;
  int class_index = -1;
  std::string method_tag;
};

// Weighted sum of the activation maps at native resolution, before ReLU.
Grid weighted_activation_sum(const Tensor3& activations, const std::vector<double>& weights);

// Corner-aligned bilinear interpolation; identical sizes reproduce the input
// exactly. Requires out dimensions >= 1.
Grid bilinear_upsample(const Grid& map, int out_height, int out_width);

// Linear rescale to [0, 1]; an (almost) constant map maps to all zeros, so
// an all-zero map stays all-zero.
Grid min_max_normalize_map(const Grid& map);

// Weighted sum at native h x w, ReLU, bilinear upsample to out size, min-max
// normalize. Requires out size >= native size.
SaliencyMap compose_cam(const Tensor3& activations, const std::vector<double>& weights,
                        int out_height, int out_width);

// Gradient-weighted CAM baseline (global-average-pooled gradient weights).
SaliencyMap grad_cam(const Model& model, const Tensor3& image, int class_index);

// CAM from the combined gradient/switch-score weights.
SaliencyMap fd_cam(const Model& model, const Tensor3& image, int class_index,
                   const CombineConfig& config, WeightBreakdown* breakdown = nullptr);

}  // namespace fdcam
