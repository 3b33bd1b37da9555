#pragma once

#include <string>
#include <vector>

#include "fdcam/grouping.hpp"
#include "fdcam/model.hpp"
#include "fdcam/tensor.hpp"

namespace fdcam {

enum class CombineScheme {
  exp_bias,     // alpha_hat * e^{s_hat} - b (the default)
  exp_no_bias,  // alpha_hat * e^{s_hat}
  product,      // alpha_hat * s_hat
  score_only,   // s, raw; with singleton groups and switch-off only this is
                // the per-channel ablation reduction
};

std::string to_string(CombineScheme scheme);
CombineScheme combine_scheme_from_string(const std::string& name);

struct CombineConfig {
  CombineScheme scheme = CombineScheme::exp_bias;
  double bias = 0.5;
  double theta = 5.0;
  bool use_switch_on = true;
  bool use_grouping = true;
};

// One-line description, e.g. "fd-cam[exp_bias,theta=5,b=0.5]"; the
// no-grouping switch-off-only score_only configuration reads
// "ablation-reduced".
std::string describe(const CombineConfig& config);

// Per-channel switch scores. `on` stays empty when the switch-on side is
// disabled; `combined` is then just the off score.
struct SwitchScores {
  std::vector<double> off;
  std::vector<double> on;
  std::vector<double> combined;
};

// Intermediates of one fd_weights run, for debug dumps, regression tests and
// CAM composition without a second capture pass.
struct WeightBreakdown {
  std::vector<double> alpha;
  std::vector<double> s_off, s_on, s;
  std::vector<double> alpha_hat, s_hat;
  std::vector<double> omega;
  std::vector<ChannelGroup> groups;
  Tensor3 activations;  // target-layer stack of the single unmasked pass
  double base_score = 0.0;
};

// Channel-wise global average pooled gradients.
std::vector<double> grad_weights(const Tensor3& gradients);

// Grouped channel switching scores for every channel: the off score is the
// drop of the class score with the channel's group zeroed, the on score is
// the class score with only the group kept, and the combined score averages
// the two (or equals the off score when switch-on is disabled). Issues 2K
// (or K) masked passes plus one unmasked pass.
SwitchScores switch_scores(const Model& model, const Tensor3& image,
                           const std::vector<ChannelGroup>& groups, int class_index,
                           const CombineConfig& config);

// Same, with the unperturbed class score supplied by the caller so no extra
// unmasked pass is spent.
SwitchScores switch_scores_with_base(const Model& model, const Tensor3& image,
                                     const std::vector<ChannelGroup>& groups,
                                     int class_index, const CombineConfig& config,
                                     double base_score);

// Linear rescale to [0, 1]; an (almost) constant vector maps to all zeros.
std::vector<double> min_max_normalize(const std::vector<double>& w);

std::vector<double> combine_weights(const std::vector<double>& alpha_hat,
                                    const std::vector<double>& s_hat,
                                    const CombineConfig& config);

// End-to-end channel weights: activations -> gradients -> grouped switch
// scores -> normalization -> combination. With the full configuration this
// costs exactly 2K+1 forward passes and one gradient pass.
std::vector<double> fd_weights(const Model& model, const Tensor3& image, int class_index,
                               const CombineConfig& config,
                               WeightBreakdown* breakdown = nullptr);

std::string weight_breakdown_to_json(const WeightBreakdown& breakdown);

}  // namespace fdcam
