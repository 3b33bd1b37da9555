#include "fdcam/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fdcam/errors.hpp"

namespace fdcam {
namespace {

constexpr double kDegenerateRange = 1e-12;

bool is_ablation_reduction(const CombineConfig& c) {
  return c.scheme == CombineScheme::score_only && !c.use_grouping && !c.use_switch_on;
}

std::string format_number(double v) {
  std::ostringstream oss;
  oss << v;
  return oss.str();
}

}  // namespace

std::string to_string(CombineScheme scheme) {
  switch (scheme) {
    case CombineScheme::exp_bias: return "exp_bias";
    case CombineScheme::exp_no_bias: return "exp_no_bias";
    case CombineScheme::product: return "product";
    case CombineScheme::score_only: return "score_only";
  }
  return "exp_bias";
}

CombineScheme combine_scheme_from_string(const std::string& name) {
  if (name == "exp_bias") return CombineScheme::exp_bias;
  if (name == "exp_no_bias") return CombineScheme::exp_no_bias;
  if (name == "product") return CombineScheme::product;
  if (name == "score_only") return CombineScheme::score_only;
  throw ConfigError("unknown combine scheme '" + name +
                    "' (expected exp_bias, exp_no_bias, product or score_only)");
}

std::string describe(const CombineConfig& config) {
  if (is_ablation_reduction(config)) return "ablation-reduced";
  std::ostringstream oss;
  oss << "fd-cam[" << to_string(config.scheme) << ",theta=" << format_number(config.theta);
  if (config.scheme == CombineScheme::exp_bias) {
    oss << ",b=" << format_number(config.bias);
  }
  if (!config.use_switch_on) oss << ",off-only";
  if (!config.use_grouping) oss << ",ungrouped";
  oss << "]";
  return oss.str();
}

std::vector<double> grad_weights(const Tensor3& gradients) {
  require(gradients.channels >= 1 && gradients.plane_size() >= 1,
          "grad_weights: empty gradient stack");
  std::vector<double> weights(gradients.channels, 0.0);
  const double inv = 1.0 / static_cast<double>(gradients.plane_size());
  for (int k = 0; k < gradients.channels; ++k) {
    const double* plane = gradients.channel_data(k);
    double acc = 0.0;
    for (std::size_t i = 0; i < gradients.plane_size(); ++i) acc += plane[i];
    weights[k] = acc * inv;
  }
  return weights;
}

SwitchScores switch_scores_with_base(const Model& model, const Tensor3& image,
                                     const std::vector<ChannelGroup>& groups,
                                     int class_index, const CombineConfig& config,
                                     double base_score) {
  const int k = model.channel_count();
  require(static_cast<int>(groups.size()) == k,
          "switch_scores: need exactly one group per channel");
  require(class_index >= 0 && class_index < model.class_count(),
          "switch_scores: class index out of range");

  std::vector<ChannelMask> masks;
  masks.reserve(config.use_switch_on ? 2 * groups.size() : groups.size());
  for (const ChannelGroup& group : groups) {
    masks.push_back(ChannelMask::with_off(k, group));
  }
  if (config.use_switch_on) {
    for (const ChannelGroup& group : groups) {
      masks.push_back(ChannelMask::only_on(k, group));
    }
  }
  const std::vector<ClassScores> scores = model.batch_masked_forward(image, masks);

  SwitchScores out;
  out.off.resize(k);
  out.combined.resize(k);
  for (int i = 0; i < k; ++i) {
    out.off[i] = base_score - scores[i].values[class_index];
  }
  if (config.use_switch_on) {
    out.on.resize(k);
    for (int i = 0; i < k; ++i) {
      out.on[i] = scores[k + i].values[class_index];
      out.combined[i] = 0.5 * (out.off[i] + out.on[i]);
    }
  } else {
    out.combined = out.off;
  }
  return out;
}

SwitchScores switch_scores(const Model& model, const Tensor3& image,
                           const std::vector<ChannelGroup>& groups, int class_index,
                           const CombineConfig& config) {
  require(class_index >= 0 && class_index < model.class_count(),
          "switch_scores: class index out of range");
  const ClassScores base = model.forward_scores(image);
  return switch_scores_with_base(model, image, groups, class_index, config,
                                 base.values[class_index]);
}

std::vector<double> min_max_normalize(const std::vector<double>& w) {
  require(!w.empty(), "min_max_normalize: empty vector");
  require_finite(w, "min_max_normalize");
  const auto [lo_it, hi_it] = std::minmax_element(w.begin(), w.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  std::vector<double> out(w.size(), 0.0);
  if (range <= kDegenerateRange) return out;  // degenerate: all zeros
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = (w[i] - lo) / range;
  return out;
}

std::vector<double> combine_weights(const std::vector<double>& alpha_hat,
                                    const std::vector<double>& s_hat,
                                    const CombineConfig& config) {
  require(alpha_hat.size() == s_hat.size() || config.scheme == CombineScheme::score_only,
          "combine_weights: length mismatch");
  std::vector<double> out(s_hat.size(), 0.0);
  switch (config.scheme) {
    case CombineScheme::exp_bias:
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = alpha_hat[i] * std::exp(s_hat[i]) - config.bias;
      }
      break;
    case CombineScheme::exp_no_bias:
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = alpha_hat[i] * std::exp(s_hat[i]);
      }
      break;
    case CombineScheme::product:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha_hat[i] * s_hat[i];
      break;
    case CombineScheme::score_only:
      out = s_hat;
      break;
  }
  return out;
}

std::vector<double> fd_weights(const Model& model, const Tensor3& image, int class_index,
                               const CombineConfig& config, WeightBreakdown* breakdown) {
  require(class_index >= 0 && class_index < model.class_count(),
          "fd_weights: class index out of range");
  Evaluation eval = model.forward_with_activations(image);
  const double base_score = eval.scores.values[class_index];

  const std::vector<ChannelGroup> groups =
      config.use_grouping ? all_groups(similarity_matrix(eval.activations), config.theta)
                          : singleton_groups(model.channel_count());

  const SwitchScores scores =
      switch_scores_with_base(model, image, groups, class_index, config, base_score);

  std::vector<double> omega;
  std::vector<double> alpha, alpha_hat, s_hat;
  if (config.scheme == CombineScheme::score_only) {
    // The ablation-style reduction passes the raw scores through; min-max
    // rescaling is not invariant under the later ReLU, so it is skipped here.
    omega = scores.combined;
  } else {
    alpha = grad_weights(model.activation_gradients(image, class_index));
    alpha_hat = min_max_normalize(alpha);
    s_hat = min_max_normalize(scores.combined);
    omega = combine_weights(alpha_hat, s_hat, config);
  }

  if (breakdown) {
    breakdown->alpha = std::move(alpha);
    breakdown->s_off = scores.off;
    breakdown->s_on = scores.on;
    breakdown->s = scores.combined;
    breakdown->alpha_hat = std::move(alpha_hat);
    breakdown->s_hat = std::move(s_hat);
    breakdown->omega = omega;
    breakdown->groups = groups;
    breakdown->activations = std::move(eval.activations);
    breakdown->base_score = base_score;
  }
  return omega;
}

std::string weight_breakdown_to_json(const WeightBreakdown& breakdown) {
  nlohmann::json doc;
  doc["alpha"] = breakdown.alpha;
  doc["s_off"] = breakdown.s_off;
  doc["s_on"] = breakdown.s_on;
  doc["s"] = breakdown.s;
  doc["alpha_hat"] = breakdown.alpha_hat;
  doc["s_hat"] = breakdown.s_hat;
  doc["omega"] = breakdown.omega;
  doc["groups"] = breakdown.groups;
  return doc.dump(2);
}

}  // namespace fdcam
