#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fdcam/metrics.hpp"
#include "fdcam/tiny_cnn.hpp"
#include "fdcam/weighting.hpp"

namespace fdcam {

// Effective run configuration, fully serialized into every output's
// metadata. Precedence: CLI flags > config file > these defaults.
struct RunConfig {
  std::string model = "tiny:0";  // checkpoint path or "tiny:<seed>"
  std::string layer = "conv2";
  std::string score_mode = "probability";
  std::string method = "fd-cam";  // fd-cam | grad-cam | ablation-reduced
  double theta = 5.0;
  double bias = 0.5;
  std::string scheme = "exp_bias";
  bool switch_on = true;
  bool grouping = true;
  double step = 0.036;
  std::string deletion_baseline = "zeros";
  std::string insertion_baseline = "blur";
  std::string out = "out";
  std::uint64_t seed = 0;
  std::optional<int> class_index;
  bool dump_weights = false;

  // Dataset and training knobs (make-shapes / train-tiny).
  int image_size = 32;
  int samples_per_class = 100;
  int epochs = 60;
  std::string data;  // optional dataset directory for train-tiny
};

std::string run_config_to_json(const RunConfig& config);

// Builds the model handle: "tiny:<seed>" constructs the reference tiny CNN,
// anything else is treated as a checkpoint path. Applies layer and score
// mode.
TinyCnn load_model(const RunConfig& config);

CombineConfig combine_config_from(const RunConfig& config);
PerturbationConfig perturbation_config_from(const RunConfig& config);

// Maps the configured method name onto a saliency function.
SaliencyFn saliency_method_from(const RunConfig& config);

}  // namespace fdcam
