#include "fdcam/config.hpp"

#include <nlohmann/json.hpp>

#include "fdcam/cam.hpp"
#include "fdcam/errors.hpp"

namespace fdcam {
namespace {

using json = nlohmann::json;

}  // namespace

std::string run_config_to_json(const RunConfig& config) {
  json doc;
  doc["model"] = config.model;
  doc["layer"] = config.layer;
  doc["score_mode"] = config.score_mode;
  doc["method"] = config.method;
  doc["theta"] = config.theta;
  doc["bias"] = config.bias;
  doc["scheme"] = config.scheme;
  doc["switch_on"] = config.switch_on;
  doc["grouping"] = config.grouping;
  doc["step"] = config.step;
  doc["deletion_baseline"] = config.deletion_baseline;
  doc["insertion_baseline"] = config.insertion_baseline;
  doc["out"] = config.out;
  doc["seed"] = config.seed;
  if (config.class_index) {
    doc["class"] = *config.class_index;
  } else {
    doc["class"] = nullptr;
  }
  doc["dump_weights"] = config.dump_weights;
  doc["image_size"] = config.image_size;
  doc["samples_per_class"] = config.samples_per_class;
  doc["epochs"] = config.epochs;
  doc["data"] = config.data;
  return doc.dump();
}

TinyCnn load_model(const RunConfig& config) {
  constexpr const char* kTinyPrefix = "tiny:";
  if (config.model.rfind(kTinyPrefix, 0) == 0) {
    const std::string seed_text = config.model.substr(std::string(kTinyPrefix).size());
    std::uint64_t seed = 0;
    try {
      seed = std::stoull(seed_text);
    } catch (const std::exception&) {
      throw ConfigError("bad tiny CNN spec '" + config.model + "' (expected tiny:<seed>)");
    }
    TinyCnn model = make_tiny_test_cnn(seed);
    model.set_target_layer(config.layer);
    model.set_score_mode(score_mode_from_string(config.score_mode));
    return model;
  }
  TinyCnn model = TinyCnn::load_checkpoint(config.model);
  model.set_target_layer(config.layer);
  model.set_score_mode(score_mode_from_string(config.score_mode));
  return model;
}

CombineConfig combine_config_from(const RunConfig& config) {
  CombineConfig combine;
  combine.theta = config.theta;
  combine.bias = config.bias;
  if (config.method == "ablation-reduced") {
    combine.scheme = CombineScheme::score_only;
    combine.use_grouping = false;
    combine.use_switch_on = false;
    return combine;
  }
  combine.scheme = combine_scheme_from_string(config.scheme);
  combine.use_switch_on = config.switch_on;
  combine.use_grouping = config.grouping;
  return combine;
}

PerturbationConfig perturbation_config_from(const RunConfig& config) {
  PerturbationConfig perturbation;
  perturbation.step_fraction = config.step;
  perturbation.deletion_baseline = perturb_baseline_from_string(config.deletion_baseline);
  perturbation.insertion_baseline =
      perturb_baseline_from_string(config.insertion_baseline);
  return perturbation;
}

SaliencyFn saliency_method_from(const RunConfig& config) {
  if (config.method == "grad-cam") {
    return [](const Model& model, const Tensor3& image, int class_index) {
      return grad_cam(model, image, class_index);
    };
  }
  if (config.method == "fd-cam" || config.method == "ablation-reduced") {
    const CombineConfig combine = combine_config_from(config);
    return [combine](const Model& model, const Tensor3& image, int class_index) {
      return fd_cam(model, image, class_index, combine);
    };
  }
  throw ConfigError("unknown method '" + config.method +
                    "' (expected fd-cam, grad-cam or ablation-reduced)");
}

}  // namespace fdcam
