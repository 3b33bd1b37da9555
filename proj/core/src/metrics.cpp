#include "fdcam/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fdcam/errors.hpp"
#include "fdcam/imageproc.hpp"

namespace fdcam {
namespace {

using json = nlohmann::json;

Tensor3 baseline_image(const Tensor3& image, PerturbBaseline baseline,
                       const PerturbationConfig& config) {
  if (baseline == PerturbBaseline::zeros) {
    return Tensor3(image.channels, image.height, image.width, 0.0);
  }
  return gaussian_blur(image, config.blur_kernel, config.blur_sigma);
}

void copy_pixel(Tensor3& dst, const Tensor3& src, int flat_index) {
  const int y = flat_index / dst.width;
  const int x = flat_index % dst.width;
  for (int c = 0; c < dst.channels; ++c) {
    dst.at(c, y, x) = src.at(c, y, x);
  }
}

PerturbationCurve run_perturbation(const Model& model, const Tensor3& image,
                                   const SaliencyMap& saliency, int class_index,
                                   const PerturbationConfig& config,
                                   CurveDirection direction) {
  require(model.score_mode() == ScoreMode::probability,
          "perturbation curves require a probability-mode model");
  require(class_index >= 0 && class_index < model.class_count(),
          "perturbation curve: class index out of range");
  require(saliency.map.height == image.height && saliency.map.width == image.width,
          "perturbation curve: saliency shape must match the image");
  require(config.step_fraction > 0.0 && config.step_fraction < 1.0,
          "perturbation curve: step fraction must be in (0, 1)");

  const Tensor3 target =
      direction == CurveDirection::deletion
          ? baseline_image(image, config.deletion_baseline, config)
          : image;
  Tensor3 work = direction == CurveDirection::deletion
                     ? image
                     : baseline_image(image, config.insertion_baseline, config);

  const std::vector<int> order = ranked_pixels(saliency.map);
  const int total = static_cast<int>(order.size());
  const int per_step =
      static_cast<int>(std::floor(config.step_fraction * static_cast<double>(total)));

  PerturbationCurve curve;
  curve.direction = direction;
  curve.fractions.push_back(0.0);
  curve.scores.push_back(model.forward_scores(work).values[class_index]);

  int consumed = 0;
  for (int i = 1; i * config.step_fraction < 1.0 - 1e-12; ++i) {
    const int stop = std::min(total, consumed + per_step);
    for (; consumed < stop; ++consumed) copy_pixel(work, target, order[consumed]);
    curve.fractions.push_back(i * config.step_fraction);
    curve.scores.push_back(model.forward_scores(work).values[class_index]);
  }
  for (; consumed < total; ++consumed) copy_pixel(work, target, order[consumed]);
  curve.fractions.push_back(1.0);
  curve.scores.push_back(model.forward_scores(work).values[class_index]);
  return curve;
}

json curve_to_json(const PerturbationCurve& curve) {
  return json{{"fractions", curve.fractions}, {"scores", curve.scores}};
}

}  // namespace

std::string to_string(PerturbBaseline baseline) {
  return baseline == PerturbBaseline::zeros ? "zeros" : "blur";
}

PerturbBaseline perturb_baseline_from_string(const std::string& name) {
  if (name == "zeros") return PerturbBaseline::zeros;
  if (name == "blur") return PerturbBaseline::blur;
  throw ConfigError("unknown perturbation baseline '" + name + "' (expected zeros or blur)");
}

double PointingTally::accuracy() const {
  require(hits + misses > 0, "pointing accuracy undefined without trials");
  return static_cast<double>(hits) / static_cast<double>(hits + misses);
}

std::vector<int> ranked_pixels(const Grid& saliency) {
  require(saliency.size() >= 1, "ranked_pixels: empty map");
  std::vector<int> order(saliency.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&saliency](int a, int b) {
    const double va = saliency.values[a];
    const double vb = saliency.values[b];
    if (va != vb) return va > vb;
    return a < b;
  });
  return order;
}

PerturbationCurve deletion_curve(const Model& model, const Tensor3& image,
                                 const SaliencyMap& saliency, int class_index,
                                 const PerturbationConfig& config) {
  return run_perturbation(model, image, saliency, class_index, config,
                          CurveDirection::deletion);
}

PerturbationCurve insertion_curve(const Model& model, const Tensor3& image,
                                  const SaliencyMap& saliency, int class_index,
                                  const PerturbationConfig& config) {
  return run_perturbation(model, image, saliency, class_index, config,
                          CurveDirection::insertion);
}

double auc(const PerturbationCurve& curve) {
  require(curve.fractions.size() == curve.scores.size() && curve.fractions.size() >= 2,
          "auc: need at least two curve points");
  double area = 0.0;
  for (std::size_t i = 1; i < curve.fractions.size(); ++i) {
    const double dx = curve.fractions[i] - curve.fractions[i - 1];
    area += 0.5 * (curve.scores[i] + curve.scores[i - 1]) * dx;
  }
  return area;
}

double overall_metric(double insertion_auc, double deletion_auc) {
  return insertion_auc - deletion_auc;
}

bool pointing_game(const SaliencyMap& saliency, const std::vector<BoundingBox>& boxes,
                   const std::string& class_label) {
  require(saliency.map.size() >= 1, "pointing_game: empty saliency map");
  bool any = false;
  for (const BoundingBox& box : boxes) {
    if (box.label == class_label) any = true;
  }
  require(any, "pointing_game: no box with label '" + class_label + "'");

  int best = 0;
  for (int i = 1; i < static_cast<int>(saliency.map.size()); ++i) {
    if (saliency.map.values[i] > saliency.map.values[best]) best = i;
  }
  const int x = best % saliency.map.width;
  const int y = best / saliency.map.width;
  for (const BoundingBox& box : boxes) {
    if (box.label == class_label && box.contains(x, y)) return true;
  }
  return false;
}

PointingTally pointing_tally(const std::vector<PointingSample>& samples,
                             const std::map<std::string, int>& class_indices,
                             const SaliencyFn& method, const Model& model) {
  require(!samples.empty(), "pointing_tally: empty dataset");
  PointingTally tally;
  for (const PointingSample& sample : samples) {
    require(!sample.boxes.empty(), "pointing_tally: sample '" + sample.name +
                                       "' has no annotated boxes");
    std::set<std::string> labels;
    for (const BoundingBox& box : sample.boxes) {
      validate_box(box, sample.image.width, sample.image.height);
      labels.insert(box.label);
    }
    for (const std::string& label : labels) {
      const auto it = class_indices.find(label);
      require(it != class_indices.end(),
              "pointing_tally: no class index for label '" + label + "'");
      const SaliencyMap saliency = method(model, sample.image, it->second);
      if (pointing_game(saliency, sample.boxes, label)) {
        ++tally.hits;
      } else {
        ++tally.misses;
      }
    }
  }
  return tally;
}

double pointing_accuracy(const std::vector<PointingSample>& samples,
                         const std::map<std::string, int>& class_indices,
                         const SaliencyFn& method, const Model& model) {
  return pointing_tally(samples, class_indices, method, model).accuracy();
}

FaithfulnessReport evaluate_faithfulness(const std::vector<FaithfulnessSample>& samples,
                                         const SaliencyFn& method, const Model& model,
                                         const PerturbationConfig& config,
                                         std::optional<int> class_override) {
  require(!samples.empty(), "evaluate_faithfulness: empty dataset");
  FaithfulnessReport report;
  report.config = config;
  for (const FaithfulnessSample& sample : samples) {
    FaithfulnessRecord record;
    record.name = sample.name;
    if (class_override) {
      record.class_index = *class_override;
    } else {
      const ClassScores scores = model.forward_scores(sample.image);
      record.class_index = static_cast<int>(std::distance(
          scores.values.begin(),
          std::max_element(scores.values.begin(), scores.values.end())));
    }
    const SaliencyMap saliency = method(model, sample.image, record.class_index);
    record.deletion = deletion_curve(model, sample.image, saliency, record.class_index, config);
    record.insertion =
        insertion_curve(model, sample.image, saliency, record.class_index, config);
    record.deletion_auc = auc(record.deletion);
    record.insertion_auc = auc(record.insertion);
    report.records.push_back(std::move(record));
  }
  const double n = static_cast<double>(report.records.size());
  for (const FaithfulnessRecord& record : report.records) {
    report.mean_deletion_auc += record.deletion_auc;
    report.mean_insertion_auc += record.insertion_auc;
  }
  report.mean_deletion_auc /= n;
  report.mean_insertion_auc /= n;
  report.overall = overall_metric(report.mean_insertion_auc, report.mean_deletion_auc);
  return report;
}

std::string faithfulness_report_to_json(const FaithfulnessReport& report,
                                        const std::string& config_json,
                                        const std::string& model_hash) {
  json doc;
  doc["config"] = json::parse(config_json);
  doc["model_parameter_hash"] = model_hash;
  doc["perturbation"] = {
      {"step_fraction", report.config.step_fraction},
      {"deletion_baseline", to_string(report.config.deletion_baseline)},
      {"insertion_baseline", to_string(report.config.insertion_baseline)},
      {"blur_kernel", report.config.blur_kernel},
      {"blur_sigma", report.config.blur_sigma},
  };
  doc["aggregate"] = {
      {"images", report.records.size()},
      {"mean_insertion_auc", report.mean_insertion_auc},
      {"mean_deletion_auc", report.mean_deletion_auc},
      {"overall", report.overall},
  };
  json images = json::array();
  for (const FaithfulnessRecord& record : report.records) {
    images.push_back(json{
        {"name", record.name},
        {"class_index", record.class_index},
        {"insertion_auc", record.insertion_auc},
        {"deletion_auc", record.deletion_auc},
        {"overall", overall_metric(record.insertion_auc, record.deletion_auc)},
        {"deletion_curve", curve_to_json(record.deletion)},
        {"insertion_curve", curve_to_json(record.insertion)},
    });
  }
  doc["images"] = images;
  return doc.dump(2);
}

std::string faithfulness_report_to_csv(const FaithfulnessReport& report,
                                       const std::string& config_json,
                                       const std::string& model_hash) {
  std::ostringstream oss;
  oss.precision(10);
  oss << "# config=" << json::parse(config_json).dump() << " model_hash=" << model_hash
      << "\n";
  oss << "name,class_index,insertion_auc,deletion_auc,overall\n";
  for (const FaithfulnessRecord& record : report.records) {
    oss << record.name << "," << record.class_index << "," << record.insertion_auc << ","
        << record.deletion_auc << ","
        << overall_metric(record.insertion_auc, record.deletion_auc) << "\n";
  }
  oss << "mean," << "" << "," << report.mean_insertion_auc << ","
      << report.mean_deletion_auc << "," << report.overall << "\n";
  return oss.str();
}

std::string pointing_report_to_json(const PointingTally& tally,
                                    const std::string& config_json,
                                    const std::string& model_hash) {
  json doc;
  doc["config"] = json::parse(config_json);
  doc["model_parameter_hash"] = model_hash;
  doc["hits"] = tally.hits;
  doc["misses"] = tally.misses;
  doc["accuracy"] = tally.accuracy();
  return doc.dump(2);
}

}  // namespace fdcam
