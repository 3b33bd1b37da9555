#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fdcam/annotations.hpp"
#include "fdcam/cam.hpp"
#include "fdcam/model.hpp"
#include "fdcam/tensor.hpp"

namespace fdcam {

enum class CurveDirection { deletion, insertion };

// Class probability as a function of the fraction of pixels perturbed in
// saliency order. Fractions ascend from 0 to 1.
struct PerturbationCurve {
  CurveDirection direction = CurveDirection::deletion;
  std::vector<double> fractions;
  std::vector<double> scores;
};

enum class PerturbBaseline { zeros, blur };

std::string to_string(PerturbBaseline baseline);
PerturbBaseline perturb_baseline_from_string(const std::string& name);

struct PerturbationConfig {
  double step_fraction = 0.036;
  PerturbBaseline deletion_baseline = PerturbBaseline::zeros;
  PerturbBaseline insertion_baseline = PerturbBaseline::blur;
  int blur_kernel = 11;
  double blur_sigma = 5.0;
};

struct PointingTally {
  long hits = 0;
  long misses = 0;
  double accuracy() const;
};

// Pixel indices sorted by saliency descending, ties toward the smaller
// row-major index.
std::vector<int> ranked_pixels(const Grid& saliency);

// Replaces the highest-saliency pixels of the image by the deletion baseline
// in floor(step * H * W)-pixel steps (the final step takes all remaining
// pixels) and records the class probability at fractions 0, step, ..., 1.
PerturbationCurve deletion_curve(const Model& model, const Tensor3& image,
                                 const SaliencyMap& saliency, int class_index,
                                 const PerturbationConfig& config = {});

// Starts from the insertion baseline and restores original pixels in the
// same order and schedule.
PerturbationCurve insertion_curve(const Model& model, const Tensor3& image,
                                  const SaliencyMap& saliency, int class_index,
                                  const PerturbationConfig& config = {});

// Trapezoidal integral of the scores over the fraction axis.
double auc(const PerturbationCurve& curve);

// Insertion minus deletion; higher is better.
double overall_metric(double insertion_auc, double deletion_auc);

// Whether the saliency argmax (ties toward the smaller row-major index)
// falls inside any box of the queried class. At least one such box must
// exist.
bool pointing_game(const SaliencyMap& saliency, const std::vector<BoundingBox>& boxes,
                   const std::string& class_label);

// Produces the explanation for one (image, class) pair.
using SaliencyFn = std::function<SaliencyMap(const Model&, const Tensor3&, int)>;

struct PointingSample {
  std::string name;
  Tensor3 image;                   // already at model input size
  std::vector<BoundingBox> boxes;  // in model input coordinates
};

// One pointing-game trial per class annotated in each image.
PointingTally pointing_tally(const std::vector<PointingSample>& samples,
                             const std::map<std::string, int>& class_indices,
                             const SaliencyFn& method, const Model& model);
double pointing_accuracy(const std::vector<PointingSample>& samples,
                         const std::map<std::string, int>& class_indices,
                         const SaliencyFn& method, const Model& model);

struct FaithfulnessSample {
  std::string name;
  Tensor3 image;
};

struct FaithfulnessRecord {
  std::string name;
  int class_index = 0;
  PerturbationCurve deletion, insertion;
  double deletion_auc = 0.0, insertion_auc = 0.0;
};

struct FaithfulnessReport {
  std::vector<FaithfulnessRecord> records;
  double mean_deletion_auc = 0.0;
  double mean_insertion_auc = 0.0;
  double overall = 0.0;  // mean insertion AUC - mean deletion AUC
  PerturbationConfig config;
};

// Runs deletion and insertion per image for the method's saliency of the
// top-predicted class (or `class_override` when given) and aggregates the
// mean AUCs.
FaithfulnessReport evaluate_faithfulness(const std::vector<FaithfulnessSample>& samples,
                                         const SaliencyFn& method, const Model& model,
                                         const PerturbationConfig& config = {},
                                         std::optional<int> class_override = {});

// Report serialization; `config_json` is the effective run configuration as
// a JSON object string, embedded verbatim.
std::string faithfulness_report_to_json(const FaithfulnessReport& report,
                                        const std::string& config_json,
                                        const std::string& model_hash);
std::string faithfulness_report_to_csv(const FaithfulnessReport& report,
                                       const std::string& config_json,
                                       const std::string& model_hash);
std::string pointing_report_to_json(const PointingTally& tally,
                                    const std::string& config_json,
                                    const std::string& model_hash);

}  // namespace fdcam
