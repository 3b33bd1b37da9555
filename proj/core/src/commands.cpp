#include "fdcam/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fdcam/cam.hpp"
#include "fdcam/errors.hpp"
#include "fdcam/image_io.hpp"
#include "fdcam/imageproc.hpp"
#include "fdcam/metrics.hpp"
#include "fdcam/plot.hpp"
#include "fdcam/shapes.hpp"
#include "fdcam/train.hpp"

namespace fdcam {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory: " + dir.string());
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write: " + path.string());
  out << content;
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

Tensor3 prepare_input(const TinyCnn& model, const Tensor3& image) {
  if (image.height == model.input_height() && image.width == model.input_width()) {
    return image;
  }
  return resize_bilinear(image, model.input_height(), model.input_width());
}

int resolve_class(const RunConfig& config, const TinyCnn& model, const Tensor3& image) {
  if (config.class_index) {
    require(*config.class_index >= 0 && *config.class_index < model.class_count(),
            "class index out of range");
    return *config.class_index;
  }
  const ClassScores scores = model.forward_scores(image);
  return static_cast<int>(std::distance(
      scores.values.begin(),
      std::max_element(scores.values.begin(), scores.values.end())));
}

json breakdown_to_json_value(const WeightBreakdown& breakdown) {
  return json::parse(weight_breakdown_to_json(breakdown));
}

// The saliency method runs on the handle configured by the user, regardless
// of the (probability-mode) handle the metrics pass in for curve scoring.
SaliencyFn bind_method(const RunConfig& config, const TinyCnn& saliency_model) {
  const SaliencyFn base = saliency_method_from(config);
  return [&saliency_model, base](const Model&, const Tensor3& image, int class_index) {
    return base(saliency_model, image, class_index);
  };
}

}  // namespace

void cmd_explain(const RunConfig& config, const std::string& image_path) {
  const TinyCnn model = load_model(config);
  const Tensor3 raw = load_image_rgb(image_path);
  const Tensor3 image = prepare_input(model, raw);
  const int class_index = resolve_class(config, model, image);

  SaliencyMap saliency;
  WeightBreakdown breakdown;
  bool have_breakdown = false;
  if (config.method == "grad-cam") {
    saliency = grad_cam(model, image, class_index);
  } else if (config.method == "fd-cam" || config.method == "ablation-reduced") {
    saliency = fd_cam(model, image, class_index, combine_config_from(config),
                      config.dump_weights ? &breakdown : nullptr);
    have_breakdown = config.dump_weights;
  } else {
    throw ConfigError("unknown method '" + config.method +
                      "' (expected fd-cam, grad-cam or ablation-reduced)");
  }

  const fs::path out_dir(config.out);
  ensure_dir(out_dir);
  const std::string stem = stem_of(image_path) + "_" + config.method;
  const std::string saliency_name = stem + "_saliency.png";
  const std::string overlay_name = stem + "_overlay.png";
  save_saliency_png16((out_dir / saliency_name).string(), saliency.map);
  save_image_rgb8((out_dir / overlay_name).string(),
                  overlay_heatmap(image, saliency.map, 0.5));

  json sidecar;
  sidecar["class_index"] = class_index;
  sidecar["method_tag"] = saliency.method_tag;
  sidecar["score_mode"] = config.score_mode;
  sidecar["config"] = json::parse(run_config_to_json(config));
  sidecar["model_parameter_hash"] = model.parameter_hash();
  sidecar["files"] = {{"saliency", saliency_name}, {"overlay", overlay_name}};
  if (have_breakdown) sidecar["weights"] = breakdown_to_json_value(breakdown);
  write_text(out_dir / (stem + "_saliency.json"), sidecar.dump(2) + "\n");

  std::cout << (out_dir / saliency_name).string() << "\n"
            << (out_dir / overlay_name).string() << "\n"
            << (out_dir / (stem + "_saliency.json")).string() << "\n";
}

void cmd_groups(const RunConfig& config, const std::string& image_path,
                const std::vector<int>& channels) {
  const TinyCnn model = load_model(config);
  const Tensor3 image = prepare_input(model, load_image_rgb(image_path));
  const Evaluation eval = model.forward_with_activations(image);
  const SimilarityMatrix matrix = similarity_matrix(eval.activations);
  const std::vector<ChannelGroup> groups = all_groups(matrix, config.theta);

  std::vector<int> requested = channels;
  if (requested.empty()) {
    requested.resize(model.channel_count());
    for (int k = 0; k < model.channel_count(); ++k) requested[k] = k;
  }
  for (int k : requested) {
    require(k >= 0 && k < model.channel_count(), "channel index out of range");
  }

  std::vector<std::vector<Grid>> rows;
  for (int anchor : requested) {
    std::vector<Grid> row;
    row.push_back(eval.activations.channel(anchor));
    for (int member : groups[anchor]) {
      if (member != anchor) row.push_back(eval.activations.channel(member));
    }
    rows.push_back(std::move(row));
  }

  const fs::path out_dir(config.out);
  ensure_dir(out_dir);
  const std::string stem = stem_of(image_path);
  save_image_rgb8((out_dir / (stem + "_groups_sheet.png")).string(),
                  contact_sheet(rows, 6));

  json doc = json::parse(groups_to_json(groups, model.channel_count(), config.theta));
  doc["channels"] = requested;
  doc["config"] = json::parse(run_config_to_json(config));
  doc["model_parameter_hash"] = model.parameter_hash();
  write_text(out_dir / (stem + "_groups.json"), doc.dump(2) + "\n");

  std::cout << (out_dir / (stem + "_groups_sheet.png")).string() << "\n"
            << (out_dir / (stem + "_groups.json")).string() << "\n";
}

void cmd_evaluate(const RunConfig& config, const std::string& dataset_dir,
                  const std::string& metric) {
  const LoadedDataset dataset = load_dataset(dataset_dir);
  std::vector<int> indices = dataset.val_indices;
  if (indices.empty()) {
    indices.resize(dataset.samples.size());
    for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
      indices[i] = static_cast<int>(i);
    }
  }
  require(!indices.empty(), "empty dataset: " + dataset_dir);

  const TinyCnn saliency_model = load_model(config);
  const SaliencyFn method = bind_method(config, saliency_model);
  const fs::path out_dir(config.out);
  ensure_dir(out_dir);
  const std::string config_json = run_config_to_json(config);
  const std::string model_hash = saliency_model.parameter_hash();

  if (metric == "faithfulness") {
    TinyCnn scoring_model = saliency_model;
    scoring_model.set_score_mode(ScoreMode::probability);

    std::vector<FaithfulnessSample> samples;
    for (int i : indices) {
      samples.push_back(FaithfulnessSample{
          dataset.names[i], prepare_input(saliency_model, dataset.samples[i].image)});
    }
    const FaithfulnessReport report =
        evaluate_faithfulness(samples, method, scoring_model,
                              perturbation_config_from(config), config.class_index);

    write_text(out_dir / "report.json",
               faithfulness_report_to_json(report, config_json, model_hash));
    write_text(out_dir / "report.csv",
               faithfulness_report_to_csv(report, config_json, model_hash));
    ensure_dir(out_dir / "curves");
    for (const FaithfulnessRecord& record : report.records) {
      const Tensor3 plot =
          render_curve_plot(record.deletion, record.insertion, record.deletion_auc,
                            record.insertion_auc, stem_of(record.name));
      save_image_rgb8((out_dir / "curves" / (stem_of(record.name) + ".png")).string(),
                      plot);
    }
    std::cout << "images: " << report.records.size()
              << " insertion_auc: " << report.mean_insertion_auc
              << " deletion_auc: " << report.mean_deletion_auc
              << " overall: " << report.overall << "\n"
              << (out_dir / "report.json").string() << "\n";
    return;
  }

  if (metric == "pointing") {
    std::map<std::string, int> class_indices;
    for (std::size_t i = 0; i < dataset.class_names.size(); ++i) {
      class_indices[dataset.class_names[i]] = static_cast<int>(i);
    }
    std::vector<PointingSample> samples;
    for (int i : indices) {
      const ShapeSample& sample = dataset.samples[i];
      PointingSample p;
      p.name = dataset.names[i];
      p.image = prepare_input(saliency_model, sample.image);
      p.boxes.push_back(scale_box(sample.box, sample.image.width, sample.image.height,
                                  p.image.width, p.image.height));
      samples.push_back(std::move(p));
    }
    const PointingTally tally =
        pointing_tally(samples, class_indices, method, saliency_model);

    write_text(out_dir / "pointing.json",
               pointing_report_to_json(tally, config_json, model_hash) + "\n");
    std::ostringstream csv;
    csv.precision(10);
    csv << "# config=" << json::parse(config_json).dump() << " model_hash=" << model_hash
        << "\n"
        << "hits,misses,accuracy\n"
        << tally.hits << "," << tally.misses << "," << tally.accuracy() << "\n";
    write_text(out_dir / "pointing.csv", csv.str());
    std::cout << "hits: " << tally.hits << " misses: " << tally.misses
              << " accuracy: " << tally.accuracy() << "\n"
              << (out_dir / "pointing.json").string() << "\n";
    return;
  }

  throw ConfigError("unknown metric '" + metric + "' (expected faithfulness or pointing)");
}

void cmd_make_shapes(const RunConfig& config) {
  ShapesDatasetSpec spec;
  spec.image_size = config.image_size;
  spec.samples_per_class = config.samples_per_class;
  spec.seed = config.seed;
  const ShapesDataset dataset = generate_shapes_dataset(spec);
  write_shapes_dataset(dataset, config.out, run_config_to_json(config));
  std::cout << "wrote " << dataset.samples.size() << " images ("
            << dataset.train_indices.size() << " train, " << dataset.val_indices.size()
            << " val) to " << config.out << "\n";
}

void cmd_train_tiny(const RunConfig& config) {
  std::vector<ShapeSample> train_samples, val_samples;
  int input_size = config.image_size;
  if (config.data.empty()) {
    ShapesDatasetSpec spec;
    spec.image_size = config.image_size;
    spec.samples_per_class = config.samples_per_class;
    spec.seed = config.seed;
    ShapesDataset dataset = generate_shapes_dataset(spec);
    for (int i : dataset.train_indices) train_samples.push_back(dataset.samples[i]);
    for (int i : dataset.val_indices) val_samples.push_back(dataset.samples[i]);
  } else {
    LoadedDataset dataset = load_dataset(config.data);
    require(!dataset.train_indices.empty() && !dataset.val_indices.empty(),
            "dataset has no train/val split: " + config.data);
    for (int i : dataset.train_indices) train_samples.push_back(dataset.samples[i]);
    for (int i : dataset.val_indices) val_samples.push_back(dataset.samples[i]);
    input_size = dataset.image_size;
  }

  TinyCnn model(config.seed, input_size);
  model.set_target_layer(config.layer);
  model.set_score_mode(score_mode_from_string(config.score_mode));

  TrainConfig train_config;
  train_config.epochs = config.epochs;
  train_config.seed = config.seed;
  const TrainResult result = train_tiny_cnn(model, train_samples, val_samples, train_config);

  if (result.val_accuracy < 0.95) {
    std::ostringstream oss;
    oss << "training reached only " << result.val_accuracy * 100.0
        << "% validation accuracy (needs 95%)";
    throw NumericError(oss.str());
  }

  const fs::path out_dir(config.out);
  ensure_dir(out_dir);
  model.save_checkpoint((out_dir / "tiny_cnn.json").string());

  json metrics;
  metrics["val_accuracy"] = result.val_accuracy;
  metrics["epochs_run"] = result.epochs_run;
  metrics["final_train_loss"] = result.final_train_loss;
  metrics["train_samples"] = train_samples.size();
  metrics["val_samples"] = val_samples.size();
  metrics["config"] = json::parse(run_config_to_json(config));
  metrics["model_parameter_hash"] = model.parameter_hash();
  write_text(out_dir / "train_metrics.json", metrics.dump(2) + "\n");

  std::cout << "val_accuracy: " << result.val_accuracy << " epochs: " << result.epochs_run
            << "\n"
            << (out_dir / "tiny_cnn.json").string() << "\n";
}

}  // namespace fdcam
