#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fdcam/commands.hpp"
#include "fdcam/errors.hpp"

namespace {

// Shared flags; every value lands in the RunConfig that gets echoed into all
// outputs. Each subcommand also accepts --config <file> with plain
// key = value lines (flag names without the leading dashes).
void add_common_options(CLI::App* cmd, fdcam::RunConfig& cfg, int& class_flag) {
  cmd->add_option("--model", cfg.model, "Model spec: checkpoint path or tiny:<seed>");
  cmd->add_option("--layer", cfg.layer, "Target layer id (conv1 or conv2)");
  cmd->add_option("--method", cfg.method, "fd-cam, grad-cam or ablation-reduced");
  cmd->add_option("--theta", cfg.theta, "Similarity group percentile in (0, 100]");
  cmd->add_option("--bias", cfg.bias, "Combination bias b");
  cmd->add_option("--scheme", cfg.scheme,
                  "Weight combination: exp_bias, exp_no_bias, product, score_only");
  cmd->add_option("--score-mode", cfg.score_mode, "probability or logit");
  cmd->add_option("--step", cfg.step, "Perturbation step fraction per curve point");
  cmd->add_option("--class", class_flag, "Class index to explain (default: top-1)");
  cmd->add_option("--out", cfg.out, "Output directory");
  cmd->add_option("--seed", cfg.seed, "Seed for model construction / generation");
  cmd->add_flag("--switch-on,!--no-switch-on", cfg.switch_on,
                "Use the switch-on score (Eq. on-side)")
      ->default_val(true);
  cmd->add_flag("--grouping,!--no-grouping", cfg.grouping, "Use similarity grouping")
      ->default_val(true);
  cmd->add_option("--deletion-baseline", cfg.deletion_baseline, "zeros or blur");
  cmd->add_option("--insertion-baseline", cfg.insertion_baseline, "zeros or blur");
  cmd->add_flag("--dump-weights", cfg.dump_weights,
                "Embed the weight breakdown in the sidecar JSON");
  cmd->set_config("--config", "", "Config file (key = value); flags take precedence");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FD-CAM: faithful and discriminative CAM explanations for small CNNs"};
  app.require_subcommand(1);

  fdcam::RunConfig cfg;
  int class_flag = -1;

  std::string image_path;
  std::string dataset_dir;
  std::string metric = "faithfulness";
  std::vector<int> channels;

  CLI::App* explain = app.add_subcommand("explain", "Explain one image");
  explain->add_option("image", image_path, "Input image")->required();
  add_common_options(explain, cfg, class_flag);

  CLI::App* groups = app.add_subcommand("groups", "Visualize channel similarity groups");
  groups->add_option("image", image_path, "Input image")->required();
  groups->add_option("--channels", channels, "Anchor channels (default: all)");
  add_common_options(groups, cfg, class_flag);

  CLI::App* evaluate = app.add_subcommand("evaluate", "Evaluate a method on a dataset");
  evaluate->add_option("dataset", dataset_dir, "Dataset directory")->required();
  evaluate->add_option("--metric", metric, "faithfulness or pointing");
  add_common_options(evaluate, cfg, class_flag);

  CLI::App* make_shapes =
      app.add_subcommand("make-shapes", "Generate the synthetic shapes dataset");
  make_shapes->add_option("--samples-per-class", cfg.samples_per_class, "Images per class");
  make_shapes->add_option("--image-size", cfg.image_size, "Square image size");
  add_common_options(make_shapes, cfg, class_flag);

  CLI::App* train_tiny = app.add_subcommand("train-tiny", "Train the tiny test CNN");
  train_tiny->add_option("--data", cfg.data, "Existing dataset directory (else generated)");
  train_tiny->add_option("--epochs", cfg.epochs, "Max training epochs");
  train_tiny->add_option("--samples-per-class", cfg.samples_per_class, "Images per class");
  train_tiny->add_option("--image-size", cfg.image_size, "Square image size");
  add_common_options(train_tiny, cfg, class_flag);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (class_flag >= 0) cfg.class_index = class_flag;

  try {
    if (explain->parsed()) {
      fdcam::cmd_explain(cfg, image_path);
    } else if (groups->parsed()) {
      fdcam::cmd_groups(cfg, image_path, channels);
    } else if (evaluate->parsed()) {
      fdcam::cmd_evaluate(cfg, dataset_dir, metric);
    } else if (make_shapes->parsed()) {
      fdcam::cmd_make_shapes(cfg);
    } else if (train_tiny->parsed()) {
      fdcam::cmd_train_tiny(cfg);
    }
  } catch (const fdcam::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fdcam::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
