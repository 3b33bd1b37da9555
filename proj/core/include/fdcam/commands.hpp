#pragma once

#include <string>
#include <vector>

#include "fdcam/config.hpp"

namespace fdcam {

// Command implementations behind the CLI; all throw InputError/ConfigError
// for user mistakes and NumericError for numeric/model failures. Outputs go
// under config.out.

// Saliency PNG (16-bit), jet overlay PNG and a JSON sidecar for one image.
void cmd_explain(const RunConfig& config, const std::string& image_path);

// Contact sheet of the requested channels and their similarity groups plus
// the group-membership JSON. An empty channel list renders every channel.
void cmd_groups(const RunConfig& config, const std::string& image_path,
                const std::vector<int>& channels);

// metric is "faithfulness" (deletion/insertion report + curve plots) or
// "pointing" (hit/miss tally). Evaluates the validation split when the
// dataset has one.
void cmd_evaluate(const RunConfig& config, const std::string& dataset_dir,
                  const std::string& metric);

// Deterministic synthetic shapes dataset at config.out.
void cmd_make_shapes(const RunConfig& config);

// Trains the tiny CNN on generated (or --data) shapes, enforces the 95%
// validation-accuracy gate and writes checkpoint + metrics.
void cmd_train_tiny(const RunConfig& config);

}  // namespace fdcam
