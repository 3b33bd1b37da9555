#pragma once

#include <cstdint>
#include <vector>

#include "fdcam/shapes.hpp"
#include "fdcam/tiny_cnn.hpp"

namespace fdcam {

struct TrainConfig {
  int epochs = 100;
  int batch_size = 8;
  double learning_rate = 0.01;
  double decay_factor = 0.3;      // learning rate multiplier after decay_epoch
  int decay_epoch = 60;
  std::uint64_t seed = 0;         // shuffling stream, separate from the weights seed
  double early_stop_accuracy = 0.999;
};

struct TrainResult {
  int epochs_run = 0;
  double final_train_loss = 0.0;
  double val_accuracy = 0.0;
};

// Adam on softmax cross-entropy, deterministic given the seeds.
TrainResult train_tiny_cnn(TinyCnn& model, const std::vector<ShapeSample>& train_samples,
                           const std::vector<ShapeSample>& val_samples,
                           const TrainConfig& config);

double classification_accuracy(const TinyCnn& model,
                               const std::vector<ShapeSample>& samples);

}  // namespace fdcam
