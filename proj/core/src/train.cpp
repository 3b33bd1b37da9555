#include "fdcam/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fdcam/errors.hpp"
#include "fdcam/rng.hpp"

namespace fdcam {
namespace {

// Adam state for one parameter vector.
struct AdamSlot {
  std::vector<double> m, v;

  explicit AdamSlot(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

  void update(std::vector<double>& params, const std::vector<double>& grads,
              double lr, int t) {
    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double eps = 1e-8;
    const double bc1 = 1.0 - std::pow(beta1, t);
    const double bc2 = 1.0 - std::pow(beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
      m[i] = beta1 * m[i] + (1.0 - beta1) * grads[i];
      v[i] = beta2 * v[i] + (1.0 - beta2) * grads[i] * grads[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      params[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
};

int predict(const TinyCnn& model, const Tensor3& image) {
  const ClassScores scores = model.forward_scores(image);
  return static_cast<int>(std::distance(
      scores.values.begin(),
      std::max_element(scores.values.begin(), scores.values.end())));
}

}  // namespace

double classification_accuracy(const TinyCnn& model,
                               const std::vector<ShapeSample>& samples) {
  require(!samples.empty(), "classification_accuracy: empty sample set");
  int correct = 0;
  for (const ShapeSample& sample : samples) {
    if (predict(model, sample.image) == sample.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

TrainResult train_tiny_cnn(TinyCnn& model, const std::vector<ShapeSample>& train_samples,
                           const std::vector<ShapeSample>& val_samples,
                           const TrainConfig& config) {
  require(!train_samples.empty(), "train_tiny_cnn: empty training set");
  require(!val_samples.empty(), "train_tiny_cnn: empty validation set");
  require(config.epochs >= 1 && config.batch_size >= 1 && config.learning_rate > 0.0,
          "train_tiny_cnn: bad training configuration");

  TinyCnn::Params& params = model.params();
  AdamSlot adam_c1w(params.conv1_w.size()), adam_c1b(params.conv1_b.size());
  AdamSlot adam_c2w(params.conv2_w.size()), adam_c2b(params.conv2_b.size());
  AdamSlot adam_hw(params.head_w.size()), adam_hb(params.head_b.size());

  Rng shuffle_rng(config.seed);
  std::vector<int> order(train_samples.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  int step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = epoch >= config.decay_epoch
                          ? config.learning_rate * config.decay_factor
                          : config.learning_rate;
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      TinyCnn::ParamGrads grads = model.zero_grads();
      double batch_loss = 0.0;
      for (std::size_t i = start; i < stop; ++i) {
        const ShapeSample& sample = train_samples[order[i]];
        batch_loss += model.loss_and_param_gradients(sample.image, sample.label, grads);
      }
      const double inv = 1.0 / static_cast<double>(stop - start);
      batch_loss *= inv;
      epoch_loss += batch_loss * static_cast<double>(stop - start);

      TinyCnn::ParamGrads scaled = model.zero_grads();
      scaled.add_scaled(grads, inv);
      ++step;
      adam_c1w.update(params.conv1_w, scaled.conv1_w, lr, step);
      adam_c1b.update(params.conv1_b, scaled.conv1_b, lr, step);
      adam_c2w.update(params.conv2_w, scaled.conv2_w, lr, step);
      adam_c2b.update(params.conv2_b, scaled.conv2_b, lr, step);
      adam_hw.update(params.head_w, scaled.head_w, lr, step);
      adam_hb.update(params.head_b, scaled.head_b, lr, step);
    }
    result.final_train_loss = epoch_loss / static_cast<double>(train_samples.size());
    result.epochs_run = epoch + 1;
    result.val_accuracy = classification_accuracy(model, val_samples);
    if (result.val_accuracy >= config.early_stop_accuracy) break;
  }
  return result;
}

}  // namespace fdcam
