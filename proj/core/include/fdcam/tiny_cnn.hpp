#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdcam/model.hpp"

namespace fdcam {

// Reference CNN for the desk-scale tests and experiments:
//   input  3 x S x S (S = 32 by default)
//   conv1: 8 channels, 3x3, stride 1, padding 1; ReLU; 2x2 max-pool
//   conv2: 16 channels, 3x3, stride 1, padding 1; ReLU; 2x2 max-pool
//   global average pool; linear head to C classes (C = 3 by default)
//
// Target layers are the block outputs "conv1" (8 x S/2 x S/2) and "conv2"
// (16 x S/4 x S/4, the default). Construction from a seed is deterministic;
// biases start at zero.
class TinyCnn : public Model {
 public:
  static constexpr int kConv1Channels = 8;
  static constexpr int kConv2Channels = 16;
  static constexpr int kKernel = 3;

  struct Params {
    // Conv weights are [out][in][ky][kx] and head weights [class][channel],
    // all flattened row-major.
    std::vector<double> conv1_w, conv1_b;
    std::vector<double> conv2_w, conv2_b;
    std::vector<double> head_w, head_b;
  };

  // Gradients of a scalar loss with respect to every parameter; same layout
  // as Params.
  struct ParamGrads {
    std::vector<double> conv1_w, conv1_b;
    std::vector<double> conv2_w, conv2_b;
    std::vector<double> head_w, head_b;

    void add_scaled(const ParamGrads& other, double factor);
  };

  explicit TinyCnn(std::uint64_t seed, int input_size = 32, int class_count = 3);

  void set_score_mode(ScoreMode mode) { score_mode_ = mode; }
  void set_target_layer(const std::string& id);

  std::uint64_t seed() const { return seed_; }
  Params& params() { return params_; }
  const Params& params() const { return params_; }
  ParamGrads zero_grads() const;

  int conv1_out_size() const { return input_size_ / 2; }
  int conv2_out_size() const { return input_size_ / 4; }

  // Model interface.
  int class_count() const override { return class_count_; }
  int input_height() const override { return input_size_; }
  int input_width() const override { return input_size_; }
  ScoreMode score_mode() const override { return score_mode_; }
  std::string target_layer() const override { return target_layer_; }
  int channel_count() const override;
  std::string parameter_hash() const override;

  ClassScores forward_scores(const Tensor3& image) const override;
  Evaluation forward_with_activations(const Tensor3& image) const override;
  Tensor3 activation_gradients(const Tensor3& image, int class_index) const override;
  ClassScores masked_forward(const Tensor3& image, const ChannelMask& mask) const override;
  std::vector<ClassScores> batch_masked_forward(
      const Tensor3& image, const std::vector<ChannelMask>& masks) const override;

  // Runs the layers after the target layer on a (possibly modified) copy of
  // the target-layer activation stack. Replay-style oracles and the batched
  // masked forward build on this.
  ClassScores replay_from_target(const Tensor3& target_activations) const;

  // Cross-entropy loss of one sample; parameter gradients are accumulated
  // into `grads`. Returns the loss.
  double loss_and_param_gradients(const Tensor3& image, int label, ParamGrads& grads) const;

  void save_checkpoint(const std::string& path) const;
  static TinyCnn load_checkpoint(const std::string& path);

 private:
  struct ForwardState {
    Tensor3 pool1;  // "conv1" target stack (post conv+ReLU+pool)
    Tensor3 conv2_pre;
    Tensor3 pool2;  // "conv2" target stack
    std::vector<int> pool1_argmax, pool2_argmax;
    std::vector<double> gap, logits;
  };

  void check_image(const Tensor3& image) const;
  void check_mask(const ChannelMask& mask) const;
  // Full pass; `mask`, when given, zeroes channels of the target-layer stack
  // before the subsequent layers run. `keep_act1_pre` retains conv1_pre for
  // backprop through the first block.
  ForwardState forward_internal(const Tensor3& image, const ChannelMask* mask,
                                Tensor3* conv1_pre_out = nullptr) const;
  ClassScores scores_from_logits(const std::vector<double>& logits) const;
  const Tensor3& target_stack(const ForwardState& state) const;
  ClassScores head_scores(const Tensor3& conv2_stack) const;

  std::uint64_t seed_ = 0;
  int input_size_ = 32;
  int class_count_ = 3;
  ScoreMode score_mode_ = ScoreMode::probability;
  std::string target_layer_ = "conv2";
  Params params_;
};

// Deterministic construction of the reference tiny CNN (32x32x3 input,
// 3 classes, target layer "conv2") purely from a seed.
TinyCnn make_tiny_test_cnn(std::uint64_t seed);

}  // namespace fdcam
