#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdcam/tensor.hpp"

namespace fdcam {

enum class ScoreMode { probability, logit };

std::string to_string(ScoreMode mode);
ScoreMode score_mode_from_string(const std::string& name);

// Per-class model outputs in the handle's score mode. Probability-mode
// entries lie in [0, 1] and sum to 1 within 1e-6.
struct ClassScores {
  ScoreMode mode = ScoreMode::probability;
  std::vector<double> values;
};

// Per-channel on/off switch applied to the target layer's activation maps.
struct ChannelMask {
  std::vector<std::uint8_t> on;

  static ChannelMask all_on(int k) { return ChannelMask{std::vector<std::uint8_t>(k, 1)}; }
  static ChannelMask all_off(int k) { return ChannelMask{std::vector<std::uint8_t>(k, 0)}; }
  // All channels off except `channels`.
  static ChannelMask only_on(int k, const std::vector<int>& channels);
  // All channels on except `channels`.
  static ChannelMask with_off(int k, const std::vector<int>& channels);

  int size() const { return static_cast<int>(on.size()); }
  bool identity() const;
};

struct Evaluation {
  ClassScores scores;
  Tensor3 activations;  // target-layer stack, K x h x w
};

// Classifier abstraction used by the attribution and evaluation code:
// forward scoring, target-layer activation capture, activation-gradient
// computation and channel-masked forward passes. Implementations must be
// deterministic: identical parameters and inputs give bit-identical outputs.
class Model {
 public:
  virtual ~Model() = default;

  virtual int class_count() const = 0;
  virtual int input_height() const = 0;
  virtual int input_width() const = 0;
  virtual ScoreMode score_mode() const = 0;
  virtual std::string target_layer() const = 0;
  // Channel count K of the target layer.
  virtual int channel_count() const = 0;
  // Hex digest of the parameters, embedded in output artifacts.
  virtual std::string parameter_hash() const = 0;

  virtual ClassScores forward_scores(const Tensor3& image) const = 0;

  // One ordinary forward pass returning both the scores and the
  // post-activation feature maps of the target layer.
  virtual Evaluation forward_with_activations(const Tensor3& image) const = 0;

  // Gradients of the class score (in the configured score mode) with respect
  // to every pixel of every target-layer activation map.
  virtual Tensor3 activation_gradients(const Tensor3& image, int class_index) const = 0;

  // Forward pass in which every switched-off channel's activation map is
  // replaced by zeros at the target layer before the subsequent layers run.
  // The all-on mask reproduces forward_scores bit for bit.
  virtual ClassScores masked_forward(const Tensor3& image, const ChannelMask& mask) const = 0;

  // Element i equals masked_forward(image, masks[i]). Implementations may
  // share the pass prefix up to the target layer but must not change the
  // results. The base implementation simply loops.
  virtual std::vector<ClassScores> batch_masked_forward(
      const Tensor3& image, const std::vector<ChannelMask>& masks) const;

  Tensor3 capture_activations(const Tensor3& image) const {
    return forward_with_activations(image).activations;
  }
};

}  // namespace fdcam
