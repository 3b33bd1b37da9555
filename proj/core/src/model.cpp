#include "fdcam/model.hpp"

#include "fdcam/errors.hpp"

namespace fdcam {

std::string to_string(ScoreMode mode) {
  return mode == ScoreMode::probability ? "probability" : "logit";
}

ScoreMode score_mode_from_string(const std::string& name) {
  if (name == "probability") return ScoreMode::probability;
  if (name == "logit") return ScoreMode::logit;
  throw ConfigError("unknown score mode '" + name + "' (expected probability or logit)");
}

ChannelMask ChannelMask::only_on(int k, const std::vector<int>& channels) {
  ChannelMask m = all_off(k);
  for (int c : channels) {
    require(c >= 0 && c < k, "ChannelMask: channel index out of range");
    m.on[c] = 1;
  }
  return m;
}

ChannelMask ChannelMask::with_off(int k, const std::vector<int>& channels) {
  ChannelMask m = all_on(k);
  for (int c : channels) {
    require(c >= 0 && c < k, "ChannelMask: channel index out of range");
    m.on[c] = 0;
  }
  return m;
}

bool ChannelMask::identity() const {
  for (std::uint8_t v : on) {
    if (!v) return false;
  }
  return true;
}

std::vector<ClassScores> Model::batch_masked_forward(
    const Tensor3& image, const std::vector<ChannelMask>& masks) const {
  require(!masks.empty(), "batch_masked_forward: empty mask list");
  std::vector<ClassScores> out;
  out.reserve(masks.size());
  for (const ChannelMask& mask : masks) {
    out.push_back(masked_forward(image, mask));
  }
  return out;
}

}  // namespace fdcam
