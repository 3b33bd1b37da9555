#pragma once

#include <string>
#include <vector>

#include "fdcam/tensor.hpp"

namespace fdcam {

// Pairwise cosine similarities between the channels of an activation stack.
// Symmetric; the diagonal is exactly 1 for nonzero channels. Rows and columns
// of all-zero channels (including their diagonal entry) are 0 so every
// channel stays scorable without NaNs.
struct SimilarityMatrix {
  int k = 0;
  std::vector<double> values;

  SimilarityMatrix() = default;
  explicit SimilarityMatrix(int k_)
      : k(k_), values(static_cast<std::size_t>(k_) * k_, 0.0) {}

  double at(int row, int col) const {
    return values[static_cast<std::size_t>(row) * k + col];
  }
  double& at(int row, int col) {
    return values[static_cast<std::size_t>(row) * k + col];
  }
};

// Member channel indices of one similarity group, sorted ascending. Always
// contains its anchor channel.
using ChannelGroup = std::vector<int>;

// Cosine of the row-major flattenings of two equally shaped maps; 0 when
// either has zero norm.
double cosine_similarity(const Grid& a, const Grid& b);

SimilarityMatrix similarity_matrix(const Tensor3& activations);

// Number of channels a group holds: max(1, ceil(theta/100 * K)).
int group_size(int channel_count, double theta);

// The group_size(K, theta) channels most similar to channel k. The anchor
// ranks first; remaining candidates are ordered by similarity descending with
// ties broken toward the smaller channel index. A zero-norm anchor yields the
// singleton {k}.
ChannelGroup similarity_group(const SimilarityMatrix& matrix, int k, double theta);

// Element k equals similarity_group(matrix, k, theta).
std::vector<ChannelGroup> all_groups(const SimilarityMatrix& matrix, double theta);

// Groups {k} for every channel; the no-grouping ablation.
std::vector<ChannelGroup> singleton_groups(int channel_count);

// Debug dump: {"K": int, "theta": float, "groups": [[int,...],...]}.
std::string groups_to_json(const std::vector<ChannelGroup>& groups, int channel_count,
                           double theta);

}  // namespace fdcam
