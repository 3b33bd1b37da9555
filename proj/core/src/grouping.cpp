#include "fdcam/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "fdcam/errors.hpp"

namespace fdcam {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double cosine_from_planes(const double* a, const double* b, std::size_t n) {
  const double na = std::sqrt(dot(a, a, n));
  const double nb = std::sqrt(dot(b, b, n));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b, n) / (na * nb);
}

}  // namespace

double cosine_similarity(const Grid& a, const Grid& b) {
  require(a.same_shape(b), "cosine_similarity: shape mismatch");
  return cosine_from_planes(a.values.data(), b.values.data(), a.size());
}

SimilarityMatrix similarity_matrix(const Tensor3& activations) {
  require(activations.channels >= 1 && activations.height >= 1 && activations.width >= 1,
          "similarity_matrix: empty activation stack");
  const int k = activations.channels;
  const std::size_t n = activations.plane_size();

  std::vector<double> norms(k, 0.0);
  for (int c = 0; c < k; ++c) {
    const double* plane = activations.channel_data(c);
    norms[c] = std::sqrt(dot(plane, plane, n));
  }

  SimilarityMatrix m(k);
  for (int row = 0; row < k; ++row) {
    // The diagonal is pinned to exactly 1 (or 0 for a zero channel) rather
    // than recomputed, so self-similarity never drifts by rounding.
    m.at(row, row) = norms[row] == 0.0 ? 0.0 : 1.0;
    for (int col = row + 1; col < k; ++col) {
      double value = 0.0;
      if (norms[row] != 0.0 && norms[col] != 0.0) {
        value = dot(activations.channel_data(row), activations.channel_data(col), n) /
                (norms[row] * norms[col]);
      }
      m.at(row, col) = value;
      m.at(col, row) = value;
    }
  }
  return m;
}

int group_size(int channel_count, double theta) {
  require(channel_count >= 1, "group_size: need at least one channel");
  require(theta > 0.0 && theta <= 100.0, "group_size: theta must be in (0, 100]");
  const int size = static_cast<int>(std::ceil(theta * channel_count / 100.0));
  return std::max(1, std::min(size, channel_count));
}

ChannelGroup similarity_group(const SimilarityMatrix& matrix, int k, double theta) {
  require(k >= 0 && k < matrix.k, "similarity_group: channel index out of range");
  const int size = group_size(matrix.k, theta);

  // A zero-norm anchor is similar to nothing; it stays alone.
  if (matrix.at(k, k) == 0.0) return ChannelGroup{k};

  std::vector<int> others;
  others.reserve(matrix.k - 1);
  for (int l = 0; l < matrix.k; ++l) {
    if (l != k) others.push_back(l);
  }
  std::sort(others.begin(), others.end(), [&](int a, int b) {
    const double sa = matrix.at(k, a);
    const double sb = matrix.at(k, b);
    if (sa != sb) return sa > sb;
    return a < b;
  });

  ChannelGroup group;
  group.reserve(size);
  group.push_back(k);
  for (int i = 0; i < size - 1; ++i) group.push_back(others[i]);
  std::sort(group.begin(), group.end());
  return group;
}

std::vector<ChannelGroup> all_groups(const SimilarityMatrix& matrix, double theta) {
  std::vector<ChannelGroup> groups;
  groups.reserve(matrix.k);
  for (int k = 0; k < matrix.k; ++k) {
    groups.push_back(similarity_group(matrix, k, theta));
  }
  return groups;
}

std::vector<ChannelGroup> singleton_groups(int channel_count) {
  std::vector<ChannelGroup> groups(channel_count);
  for (int k = 0; k < channel_count; ++k) groups[k] = {k};
  return groups;
}

std::string groups_to_json(const std::vector<ChannelGroup>& groups, int channel_count,
                           double theta) {
  nlohmann::json doc;
  doc["K"] = channel_count;
  doc["theta"] = theta;
  doc["groups"] = groups;
  return doc.dump(2);
}

}  // namespace fdcam
