#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fdcam {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

// FNV-1a over raw bytes; used to fingerprint model parameters and output
// payloads. Not cryptographic.
inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t state = kFnvOffset) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    state ^= p[i];
    state *= kFnvPrime;
  }
  return state;
}

inline std::uint64_t fnv1a64(const std::vector<double>& v,
                             std::uint64_t state = kFnvOffset) {
  return v.empty() ? state : fnv1a64(v.data(), v.size() * sizeof(double), state);
}

std::string hex64(std::uint64_t value);

}  // namespace fdcam
