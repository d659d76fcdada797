// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

// Deterministic random stream behind randomNumbers(seed).
//
// s0 = mix(seed), s(k) = mix(s(k-1) + golden gamma), output k = s(k) / 2^64.

#pragma once

#include <cmath>
#include <cstdint>

namespace funcanvas {

inline constexpr uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

inline constexpr uint64_t splitmixFinalize(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Truncates toward zero; negative seeds wrap modulo 2^64.
inline uint64_t seedBits(double seed) {
  double whole = std::trunc(seed);
  if (std::fabs(whole) < 9223372036854775808.0) {
    return static_cast<uint64_t>(static_cast<int64_t>(whole));
  }
  double wrapped = std::fmod(whole, 18446744073709551616.0);
  if (wrapped < 0) wrapped += 18446744073709551616.0;
  if (wrapped >= 9223372036854775808.0) {
    return static_cast<uint64_t>(wrapped - 9223372036854775808.0) +
           0x8000000000000000ULL;
  }
  return static_cast<uint64_t>(wrapped);
}

inline double unitInterval(uint64_t state) {
  double u = static_cast<double>(state) * 0x1p-64;
  // States within 2^10 of 2^64 round up to 1.0.
  return u < 1.0 ? u : std::nextafter(1.0, 0.0);
}

class RandomStream {
 public:
  explicit RandomStream(double seed) : state_(splitmixFinalize(seedBits(seed))) {}

  double next() {
    state_ = splitmixFinalize(state_ + kGoldenGamma);
    return unitInterval(state_);
  }

  uint64_t state() const { return state_; }

 private:
  uint64_t state_;
};

}  // namespace funcanvas
