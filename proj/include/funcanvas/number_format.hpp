// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <string>

namespace funcanvas {

/// Shortest decimal spelling that round-trips to the same double, with
/// negative zero printed as "0".
inline std::string formatNumber(double value) {
  if (value == 0) return "0";
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

}  // namespace funcanvas
