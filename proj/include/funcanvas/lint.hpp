// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "funcanvas/analysis.hpp"
#include "funcanvas/diagnostic.hpp"

namespace funcanvas {

enum class Tier { high, mid, low, minimal };

std::string_view toString(Tier tier);

struct TierPoints {
  double high = 4;
  double mid = 3;
  double low = 2;
  double minimal = 1;

  double operator[](Tier tier) const;
};

/// One rubric line. `id` is "R1".."R6"; `name` is the kebab-case alias
/// accepted in rubric files as well.
struct RubricRule {
  std::string id;
  std::string name;
  std::string description;
  TierPoints points;
  std::map<std::string, double> params;
};

class RubricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// All six built-in rules with their default points and parameters.
std::vector<RubricRule> defaultRubric();

/// Parses `[{id, points: {high, mid, low, minimal}, params}, ...]`. Only the
/// listed rules are applied; omitted points and params keep their defaults.
std::vector<RubricRule> loadRubric(std::string_view json);

struct LintFinding {
  std::string rule;
  Tier tier = Tier::low;
  std::vector<Position> positions;
  std::string explanation;
};

struct RuleResult {
  std::string rule;
  std::string name;
  Tier tier = Tier::high;
  double points = 0;
  double maxPoints = 0;
  std::string summary;
};

struct LintReport {
  std::vector<RuleResult> results;
  std::vector<LintFinding> findings;
  // Severity::info notes about what was skipped.
  Diagnostics notes;
  double total = 0;
  double maximum = 0;
};

/// Scores a program that passed analysis. Only definitions reachable from
/// `program` are examined, so dead code neither costs nor earns points.
LintReport lintProgram(const TypedProgram& program,
                       const std::vector<RubricRule>& rubric = defaultRubric());

std::string reportToJson(const LintReport& report);
std::string reportToText(const LintReport& report);

}  // namespace funcanvas
