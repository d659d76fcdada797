// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "funcanvas/diagnostic.hpp"
#include "funcanvas/syntax.hpp"

namespace funcanvas {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

struct TypeTag {
  enum class Kind {
    number,
    boolean,
    text,
    color,
    picture,
    // Result of drawingOf / animationOf.
    program,
    list,
    tuple,
    function,
    unknown,
  };

  Kind kind = Kind::unknown;
  // list: {element}; tuple: elements; function: parameters then result.
  std::vector<TypeTag> args;

  static TypeTag number() { return {Kind::number, {}}; }
  static TypeTag boolean() { return {Kind::boolean, {}}; }
  static TypeTag text() { return {Kind::text, {}}; }
  static TypeTag color() { return {Kind::color, {}}; }
  static TypeTag picture() { return {Kind::picture, {}}; }
  static TypeTag program() { return {Kind::program, {}}; }
  static TypeTag unknown() { return {Kind::unknown, {}}; }
  static TypeTag list(TypeTag element) { return {Kind::list, {element}}; }
  static TypeTag tuple(std::vector<TypeTag> elements) {
    return {Kind::tuple, std::move(elements)};
  }
  static TypeTag function(std::vector<TypeTag> params, TypeTag result) {
    params.push_back(std::move(result));
    return {Kind::function, std::move(params)};
  }

  std::span<const TypeTag> params() const {
    return {args.data(), args.empty() ? 0 : args.size() - 1};
  }
  const TypeTag& result() const { return args.back(); }

  /// e.g. `Function([Color, Color], Picture)`, `List(Tuple(Number, Number))`
  std::string toString() const;

  friend bool operator==(const TypeTag&, const TypeTag&) = default;
};

// ---------------------------------------------------------------------------
// Builtins
// ---------------------------------------------------------------------------

struct BuiltinInfo {
  std::string name;
  // Type of the bare name, e.g. "Color" for `red` or
  // "(Picture, Number, Number) -> Picture" for `translated`.
  std::string valueType;
  // Type used when the name is applied; empty for constants. Differs from
  // valueType only for `grey`, which is both a colour and a function.
  std::string callType;
  // Parameter count when applied; -1 for constants.
  int arity = -1;
};

/// Every predefined name, sorted by name.
const std::vector<BuiltinInfo>& builtins();
const BuiltinInfo* findBuiltin(std::string_view name);

// ---------------------------------------------------------------------------
// Name resolution
// ---------------------------------------------------------------------------

enum class SymbolKind { builtin, user };

struct Symbol {
  std::string name;
  SymbolKind kind = SymbolKind::user;
  Position site;
  TypeTag type;
  // Number of parameters; 0 for variables and constants.
  int arity = 0;
};

struct SymbolTable {
  // User definitions and every builtin the program references.
  std::map<std::string, Symbol> symbols;
  // Top-level definition -> global names used anywhere in its clauses
  // (including `where` locals). Parameters and locals are not globals.
  std::map<std::string, std::set<std::string>> dependencies;

  std::vector<std::string> userNames() const;
  const Symbol* find(std::string_view name) const;
};

struct ResolveResult {
  SymbolTable symbols;
  Diagnostics diagnostics;

  bool ok() const { return !hasErrors(diagnostics); }
};

ResolveResult resolve(const SyntaxTree& tree);

/// Unrestricted Damerau-Levenshtein distance (edits may touch transposed
/// characters).
int damerauLevenshtein(std::string_view a, std::string_view b);

/// Closest candidate within distance `maxDistance`; ties go to the
/// alphabetically smallest.
std::optional<std::string> closestName(std::string_view misspelled,
                                       const std::vector<std::string>& candidates,
                                       int maxDistance = 2);

// ---------------------------------------------------------------------------
// Type checking
// ---------------------------------------------------------------------------

struct TypedProgram {
  std::shared_ptr<const SyntaxTree> tree;
  SymbolTable symbols;
  std::unordered_map<const Expr*, TypeTag> exprTypes;

  TypeTag typeOf(const Expr& expr) const;
};

struct CheckResult {
  TypedProgram program;
  Diagnostics diagnostics;

  bool ok() const { return !hasErrors(diagnostics); }
};

CheckResult checkTypes(const SyntaxTree& tree, const SymbolTable& symbols);

// ---------------------------------------------------------------------------
// Dependencies
// ---------------------------------------------------------------------------

struct DependencyGraph {
  // definer -> dependency, both user definitions; sorted.
  std::vector<std::pair<std::string, std::string>> edges;
  // recursive-definition notes, one per definition on a cycle.
  Diagnostics notes;

  std::set<std::string> dependenciesOf(std::string_view name) const;
};

DependencyGraph dependencyGraph(const SymbolTable& symbols);

// ---------------------------------------------------------------------------
// Whole front end
// ---------------------------------------------------------------------------

struct AnalysisResult {
  std::optional<TypedProgram> program;
  Diagnostics diagnostics;

  bool ok() const { return program.has_value(); }
};

/// tokenize, parse, resolve, check types; collects the dependency notes.
AnalysisResult analyze(std::string_view source);

}  // namespace funcanvas
