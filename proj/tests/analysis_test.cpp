// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "funcanvas/analysis.hpp"
#include "test_support.hpp"

namespace funcanvas {
namespace {

using testing::houseSource;

SyntaxTree parsed(std::string_view source) {
  ParseResult r = parseSource(source);
  EXPECT_TRUE(r.ok()) << source;
  return r.tree;
}

Diagnostics errorsOf(std::string_view source) {
  AnalysisResult r = analyze(source);
  Diagnostics errors;
  for (const auto& d : r.diagnostics) {
    if (d.severity == Severity::error) errors.push_back(d);
  }
  return errors;
}

Diagnostic onlyError(std::string_view source) {
  Diagnostics errors = errorsOf(source);
  EXPECT_EQ(errors.size(), 1u) << source;
  if (errors.size() > 1) {
    for (const auto& e : errors) ADD_FAILURE() << formatDiagnostic(e);
  }
  return errors.empty() ? Diagnostic{} : errors.front();
}

std::map<std::string, std::string> userTypes(const TypedProgram& program) {
  std::map<std::string, std::string> out;
  for (const auto& [name, symbol] : program.symbols.symbols) {
    if (symbol.kind == SymbolKind::user) out[name] = symbol.type.toString();
  }
  return out;
}

TEST(DamerauLevenshtein, KnownDistances) {
  EXPECT_EQ(damerauLevenshtein("", ""), 0);
  EXPECT_EQ(damerauLevenshtein("abc", ""), 3);
  EXPECT_EQ(damerauLevenshtein("kitten", "sitting"), 3);
  EXPECT_EQ(damerauLevenshtein("ab", "ba"), 1);
  // Unrestricted: transpose then insert between the swapped pair.
  EXPECT_EQ(damerauLevenshtein("ca", "abc"), 2);
  EXPECT_EQ(damerauLevenshtein("solidRectangel", "solidRectangle"), 1);
  EXPECT_EQ(damerauLevenshtein("roof", "rof"), 1);
}

TEST(DamerauLevenshtein, SymmetricAndBoundedByLevenshtein) {
  std::mt19937 rng(3);
  auto word = [&] {
    std::string s(rng() % 7, 'a');
    for (auto& c : s) c = static_cast<char>('a' + rng() % 4);
    return s;
  };
  auto levenshtein = [](const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (size_t i = 1; i <= a.size(); ++i) {
      cur[0] = static_cast<int>(i);
      for (size_t j = 1; j <= b.size(); ++j) {
        cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                           prev[j - 1] + (a[i - 1] != b[j - 1])});
      }
      std::swap(prev, cur);
    }
    return prev[b.size()];
  };
  for (int i = 0; i < 2000; ++i) {
    std::string a = word(), b = word();
    int d = damerauLevenshtein(a, b);
    EXPECT_EQ(d, damerauLevenshtein(b, a));
    EXPECT_LE(d, levenshtein(a, b));
    EXPECT_EQ(d == 0, a == b);
  }
}

TEST(ClosestName, TiesAreAlphabetical) {
  EXPECT_EQ(closestName("floor", {"floor3", "floor2", "door"}), "floor2");
  EXPECT_EQ(closestName("zzzzzz", {"floor3", "floor2"}), std::nullopt);
  EXPECT_EQ(closestName("rof", {"roof", "red"}), "roof");
}

TEST(Resolve, HouseProgram) {
  ResolveResult r = resolve(parsed(houseSource()));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.symbols.userNames().size(), 13u);
  EXPECT_EQ(r.symbols.dependencies.at("pathway"),
            (std::set<std::string>{"overlays", "tile"}));
  EXPECT_EQ(r.symbols.dependencies.at("house"),
            (std::set<std::string>{"colored", "door", "facade", "pathway",
                                   "roof", "windows"}));
  EXPECT_EQ(r.symbols.find("tile")->arity, 1);
  EXPECT_EQ(r.symbols.find("overlays")->kind, SymbolKind::builtin);
}

TEST(Resolve, MisspelledBuiltinGetsSuggestion) {
  ResolveResult r =
      resolve(parsed("program = drawingOf(solidRectangel(1,2))"));
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, "unknown-identifier");
  EXPECT_EQ(r.diagnostics[0].suggestion, "solidRectangle");
  EXPECT_EQ(r.diagnostics[0].position, (Position{1, 21}));
}

TEST(Resolve, ParametersAndLocalsAreCandidates) {
  ResolveResult r = resolve(parsed(
      "program = drawingOf(f(1))\n"
      "f(radius) = solidCircle(raduis * size)\n"
      "  where size = 2\n"));
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].suggestion, "radius");
}

TEST(Resolve, MissingEntryPoint) {
  ResolveResult r = resolve(parsed("x = 1"));
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, "missing-entry-point");
  EXPECT_EQ(resolve(SyntaxTree{}).diagnostics.at(0).code,
            "missing-entry-point");
}

TEST(Resolve, DuplicatesAndConflicts) {
  EXPECT_EQ(onlyError("program = drawingOf(blank)\nx = 1\nx = 2").code,
            "duplicate-definition");
  EXPECT_EQ(onlyError("program = drawingOf(blank)\nf(a) = a\nf(a, b) = a").code,
            "arity-conflict");
  EXPECT_EQ(onlyError("program = drawingOf(blank)\nf(a, a) = a").code,
            "duplicate-parameter");
  // Guarded clauses with a fallback are fine; a clause after the fallback
  // is unreachable.
  AnalysisResult r = analyze(
      "program = drawingOf(blank)\n"
      "f(a) | a < 0 = 0\n"
      "f(a) = a\n"
      "f(a) | a > 5 = 1\n");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.diagnostics.at(0).code, "unreachable-clause");
  EXPECT_EQ(r.diagnostics.at(0).severity, Severity::warning);
}

TEST(CheckTypes, HouseProgram) {
  AnalysisResult r = analyze(houseSource());
  ASSERT_TRUE(r.ok());
  auto types = userTypes(*r.program);
  EXPECT_EQ(types["house"], "Function([Color, Color], Picture)");
  EXPECT_EQ(types["tile"], "Function([Number], Picture)");
  EXPECT_EQ(types["program"], "Program");
  EXPECT_EQ(types["roof"], "Picture");
  EXPECT_EQ(types["pathway"], "Picture");
  EXPECT_EQ(types["stone"], "Picture");
  // Every expression is annotated and none is left unresolved.
  const SyntaxTree& tree = *r.program->tree;
  std::function<void(const Expr&)> walk = [&](const Expr& e) {
    auto t = r.program->typeOf(e);
    EXPECT_NE(t.kind, TypeTag::Kind::unknown) << formatExpr(e);
    for (const auto& c : children(e)) walk(*c);
  };
  for (const auto& d : tree.definitions) walk(*d.body);
  const Definition& pathway = tree.definitions[9];
  EXPECT_EQ(r.program->typeOf(*pathway.body), TypeTag::picture());
}

TEST(CheckTypes, OverlayOperandMismatch) {
  Diagnostic d = onlyError("program = drawingOf(solidCircle(1) & 5)");
  EXPECT_EQ(d.code, "type-mismatch");
  EXPECT_EQ(d.position, (Position{1, 38}));
  EXPECT_NE(d.message.find("right operand of '&' has type Number"),
            std::string::npos)
      << d.message;
  EXPECT_NE(d.message.find("expected Picture"), std::string::npos);
}

TEST(CheckTypes, ArityAndApplicationErrors) {
  Diagnostic arity = onlyError("program = drawingOf(translated(blank, 1))");
  EXPECT_EQ(arity.code, "arity-mismatch");
  EXPECT_NE(arity.message.find("expects 3 arguments but got 2"),
            std::string::npos);
  Diagnostic user = onlyError(
      "program = drawingOf(f(1, 2))\nf(x) = solidCircle(x)");
  EXPECT_EQ(user.code, "arity-mismatch");
  EXPECT_EQ(onlyError("program = drawingOf(red(1))").code, "not-a-function");
  EXPECT_EQ(onlyError("program = drawingOf(r(1))\nr = blank").code,
            "not-a-function");
}

TEST(CheckTypes, OtherMismatches) {
  EXPECT_EQ(onlyError("program = drawingOf(pictures([blank, 1]))").code,
            "heterogeneous-list");
  EXPECT_EQ(onlyError("program = drawingOf(f(1))\nf(x) | x = solidCircle(x)")
                .code,
            "type-mismatch");
  EXPECT_EQ(onlyError("program = drawingOf(solidCircle((1, 2) # 1))").code,
            "type-mismatch");
  EXPECT_EQ(onlyError("program = solidCircle(1)").code, "type-mismatch");
  EXPECT_EQ(onlyError("program(t) = drawingOf(blank)").code,
            "bad-entry-point");
  EXPECT_EQ(onlyError("program = drawingOf(blank)\nb = blank == blank").code,
            "type-mismatch");
  // Monomorphic user functions: one definition, one type.
  EXPECT_EQ(onlyError("program = drawingOf(pictures([id(blank)]))\n"
                      "n = id(3)\n"
                      "id(x) = x\n")
                .code,
            "type-mismatch");
}

TEST(CheckTypes, BuiltinsInstantiatePerCallSite) {
  AnalysisResult r = analyze(
      "program = drawingOf(pictures(foreach(sizes, solidCircle)))\n"
      "sizes = foreach([1, 2, 3], double)\n"
      "labels = foreach([\"a\", \"b\"], lettering)\n"
      "double(x) = 2 * x\n"
      "first = labels # 1\n"
      "shade = grey & blank\n");
  // `grey` without arguments is a colour, so `&` rejects it.
  ASSERT_FALSE(r.ok());
  Diagnostics errors;
  for (const auto& d : r.diagnostics) {
    if (d.severity == Severity::error) errors.push_back(d);
  }
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_NE(errors[0].message.find("has type Color"), std::string::npos);

  AnalysisResult ok = analyze(
      "program = drawingOf(pictures(foreach(sizes, solidCircle)))\n"
      "sizes = foreach([1, 2, 3], double)\n"
      "labels = foreach([\"a\", \"b\"], lettering)\n"
      "double(x) = 2 * x\n"
      "first = labels # 1\n"
      "shades = [grey, grey(0.5), translucent(red)]\n");
  ASSERT_TRUE(ok.ok());
  auto types = userTypes(*ok.program);
  EXPECT_EQ(types["labels"], "List(Picture)");
  EXPECT_EQ(types["first"], "Picture");
  EXPECT_EQ(types["shades"], "List(Color)");
}

TEST(CheckTypes, UnusedDivergentDefinitionIsAccepted) {
  AnalysisResult r = analyze("program = drawingOf(blank)\nbad = bad\n");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(userTypes(*r.program)["bad"], "Unknown");
}

TEST(CheckTypes, RecursionAndHigherOrderParameters) {
  AnalysisResult r = analyze(
      "program = animationOf(frame)\n"
      "frame(t) = stairs(t) & twice(grow, blank)\n"
      "stairs(n) | n <= 0 = blank\n"
      "stairs(n) | n > 0 = translated(solidRectangle(1, 1), n, n) & stairs(n - 1)\n"
      "twice(f, p) = f(f(p))\n"
      "grow(p) = dilated(p, 2)\n");
  ASSERT_TRUE(r.ok());
  auto types = userTypes(*r.program);
  EXPECT_EQ(types["stairs"], "Function([Number], Picture)");
  EXPECT_EQ(types["twice"],
            "Function([Function([Picture], Picture), Picture], Picture)");
}

TEST(CheckTypes, WhereLocalsSeeParametersAndEachOther) {
  AnalysisResult r = analyze(
      "program = drawingOf(clock(3))\n"
      "clock(h) = hand & circle(radius)\n"
      "  where\n"
      "    hand = rotated(solidRectangle(0.2, radius), angle)\n"
      "    angle = 30 * h\n"
      "    radius = 5\n");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(userTypes(*r.program)["clock"], "Function([Number], Picture)");
}

// Definitions may appear in any order.
TEST(CheckTypes, PermutationInvariance) {
  SyntaxTree tree = parsed(houseSource());
  ResolveResult base = resolve(tree);
  auto reference = userTypes(checkTypes(tree, base.symbols).program);
  std::mt19937 rng(11);
  for (int i = 0; i < 50; ++i) {
    SyntaxTree shuffled = tree;
    std::shuffle(shuffled.definitions.begin(), shuffled.definitions.end(), rng);
    ResolveResult r = resolve(shuffled);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.symbols.dependencies, base.symbols.dependencies);
    CheckResult c = checkTypes(shuffled, r.symbols);
    ASSERT_TRUE(c.ok());
    EXPECT_EQ(userTypes(c.program), reference);
  }
}

TEST(CheckTypes, Deterministic) {
  SyntaxTree tree = parsed(houseSource());
  ResolveResult r = resolve(tree);
  CheckResult a = checkTypes(tree, r.symbols);
  CheckResult b = checkTypes(tree, r.symbols);
  ASSERT_EQ(a.program.exprTypes.size(), b.program.exprTypes.size());
  // Same tree object layout in both copies: compare annotations in walk order.
  std::vector<std::string> left, right;
  std::function<void(const Expr&, const TypedProgram&, std::vector<std::string>&)>
      walk = [&](const Expr& e, const TypedProgram& p,
                 std::vector<std::string>& out) {
        out.push_back(p.typeOf(e).toString());
        for (const auto& c : children(e)) walk(*c, p, out);
      };
  for (const auto& d : a.program.tree->definitions) walk(*d.body, a.program, left);
  for (const auto& d : b.program.tree->definitions) walk(*d.body, b.program, right);
  EXPECT_EQ(left, right);
}

TEST(DependencyGraph, HouseEdges) {
  ResolveResult r = resolve(parsed(houseSource()));
  DependencyGraph g = dependencyGraph(r.symbols);
  EXPECT_EQ(g.dependenciesOf("windows"),
            (std::set<std::string>{"floor2", "floor3"}));
  EXPECT_EQ(g.dependenciesOf("floor3"), (std::set<std::string>{"floor2"}));
  EXPECT_EQ(g.dependenciesOf("pathway"), (std::set<std::string>{"tile"}));
  EXPECT_TRUE(g.notes.empty());
  EXPECT_TRUE(std::is_sorted(g.edges.begin(), g.edges.end()));
}

TEST(DependencyGraph, RecursionIsInformational) {
  ResolveResult r = resolve(parsed("program = drawingOf(blank)\nx = x\n"
                                   "a = b\nb = a\nc = a"));
  ASSERT_TRUE(r.ok());
  DependencyGraph g = dependencyGraph(r.symbols);
  EXPECT_EQ(g.dependenciesOf("x"), (std::set<std::string>{"x"}));
  ASSERT_EQ(g.notes.size(), 3u);
  for (const auto& note : g.notes) {
    EXPECT_EQ(note.severity, Severity::info);
    EXPECT_EQ(note.code, "recursive-definition");
  }
  EXPECT_EQ(g.notes[2].message, "'x' is defined in terms of itself");
}

TEST(DependencyGraph, EmptyProgram) {
  DependencyGraph g = dependencyGraph(SymbolTable{});
  EXPECT_TRUE(g.edges.empty());
  EXPECT_TRUE(g.notes.empty());
}

}  // namespace
}  // namespace funcanvas
