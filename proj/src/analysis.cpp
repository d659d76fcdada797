// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#include "funcanvas/analysis.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <stdexcept>
#include <tuple>

namespace funcanvas {

// ---------------------------------------------------------------------------
// TypeTag
// ---------------------------------------------------------------------------

std::string TypeTag::toString() const {
  auto list = [](std::span<const TypeTag> items) {
    std::string out;
    for (size_t i = 0; i < items.size(); ++i) {
      if (i) out += ", ";
      out += items[i].toString();
    }
    return out;
  };
  switch (kind) {
    case Kind::number:
      return "Number";
    case Kind::boolean:
      return "Bool";
    case Kind::text:
      return "Text";
    case Kind::color:
      return "Color";
    case Kind::picture:
      return "Picture";
    case Kind::program:
      return "Program";
    case Kind::list:
      return "List(" + args.front().toString() + ")";
    case Kind::tuple:
      return "Tuple(" + list(args) + ")";
    case Kind::function:
      return "Function([" + list(params()) + "], " + result().toString() + ")";
    case Kind::unknown:
      return "Unknown";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Builtins
// ---------------------------------------------------------------------------

namespace {

// Signature notation: Number Bool Text Color Picture Program, [T] for lists,
// {T, U} for tuples, (T, U) -> R for functions, lowercase letters for type
// variables instantiated afresh at each use.
std::vector<BuiltinInfo> makeBuiltins() {
  struct Row {
    const char* name;
    const char* type;
  };
  static const Row functions[] = {
      {"animationOf", "((Number) -> Picture) -> Program"},
      {"circle", "(Number) -> Picture"},
      {"colored", "(Picture, Color) -> Picture"},
      {"dilated", "(Picture, Number) -> Picture"},
      {"drawingOf", "(Picture) -> Program"},
      {"foreach", "([a], (a) -> b) -> [b]"},
      {"lettering", "(Text) -> Picture"},
      {"overlays", "((Number) -> Picture, Number) -> Picture"},
      {"pictures", "([Picture]) -> Picture"},
      {"polygon", "([{Number, Number}]) -> Picture"},
      {"randomNumbers", "(Number) -> [Number]"},
      {"rectangle", "(Number, Number) -> Picture"},
      {"rgb", "(Number, Number, Number) -> Color"},
      {"rgba", "(Number, Number, Number, Number) -> Color"},
      {"rotated", "(Picture, Number) -> Picture"},
      {"scaled", "(Picture, Number, Number) -> Picture"},
      {"sector", "(Number, Number, Number) -> Picture"},
      {"solidCircle", "(Number) -> Picture"},
      {"solidPolygon", "([{Number, Number}]) -> Picture"},
      {"solidRectangle", "(Number, Number) -> Picture"},
      {"translated", "(Picture, Number, Number) -> Picture"},
      {"translucent", "(Color) -> Color"},
  };
  static const Row constants[] = {
      {"black", "Color"},  {"blank", "Picture"},
      {"blue", "Color"},   {"brown", "Color"},
      {"coordinatePlane", "Picture"},
      {"green", "Color"},  {"orange", "Color"},
      {"pink", "Color"},   {"purple", "Color"},
      {"red", "Color"},    {"white", "Color"},
      {"yellow", "Color"},
  };
  std::vector<BuiltinInfo> out;
  for (const auto& row : functions) {
    std::string type = row.type;
    // Parameter count: top-level commas inside the leading parentheses.
    int depth = 0;
    int arity = 1;
    for (size_t i = 1; i < type.size(); ++i) {
      char c = type[i];
      if (c == '(' || c == '[' || c == '{') ++depth;
      if (c == ')' || c == ']' || c == '}') {
        if (depth == 0) break;
        --depth;
      }
      if (c == ',' && depth == 0) ++arity;
    }
    out.push_back({row.name, type, type, arity});
  }
  for (const auto& row : constants) {
    out.push_back({row.name, row.type, "", -1});
  }
  out.push_back({"grey", "Color", "(Number) -> Color", 1});
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

}  // namespace

const std::vector<BuiltinInfo>& builtins() {
  static const std::vector<BuiltinInfo> table = makeBuiltins();
  return table;
}

const BuiltinInfo* findBuiltin(std::string_view name) {
  const auto& table = builtins();
  auto it = std::lower_bound(
      table.begin(), table.end(), name,
      [](const BuiltinInfo& info, std::string_view n) { return info.name < n; });
  if (it == table.end() || it->name != name) return nullptr;
  return &*it;
}

// ---------------------------------------------------------------------------
// Suggestions
// ---------------------------------------------------------------------------

int damerauLevenshtein(std::string_view a, std::string_view b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  const int inf = n + m;
  // Row/column 0 hold the sentinel, row/column 1 the empty-prefix costs.
  std::vector<std::vector<int>> d(n + 2, std::vector<int>(m + 2, 0));
  d[0][0] = inf;
  for (int i = 0; i <= n; ++i) {
    d[i + 1][0] = inf;
    d[i + 1][1] = i;
  }
  for (int j = 0; j <= m; ++j) {
    d[0][j + 1] = inf;
    d[1][j + 1] = j;
  }
  std::array<int, 256> lastRow{};
  for (int i = 1; i <= n; ++i) {
    int lastMatchCol = 0;
    for (int j = 1; j <= m; ++j) {
      int i1 = lastRow[static_cast<unsigned char>(b[j - 1])];
      int j1 = lastMatchCol;
      int cost = 1;
      if (a[i - 1] == b[j - 1]) {
        cost = 0;
        lastMatchCol = j;
      }
      d[i + 1][j + 1] = std::min({
          d[i][j] + cost,
          d[i + 1][j] + 1,
          d[i][j + 1] + 1,
          d[i1][j1] + (i - i1 - 1) + 1 + (j - j1 - 1),
      });
    }
    lastRow[static_cast<unsigned char>(a[i - 1])] = i;
  }
  return d[n + 1][m + 1];
}

std::optional<std::string> closestName(
    std::string_view misspelled, const std::vector<std::string>& candidates,
    int maxDistance) {
  std::optional<std::string> best;
  int bestDistance = maxDistance + 1;
  for (const auto& candidate : candidates) {
    if (candidate == misspelled) continue;
    int d = damerauLevenshtein(misspelled, candidate);
    if (d < bestDistance || (d == bestDistance && best && candidate < *best)) {
      bestDistance = d;
      best = candidate;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// SymbolTable
// ---------------------------------------------------------------------------

std::vector<std::string> SymbolTable::userNames() const {
  std::vector<std::string> out;
  for (const auto& [name, symbol] : symbols) {
    if (symbol.kind == SymbolKind::user) out.push_back(name);
  }
  return out;
}

const Symbol* SymbolTable::find(std::string_view name) const {
  auto it = symbols.find(std::string(name));
  return it == symbols.end() ? nullptr : &it->second;
}

namespace {

using ClauseGroups =
    std::vector<std::pair<std::string, std::vector<const Definition*>>>;

// Clauses sharing a head, in order of first appearance.
ClauseGroups groupClauses(const std::vector<Definition>& defs) {
  ClauseGroups groups;
  for (const auto& def : defs) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.first == def.name; });
    if (it == groups.end()) {
      groups.push_back({def.name, {&def}});
    } else {
      it->second.push_back(&def);
    }
  }
  return groups;
}

void checkClauseGroup(const std::vector<const Definition*>& clauses,
                      Diagnostics& out) {
  const Definition* unguarded = nullptr;
  for (size_t i = 0; i < clauses.size(); ++i) {
    const Definition& clause = *clauses[i];
    if (i > 0 && clause.arity() != clauses[0]->arity()) {
      out.push_back(makeError(
          "arity-conflict",
          "clause of '" + clause.name + "' has " +
              std::to_string(clause.arity()) + " parameters but the first has " +
              std::to_string(clauses[0]->arity()),
          clause.position));
      continue;
    }
    if (unguarded) {
      if (!clause.guard) {
        out.push_back(makeError("duplicate-definition",
                                "'" + clause.name + "' is already defined at line " +
                                    std::to_string(unguarded->position.line),
                                clause.position));
      } else {
        out.push_back({Severity::warning, "unreachable-clause",
                       "this clause of '" + clause.name +
                           "' follows an unguarded clause and is never used",
                       clause.position, std::nullopt});
      }
    } else if (!clause.guard) {
      unguarded = &clause;
    }
  }
  for (const auto* clause : clauses) {
    for (size_t i = 0; i < clause->params.size(); ++i) {
      for (size_t j = 0; j < i; ++j) {
        if (clause->params[i].name == clause->params[j].name) {
          out.push_back(makeError(
              "duplicate-parameter",
              "parameter '" + clause->params[i].name + "' appears twice",
              clause->params[i].position));
        }
      }
    }
  }
}

// Names bound by a clause: its parameters and `where` locals.
struct Scope {
  std::set<std::string> names;
  const Scope* parent = nullptr;

  bool contains(const std::string& name) const {
    for (const Scope* s = this; s; s = s->parent) {
      if (s->names.count(name)) return true;
    }
    return false;
  }
};

Scope clauseScope(const Definition& def, const Scope* parent) {
  Scope scope;
  scope.parent = parent;
  for (const auto& p : def.params) scope.names.insert(p.name);
  for (const auto& local : def.locals) scope.names.insert(local.name);
  return scope;
}

class Resolver {
 public:
  explicit Resolver(const SyntaxTree& tree) : tree_(tree) {}

  ResolveResult run() {
    ClauseGroups groups = groupClauses(tree_.definitions);
    for (const auto& [name, clauses] : groups) {
      checkClauseGroup(clauses, result_.diagnostics);
      Symbol symbol;
      symbol.name = name;
      symbol.kind = SymbolKind::user;
      symbol.site = clauses.front()->position;
      symbol.arity = clauses.front()->arity();
      result_.symbols.symbols[name] = symbol;
      result_.symbols.dependencies[name];
      globals_.insert(name);
    }
    if (!globals_.count("program")) {
      result_.diagnostics.push_back(makeError(
          "missing-entry-point",
          "the program has no 'program' definition to start from", {1, 1}));
    }
    for (const auto& def : tree_.definitions) {
      resolveClause(def, nullptr, def.name);
    }
    return std::move(result_);
  }

 private:
  void resolveClause(const Definition& def, const Scope* parent,
                     const std::string& definer) {
    Scope scope = clauseScope(def, parent);
    ClauseGroups locals = groupClauses(def.locals);
    for (const auto& [name, clauses] : locals) {
      checkClauseGroup(clauses, result_.diagnostics);
    }
    if (def.guard) resolveExpr(*def.guard, scope, definer);
    resolveExpr(*def.body, scope, definer);
    for (const auto& local : def.locals) {
      resolveClause(local, &scope, definer);
    }
  }

  void use(const std::string& name, Position position, const Scope& scope,
           const std::string& definer) {
    if (scope.contains(name)) return;
    if (globals_.count(name)) {
      result_.symbols.dependencies[definer].insert(name);
      return;
    }
    if (const BuiltinInfo* info = findBuiltin(name)) {
      result_.symbols.dependencies[definer].insert(name);
      if (!result_.symbols.symbols.count(name)) {
        Symbol symbol;
        symbol.name = name;
        symbol.kind = SymbolKind::builtin;
        symbol.arity = std::max(info->arity, 0);
        result_.symbols.symbols[name] = symbol;
      }
      return;
    }
    Diagnostic d = makeError("unknown-identifier",
                             "unknown name '" + name + "'", position);
    d.suggestion = closestName(name, candidates(scope));
    result_.diagnostics.push_back(std::move(d));
  }

  std::vector<std::string> candidates(const Scope& scope) const {
    std::set<std::string> names(globals_.begin(), globals_.end());
    for (const Scope* s = &scope; s; s = s->parent) {
      names.insert(s->names.begin(), s->names.end());
    }
    for (const auto& info : builtins()) names.insert(info.name);
    return {names.begin(), names.end()};
  }

  void resolveExpr(const Expr& expr, const Scope& scope,
                   const std::string& definer) {
    if (const auto* id = expr.as<Identifier>()) {
      use(id->name, expr.position, scope, definer);
    } else if (const auto* call = expr.as<Call>()) {
      use(call->callee, expr.position, scope, definer);
    }
    for (const auto& child : children(expr)) {
      resolveExpr(*child, scope, definer);
    }
  }

  const SyntaxTree& tree_;
  std::set<std::string> globals_;
  ResolveResult result_;
};

}  // namespace

ResolveResult resolve(const SyntaxTree& tree) { return Resolver(tree).run(); }

// ---------------------------------------------------------------------------
// Type inference
// ---------------------------------------------------------------------------

namespace {

using Kind = TypeTag::Kind;

// Union-find arena of type terms; Kind::unknown nodes are variables.
class TypeArena {
 public:
  int fresh() { return make(Kind::unknown, {}); }

  int make(Kind kind, std::vector<int> args) {
    nodes_.push_back({kind, std::move(args), -1});
    return static_cast<int>(nodes_.size()) - 1;
  }

  int find(int t) {
    while (nodes_[t].kind == Kind::unknown && nodes_[t].link >= 0) {
      t = nodes_[t].link;
    }
    return t;
  }

  bool unify(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return true;
    if (nodes_[a].kind == Kind::unknown) return bind(a, b);
    if (nodes_[b].kind == Kind::unknown) return bind(b, a);
    if (nodes_[a].kind != nodes_[b].kind) return false;
    if (nodes_[a].args.size() != nodes_[b].args.size()) return false;
    for (size_t i = 0; i < nodes_[a].args.size(); ++i) {
      if (!unify(nodes_[a].args[i], nodes_[b].args[i])) return false;
    }
    return true;
  }

  Kind kindOf(int t) { return nodes_[find(t)].kind; }
  const std::vector<int>& argsOf(int t) { return nodes_[find(t)].args; }

  TypeTag resolve(int t) {
    t = find(t);
    TypeTag tag;
    tag.kind = nodes_[t].kind;
    for (int arg : nodes_[t].args) tag.args.push_back(resolve(arg));
    return tag;
  }

  std::string show(int t) { return resolve(t).toString(); }

  // Parses the builtin signature notation, instantiating variables afresh.
  int instantiate(std::string_view signature) {
    std::map<char, int> vars;
    size_t pos = 0;
    int t = parseType(signature, pos, vars);
    return t;
  }

 private:
  struct Node {
    Kind kind;
    std::vector<int> args;
    int link;
  };

  bool occurs(int var, int t) {
    t = find(t);
    if (t == var) return true;
    for (int arg : nodes_[t].args) {
      if (occurs(var, arg)) return true;
    }
    return false;
  }

  bool bind(int var, int t) {
    if (occurs(var, t)) return false;
    nodes_[var].link = t;
    return true;
  }

  static void skipSpace(std::string_view s, size_t& pos) {
    while (pos < s.size() && s[pos] == ' ') ++pos;
  }

  std::vector<int> parseTypeList(std::string_view s, size_t& pos, char close,
                                 std::map<char, int>& vars) {
    std::vector<int> items;
    while (true) {
      items.push_back(parseType(s, pos, vars));
      skipSpace(s, pos);
      char c = s[pos++];
      if (c == close) return items;
      if (c != ',') throw std::logic_error("bad builtin signature");
    }
  }

  int parseType(std::string_view s, size_t& pos, std::map<char, int>& vars) {
    skipSpace(s, pos);
    char c = s[pos];
    if (c == '(') {
      ++pos;
      std::vector<int> params = parseTypeList(s, pos, ')', vars);
      skipSpace(s, pos);
      if (s.substr(pos, 2) != "->") throw std::logic_error("bad signature");
      pos += 2;
      params.push_back(parseType(s, pos, vars));
      return make(Kind::function, std::move(params));
    }
    if (c == '[') {
      ++pos;
      int element = parseType(s, pos, vars);
      skipSpace(s, pos);
      ++pos;  // ']'
      return make(Kind::list, {element});
    }
    if (c == '{') {
      ++pos;
      return make(Kind::tuple, parseTypeList(s, pos, '}', vars));
    }
    size_t begin = pos;
    while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) {
      ++pos;
    }
    std::string_view word = s.substr(begin, pos - begin);
    if (word.size() == 1 && std::islower(static_cast<unsigned char>(word[0]))) {
      auto [it, inserted] = vars.try_emplace(word[0], 0);
      if (inserted) it->second = fresh();
      return it->second;
    }
    static const std::map<std::string_view, Kind> atoms = {
        {"Number", Kind::number}, {"Bool", Kind::boolean},
        {"Text", Kind::text},     {"Color", Kind::color},
        {"Picture", Kind::picture}, {"Program", Kind::program},
    };
    return make(atoms.at(word), {});
  }

  std::vector<Node> nodes_;
};

struct TypeScope {
  std::map<std::string, int> names;
  // Parameter counts of local functions, for arity diagnostics.
  std::map<std::string, int> arities;
  const TypeScope* parent = nullptr;

  const TypeScope* owner(const std::string& name) const {
    for (const TypeScope* s = this; s; s = s->parent) {
      if (s->names.count(name)) return s;
    }
    return nullptr;
  }
};

class Checker {
 public:
  Checker(const SyntaxTree& tree, const SymbolTable& symbols)
      : tree_(tree), symbols_(symbols) {}

  CheckResult run() {
    ClauseGroups groups = groupClauses(tree_.definitions);
    for (const auto& [name, clauses] : groups) {
      globals_.names[name] = arena_.fresh();
      globals_.arities[name] = clauses.front()->arity();
    }
    // Callees first, so a use site sees the definition's settled type and
    // mismatches are reported where the use is.
    std::map<std::string, const std::vector<const Definition*>*> byName;
    for (const auto& [name, clauses] : groups) byName[name] = &clauses;
    std::set<std::string> visited;
    std::vector<std::string> order;
    std::function<void(const std::string&)> visit =
        [&](const std::string& name) {
          if (!visited.insert(name).second) return;
          auto deps = symbols_.dependencies.find(name);
          if (deps != symbols_.dependencies.end()) {
            for (const std::string& dep : deps->second) {
              if (byName.count(dep)) visit(dep);
            }
          }
          order.push_back(name);
        };
    for (const auto& [name, clauses] : groups) visit(name);
    for (const std::string& name : order) {
      const std::size_t before = diagnostics_.size();
      for (const Definition* clause : *byName.at(name)) {
        checkClause(*clause, globals_.names[name], globals_);
      }
      if (diagnostics_.size() != before) poisoned_.insert(name);
    }
    checkEntryPoint(groups);
    for (const auto& [expr, left, right] : equalities_) {
      Kind k = arena_.kindOf(left);
      if (k != Kind::number && k != Kind::text && k != Kind::boolean &&
          k != Kind::color && k != Kind::unknown) {
        error("type-mismatch",
              "values of type " + arena_.show(left) +
                  " cannot be compared for equality",
              expr->position);
      }
      (void)right;
    }

    CheckResult result;
    result.program.tree = std::make_shared<const SyntaxTree>(tree_);
    result.program.symbols = symbols_;
    for (auto& [name, symbol] : result.program.symbols.symbols) {
      if (symbol.kind == SymbolKind::user) {
        symbol.type = arena_.resolve(globals_.names.at(name));
      } else if (const BuiltinInfo* info = findBuiltin(name)) {
        symbol.type = arena_.resolve(arena_.instantiate(info->valueType));
      }
    }
    for (const auto& [expr, t] : exprTypes_) {
      result.program.exprTypes[expr] = arena_.resolve(t);
    }
    result.diagnostics = std::move(diagnostics_);
    return result;
  }

 private:
  void error(std::string code, std::string message, Position position) {
    diagnostics_.push_back(
        makeError(std::move(code), std::move(message), position));
  }

  // Reports a mismatch between what an expression has and what its
  // context requires.
  void expect(int actual, int expected, Position position,
              const std::string& context) {
    if (arena_.unify(actual, expected)) return;
    error("type-mismatch",
          context + " has type " + arena_.show(actual) + ", expected " +
              arena_.show(expected),
          position);
  }

  void checkEntryPoint(const ClauseGroups& groups) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [](const auto& g) { return g.first == "program"; });
    if (it == groups.end()) return;
    const Definition& first = *it->second.front();
    if (first.arity() != 0) {
      error("bad-entry-point", "'program' must not take parameters",
            first.position);
      return;
    }
    int programType = arena_.make(Kind::program, {});
    if (!arena_.unify(globals_.names["program"], programType)) {
      error("type-mismatch",
            "'program' has type " + arena_.show(globals_.names["program"]) +
                ", expected Program (use drawingOf or animationOf)",
            first.position);
    }
  }

  void checkClause(const Definition& def, int headType,
                   const TypeScope& parent) {
    TypeScope scope;
    scope.parent = &parent;
    int result = headType;
    if (def.arity() > 0) {
      std::vector<int> fn;
      for (const auto& p : def.params) {
        int t = arena_.fresh();
        scope.names[p.name] = t;
        scope.arities.erase(p.name);
        fn.push_back(t);
      }
      result = arena_.fresh();
      fn.push_back(result);
      int fnType = arena_.make(Kind::function, std::move(fn));
      if (!arena_.unify(headType, fnType)) {
        error("type-mismatch",
              "clause of '" + def.name + "' does not match its other uses (" +
                  arena_.show(headType) + ")",
              def.position);
      }
    }
    ClauseGroups locals = groupClauses(def.locals);
    for (const auto& [name, clauses] : locals) {
      scope.names[name] = arena_.fresh();
      scope.arities[name] = clauses.front()->arity();
    }
    for (const auto& [name, clauses] : locals) {
      for (const Definition* clause : clauses) {
        checkClause(*clause, scope.names[name], scope);
      }
    }
    if (def.guard) {
      int g = infer(*def.guard, scope);
      expect(g, arena_.make(Kind::boolean, {}), def.guard->position,
             "guard of '" + def.name + "'");
    }
    int body = infer(*def.body, scope);
    if (!arena_.unify(body, result)) {
      error("type-mismatch",
            "body of '" + def.name + "' has type " + arena_.show(body) +
                ", but other clauses or uses need " + arena_.show(result),
            def.body->position);
    }
  }

  int record(const Expr& expr, int t) {
    exprTypes_[&expr] = t;
    return t;
  }

  int number() { return arena_.make(Kind::number, {}); }

  // Uses of an ill-typed global get a fresh type so its errors are
  // reported once, at the definition.
  bool isPoisoned(const TypeScope* owner, const std::string& name) const {
    return owner == &globals_ && poisoned_.count(name) > 0;
  }

  int lookupValue(const std::string& name, const TypeScope& scope) {
    if (const TypeScope* owner = scope.owner(name)) {
      if (isPoisoned(owner, name)) return arena_.fresh();
      return owner->names.at(name);
    }
    if (const BuiltinInfo* info = findBuiltin(name)) {
      return arena_.instantiate(info->valueType);
    }
    return arena_.fresh();  // unresolved; already reported by resolve
  }

  int inferCall(const Expr& expr, const Call& call, const TypeScope& scope) {
    std::vector<int> argTypes;
    for (const auto& arg : call.args) argTypes.push_back(infer(*arg, scope));
    const int given = static_cast<int>(call.args.size());
    const std::string& name = call.callee;

    auto arityError = [&](int expected) {
      error("arity-mismatch",
            "'" + name + "' expects " + std::to_string(expected) +
                (expected == 1 ? " argument" : " arguments") + " but got " +
                std::to_string(given),
            expr.position);
      return arena_.fresh();
    };

    int calleeType;
    const TypeScope* owner = scope.owner(name);
    if (owner) {
      calleeType = isPoisoned(owner, name) ? arena_.fresh()
                                           : owner->names.at(name);
      auto arity = owner->arities.find(name);
      if (arity != owner->arities.end() && arity->second > 0 &&
          arity->second != given) {
        return arityError(arity->second);
      }
    } else if (const BuiltinInfo* info = findBuiltin(name)) {
      if (info->arity < 0) {
        error("not-a-function",
              "'" + name + "' is a " + info->valueType +
                  " and cannot be applied to arguments",
              expr.position);
        return arena_.fresh();
      }
      if (info->arity != given) return arityError(info->arity);
      calleeType = arena_.instantiate(info->callType);
    } else {
      return arena_.fresh();
    }

    Kind k = arena_.kindOf(calleeType);
    if (k != Kind::function && k != Kind::unknown) {
      error("not-a-function",
            "'" + name + "' has type " + arena_.show(calleeType) +
                " and cannot be applied to arguments",
            expr.position);
      return arena_.fresh();
    }
    if (k == Kind::function) {
      const std::vector<int> params = arena_.argsOf(calleeType);
      if (static_cast<int>(params.size()) - 1 != given) {
        return arityError(static_cast<int>(params.size()) - 1);
      }
      for (int i = 0; i < given; ++i) {
        expect(argTypes[i], params[i], call.args[i]->position,
               "argument " + std::to_string(i + 1) + " of '" + name + "'");
      }
      return params.back();
    }
    std::vector<int> fn = argTypes;
    int result = arena_.fresh();
    fn.push_back(result);
    int wanted = arena_.make(Kind::function, std::move(fn));
    if (!arena_.unify(calleeType, wanted)) {
      // The callee became concrete while unifying; name the real problem.
      const bool applicable = arena_.kindOf(calleeType) == Kind::function;
      error(applicable ? "type-mismatch" : "not-a-function",
            "'" + name + "' has type " + arena_.show(calleeType) +
                (applicable ? ", expected " + arena_.show(wanted)
                            : " and cannot be applied to arguments"),
            expr.position);
    }
    return result;
  }

  int infer(const Expr& expr, const TypeScope& scope) {
    int t = std::visit(
        [&](const auto& n) -> int {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, NumberLiteral>) {
            return number();
          } else if constexpr (std::is_same_v<T, TextLiteral>) {
            return arena_.make(Kind::text, {});
          } else if constexpr (std::is_same_v<T, Identifier>) {
            return lookupValue(n.name, scope);
          } else if constexpr (std::is_same_v<T, Call>) {
            return inferCall(expr, n, scope);
          } else if constexpr (std::is_same_v<T, Binary>) {
            return inferBinary(n, scope);
          } else if constexpr (std::is_same_v<T, Negate>) {
            int operand = infer(*n.operand, scope);
            expect(operand, number(), n.operand->position, "operand of '-'");
            return number();
          } else if constexpr (std::is_same_v<T, ListLiteral>) {
            int element = arena_.fresh();
            for (const auto& item : n.elements) {
              int it = infer(*item, scope);
              if (!arena_.unify(it, element)) {
                error("heterogeneous-list",
                      "list element has type " + arena_.show(it) +
                          " but earlier elements have type " +
                          arena_.show(element),
                      item->position);
              }
            }
            return arena_.make(Kind::list, {element});
          } else if constexpr (std::is_same_v<T, TupleLiteral>) {
            std::vector<int> items;
            for (const auto& item : n.elements) {
              items.push_back(infer(*item, scope));
            }
            return arena_.make(Kind::tuple, std::move(items));
          } else if constexpr (std::is_same_v<T, Index>) {
            int list = infer(*n.list, scope);
            int index = infer(*n.index, scope);
            int element = arena_.fresh();
            expect(list, arena_.make(Kind::list, {element}), n.list->position,
                   "left operand of '#'");
            expect(index, number(), n.index->position, "right operand of '#'");
            return element;
          } else {
            return infer(*n.inner, scope);
          }
        },
        expr.node);
    return record(expr, t);
  }

  int inferBinary(const Binary& b, const TypeScope& scope) {
    int lhs = infer(*b.lhs, scope);
    int rhs = infer(*b.rhs, scope);
    std::string op(spelling(b.op));
    switch (b.op) {
      case BinaryOp::add:
      case BinaryOp::subtract:
      case BinaryOp::multiply:
      case BinaryOp::divide:
        expect(lhs, number(), b.lhs->position, "left operand of '" + op + "'");
        expect(rhs, number(), b.rhs->position, "right operand of '" + op + "'");
        return number();
      case BinaryOp::overlay: {
        int picture = arena_.make(Kind::picture, {});
        expect(lhs, picture, b.lhs->position, "left operand of '&'");
        expect(rhs, picture, b.rhs->position, "right operand of '&'");
        return picture;
      }
      case BinaryOp::less:
      case BinaryOp::lessEqual:
      case BinaryOp::greater:
      case BinaryOp::greaterEqual:
        expect(lhs, number(), b.lhs->position, "left operand of '" + op + "'");
        expect(rhs, number(), b.rhs->position, "right operand of '" + op + "'");
        return arena_.make(Kind::boolean, {});
      case BinaryOp::equal:
      case BinaryOp::notEqual:
        expect(rhs, lhs, b.rhs->position, "right operand of '" + op + "'");
        equalities_.push_back({b.lhs.get(), lhs, rhs});
        return arena_.make(Kind::boolean, {});
    }
    return arena_.fresh();
  }

  const SyntaxTree& tree_;
  const SymbolTable& symbols_;
  TypeArena arena_;
  TypeScope globals_;
  std::unordered_map<const Expr*, int> exprTypes_;
  std::set<std::string> poisoned_;
  std::vector<std::tuple<const Expr*, int, int>> equalities_;
  Diagnostics diagnostics_;
};

}  // namespace

TypeTag TypedProgram::typeOf(const Expr& expr) const {
  auto it = exprTypes.find(&expr);
  return it == exprTypes.end() ? TypeTag::unknown() : it->second;
}

CheckResult checkTypes(const SyntaxTree& tree, const SymbolTable& symbols) {
  return Checker(tree, symbols).run();
}

// ---------------------------------------------------------------------------
// Dependency graph
// ---------------------------------------------------------------------------

std::set<std::string> DependencyGraph::dependenciesOf(
    std::string_view name) const {
  std::set<std::string> out;
  for (const auto& [from, to] : edges) {
    if (from == name) out.insert(to);
  }
  return out;
}

DependencyGraph dependencyGraph(const SymbolTable& symbols) {
  DependencyGraph graph;
  std::map<std::string, std::vector<std::string>> adjacency;
  for (const auto& [from, uses] : symbols.dependencies) {
    adjacency[from];
    for (const auto& to : uses) {
      const Symbol* target = symbols.find(to);
      if (target && target->kind == SymbolKind::user) {
        graph.edges.push_back({from, to});
        adjacency[from].push_back(to);
      }
    }
  }
  std::sort(graph.edges.begin(), graph.edges.end());

  // Tarjan's strongly connected components.
  std::map<std::string, int> index, low;
  std::set<std::string> onStack;
  std::vector<std::string> stack;
  std::set<std::string> recursive;
  int counter = 0;
  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    onStack.insert(v);
    for (const auto& w : adjacency[v]) {
      if (!index.count(w)) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (onStack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> component;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        onStack.erase(w);
        component.push_back(w);
      } while (w != v);
      bool selfLoop = std::count(adjacency[v].begin(), adjacency[v].end(), v);
      if (component.size() > 1 || selfLoop) {
        recursive.insert(component.begin(), component.end());
      }
    }
  };
  for (const auto& [name, _] : adjacency) {
    if (!index.count(name)) visit(name);
  }
  for (const auto& name : recursive) {
    const Symbol* symbol = symbols.find(name);
    graph.notes.push_back({Severity::info, "recursive-definition",
                           "'" + name + "' is defined in terms of itself",
                           symbol ? symbol->site : Position{}, std::nullopt});
  }
  return graph;
}

// ---------------------------------------------------------------------------
// Front end
// ---------------------------------------------------------------------------

AnalysisResult analyze(std::string_view source) {
  AnalysisResult result;
  ParseResult parsed = parseSource(source);
  result.diagnostics = std::move(parsed.diagnostics);
  if (hasErrors(result.diagnostics)) return result;

  ResolveResult resolved = resolve(parsed.tree);
  result.diagnostics.insert(result.diagnostics.end(),
                            resolved.diagnostics.begin(),
                            resolved.diagnostics.end());
  if (!resolved.ok()) return result;

  CheckResult checked = checkTypes(parsed.tree, resolved.symbols);
  result.diagnostics.insert(result.diagnostics.end(),
                            checked.diagnostics.begin(),
                            checked.diagnostics.end());
  DependencyGraph graph = dependencyGraph(checked.program.symbols);
  result.diagnostics.insert(result.diagnostics.end(), graph.notes.begin(),
                            graph.notes.end());
  if (!checked.ok()) return result;
  result.program = std::move(checked.program);
  return result;
}

}  // namespace funcanvas
