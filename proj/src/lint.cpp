// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#include "funcanvas/lint.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "funcanvas/number_format.hpp"
#include "json.hpp"

namespace funcanvas {

using nlohmann::json;

std::string_view toString(Tier tier) {
  switch (tier) {
    case Tier::high:
      return "high";
    case Tier::mid:
      return "mid";
    case Tier::low:
      return "low";
    case Tier::minimal:
      return "minimal";
  }
  return "?";
}

double TierPoints::operator[](Tier tier) const {
  switch (tier) {
    case Tier::high:
      return high;
    case Tier::mid:
      return mid;
    case Tier::low:
      return low;
    case Tier::minimal:
      return minimal;
  }
  return 0;
}

std::vector<RubricRule> defaultRubric() {
  return {
      {"R1", "magic-numbers",
       "expressions with variables rather than repeated unnamed literals",
       {},
       {{"minOccurrences", 3}, {"minimalValues", 3}}},
      {"R2", "duplication",
       "one function for repeated code instead of copies differing in literals",
       {},
       {{"minNodes", 4}, {"minimalGroups", 3}}},
      {"R3", "layering", "nested named layers instead of a flat layout", {},
       {{"highDepth", 3}}},
      {"R4", "locals", "local variables instead of only global ones", {}, {}},
      {"R5", "naming-format", "naming and indentation practices", {},
       {{"minLength", 3}, {"paramMinLength", 1}, {"midMax", 2}, {"lowMax", 5}}},
      {"R6", "range-handling", "ranges that include only one end", {}, {}},
  };
}

std::vector<RubricRule> loadRubric(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw RubricError(std::string("rubric is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw RubricError("rubric must be a JSON list of rules");
  std::vector<RubricRule> defaults = defaultRubric();
  std::vector<RubricRule> rules;
  for (const json& entry : doc) {
    if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string()) {
      throw RubricError("every rubric entry needs a string \"id\"");
    }
    std::string id = entry["id"];
    auto base = std::find_if(defaults.begin(), defaults.end(), [&](const auto& r) {
      return r.id == id || r.name == id;
    });
    if (base == defaults.end()) throw RubricError("unknown rubric rule '" + id + "'");
    if (std::any_of(rules.begin(), rules.end(),
                    [&](const auto& r) { return r.id == base->id; })) {
      throw RubricError("rule '" + id + "' listed twice");
    }
    RubricRule rule = *base;
    if (entry.contains("points")) {
      const json& points = entry["points"];
      if (!points.is_object()) throw RubricError(id + ": points must be an object");
      for (auto& [key, value] : points.items()) {
        if (!value.is_number()) throw RubricError(id + ": points must be numbers");
        double v = value.get<double>();
        if (!(v >= 0)) throw RubricError(id + ": points must be non-negative");
        if (key == "high") {
          rule.points.high = v;
        } else if (key == "mid") {
          rule.points.mid = v;
        } else if (key == "low") {
          rule.points.low = v;
        } else if (key == "minimal") {
          rule.points.minimal = v;
        } else {
          throw RubricError(id + ": unknown tier '" + key + "'");
        }
      }
    }
    if (entry.contains("params")) {
      const json& params = entry["params"];
      if (!params.is_object()) throw RubricError(id + ": params must be an object");
      for (auto& [key, value] : params.items()) {
        if (!rule.params.count(key)) {
          throw RubricError(id + ": unknown parameter '" + key + "'");
        }
        if (!value.is_number()) throw RubricError(id + ": params must be numbers");
        rule.params[key] = value.get<double>();
      }
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

namespace {

using Clauses = std::vector<const Definition*>;

// Lexical scope of one clause: its parameters and its `where` locals.
struct Scope {
  const Definition* clause = nullptr;
  const Scope* parent = nullptr;
  std::map<std::string, Clauses> locals;

  Scope(const Definition* c, const Scope* p) : clause(c), parent(p) {
    for (const auto& local : c->locals) locals[local.name].push_back(&local);
  }
};

struct Resolved {
  enum class Kind { param, local, global, builtin } kind = Kind::builtin;
  // Number of scopes walked outwards.
  int distance = 0;
  int index = 0;
  const Clauses* clauses = nullptr;
};

std::string sitesOf(const std::vector<Position>& positions) {
  std::string out;
  for (const Position& p : positions) {
    if (!out.empty()) out += ", ";
    out += std::to_string(p.line) + ":" + std::to_string(p.column);
  }
  return out;
}

class Linter {
 public:
  explicit Linter(const TypedProgram& program) : program_(program) {
    for (const auto& def : program.tree->definitions) {
      globals_[def.name].push_back(&def);
    }
    findReachable();
  }

  LintReport run(const std::vector<RubricRule>& rubric) {
    for (const RubricRule& rule : rubric) {
      rule_ = &rule;
      RuleResult result;
      result.rule = rule.id;
      result.name = rule.name;
      std::size_t before = report_.findings.size();
      if (rule.id == "R1") {
        magicNumbers(result);
      } else if (rule.id == "R2") {
        duplication(result);
      } else if (rule.id == "R3") {
        layering(result);
      } else if (rule.id == "R4") {
        locals(result);
      } else if (rule.id == "R5") {
        naming(result);
      } else if (rule.id == "R6") {
        ranges(result);
      }
      for (std::size_t i = before; i < report_.findings.size(); ++i) {
        report_.findings[i].tier = result.tier;
      }
      result.points = rule.points[result.tier];
      result.maxPoints = std::max({rule.points.high, rule.points.mid,
                                   rule.points.low, rule.points.minimal});
      report_.total += result.points;
      report_.maximum += result.maxPoints;
      report_.results.push_back(std::move(result));
    }
    for (const auto& def : program_.tree->definitions) {
      if (!reachable_.count(def.name) && !noted_.count(def.name)) {
        noted_.insert(def.name);
        report_.notes.push_back({Severity::info, "unused-definition",
                                 "'" + def.name +
                                     "' is not used by program and was not linted",
                                 def.position, std::nullopt});
      }
    }
    return std::move(report_);
  }

 private:
  double param(const std::string& name) const { return rule_->params.at(name); }

  void finding(std::vector<Position> positions, std::string explanation) {
    std::sort(positions.begin(), positions.end());
    report_.findings.push_back(
        {rule_->id, Tier::low, std::move(positions), std::move(explanation)});
  }

  void findReachable() {
    std::vector<std::string> pending{"program"};
    while (!pending.empty()) {
      std::string name = pending.back();
      pending.pop_back();
      if (!globals_.count(name) || !reachable_.insert(name).second) continue;
      auto deps = program_.symbols.dependencies.find(name);
      if (deps == program_.symbols.dependencies.end()) continue;
      for (const auto& dep : deps->second) pending.push_back(dep);
    }
    for (const auto& def : program_.tree->definitions) {
      if (reachable_.count(def.name)) roots_.push_back(&def);
    }
  }

  // Calls `visit(clause, scope)` for every reachable clause, locals included.
  void forEachClause(
      const std::function<void(const Definition&, const Scope&)>& visit) const {
    std::function<void(const Definition&, const Scope*)> walk =
        [&](const Definition& def, const Scope* parent) {
          Scope scope(&def, parent);
          visit(def, scope);
          for (const auto& local : def.locals) walk(local, &scope);
        };
    for (const Definition* def : roots_) walk(*def, nullptr);
  }

  Resolved lookup(const std::string& name, const Scope* scope) const {
    int distance = 0;
    for (const Scope* s = scope; s; s = s->parent, ++distance) {
      const auto& params = s->clause->params;
      for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].name == name) {
          return {Resolved::Kind::param, distance, static_cast<int>(i), nullptr};
        }
      }
      auto local = s->locals.find(name);
      if (local != s->locals.end()) {
        int index = static_cast<int>(std::distance(s->locals.begin(), local));
        return {Resolved::Kind::local, distance, index, &local->second};
      }
    }
    auto global = globals_.find(name);
    if (global != globals_.end()) {
      return {Resolved::Kind::global, 0, 0, &global->second};
    }
    return {};
  }

  static void walkExpr(const Expr& e, const std::function<void(const Expr&)>& f) {
    std::vector<const Expr*> stack{&e};
    while (!stack.empty()) {
      const Expr* top = stack.back();
      stack.pop_back();
      f(*top);
      auto kids = children(*top);
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(it->get());
    }
  }

  static const NumberLiteral* literalUnder(const Expr& e) {
    const Expr* at = &e;
    while (true) {
      if (auto* p = at->as<Paren>()) {
        at = p->inner.get();
      } else if (auto* n = at->as<Negate>()) {
        at = n->operand.get();
      } else {
        return at->as<NumberLiteral>();
      }
    }
  }

  // ---- R1 ---------------------------------------------------------------

  void magicNumbers(RuleResult& result) {
    std::map<double, std::vector<Position>> uses;
    std::set<const Expr*> exempt;
    forEachClause([&](const Definition& def, const Scope&) {
      // `size = 7` names its literal.
      if (def.arity() == 0 && !def.guard && literalUnder(*def.body)) {
        walkExpr(*def.body, [&](const Expr& e) { exempt.insert(&e); });
      }
      auto scan = [&](const Expr& root) {
        walkExpr(root, [&](const Expr& e) {
          // Point coordinates are shape data, not unexplained constants.
          if (auto* tuple = e.as<TupleLiteral>()) {
            for (const auto& element : tuple->elements) {
              if (literalUnder(*element)) {
                walkExpr(*element, [&](const Expr& x) { exempt.insert(&x); });
              }
            }
          }
          auto* literal = e.as<NumberLiteral>();
          if (!literal || exempt.count(&e)) return;
          double v = literal->value;
          if (v == 0 || v == 1 || v == 2) return;
          uses[v].push_back(e.position);
        });
      };
      if (def.guard) scan(*def.guard);
      scan(*def.body);
    });
    int magic = 0;
    for (auto& [value, positions] : uses) {
      if (positions.size() < param("minOccurrences")) continue;
      ++magic;
      finding(positions, "literal " + formatNumber(value) + " appears " +
                             std::to_string(positions.size()) +
                             " times without a name");
    }
    if (magic == 0) {
      result.tier = Tier::high;
      result.summary = "no repeated unnamed literals";
    } else {
      result.tier = magic < param("minimalValues") ? Tier::low : Tier::minimal;
      result.summary = std::to_string(magic) + " repeated unnamed literal" +
                       (magic == 1 ? "" : "s");
    }
  }

  // ---- R2 ---------------------------------------------------------------

  // Shape of an expression with literals erased and bound names replaced by
  // their binding site, so consistent renaming does not change it.
  std::string shape(const Expr& e, const Scope* scope, int& nodes) const {
    ++nodes;
    auto name = [&](const std::string& n) {
      Resolved r = lookup(n, scope);
      switch (r.kind) {
        case Resolved::Kind::param:
          return "$" + std::to_string(r.distance) + "." + std::to_string(r.index);
        case Resolved::Kind::local:
          return "@" + std::to_string(r.distance) + "." + std::to_string(r.index);
        default:
          return n;
      }
    };
    auto list = [&](const std::vector<ExprPtr>& items) {
      std::string out;
      for (const auto& item : items) out += shape(*item, scope, nodes) + ",";
      return out;
    };
    return std::visit(
        [&](const auto& n) -> std::string {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, NumberLiteral>) {
            return "#";
          } else if constexpr (std::is_same_v<T, TextLiteral>) {
            return json(n.value).dump();
          } else if constexpr (std::is_same_v<T, Identifier>) {
            return name(n.name);
          } else if constexpr (std::is_same_v<T, Call>) {
            return name(n.callee) + "(" + list(n.args) + ")";
          } else if constexpr (std::is_same_v<T, Binary>) {
            return "(" + shape(*n.lhs, scope, nodes) + std::string(spelling(n.op)) +
                   shape(*n.rhs, scope, nodes) + ")";
          } else if constexpr (std::is_same_v<T, Negate>) {
            return "-(" + shape(*n.operand, scope, nodes) + ")";
          } else if constexpr (std::is_same_v<T, ListLiteral>) {
            return "[" + list(n.elements) + "]";
          } else if constexpr (std::is_same_v<T, TupleLiteral>) {
            return "<" + list(n.elements) + ">";
          } else if constexpr (std::is_same_v<T, Index>) {
            return "(" + shape(*n.list, scope, nodes) + "#" +
                   shape(*n.index, scope, nodes) + ")";
          } else {
            --nodes;
            return shape(*n.inner, scope, nodes);
          }
        },
        e.node);
  }

  void duplication(RuleResult& result) {
    std::map<std::string, std::vector<Position>> groups;
    forEachClause([&](const Definition& def, const Scope& scope) {
      int nodes = 0;
      std::string key = shape(*def.body, &scope, nodes);
      if (nodes >= param("minNodes")) groups[key].push_back(def.body->position);
    });
    int clones = 0;
    for (const auto& [key, positions] : groups) {
      if (positions.size() < 2) continue;
      ++clones;
      finding(positions, std::to_string(positions.size()) +
                             " definition bodies differ only in their numbers; "
                             "one function with parameters could replace them");
    }
    if (clones == 0) {
      result.tier = Tier::high;
      result.summary = "no copied code";
    } else {
      result.tier = clones < param("minimalGroups") ? Tier::low : Tier::minimal;
      result.summary = std::to_string(clones) + " group" + (clones == 1 ? "" : "s") +
                       " of copied code";
    }
  }

  // ---- R3 ---------------------------------------------------------------

  struct Layer {
    int depth = 0;
    std::vector<Position> chain;
  };

  // Longest chain of named picture definitions below `clauses`.
  Layer layersBelow(const Clauses& clauses, const Scope* parent,
                    std::set<const Clauses*>& onPath,
                    std::map<const Clauses*, Layer>& memo) const {
    Layer best;
    for (const Definition* clause : clauses) {
      Scope scope(clause, parent);
      walkExpr(*clause->body, [&](const Expr& e) {
        const std::string* name = nullptr;
        if (auto* id = e.as<Identifier>()) name = &id->name;
        if (auto* call = e.as<Call>()) name = &call->callee;
        if (!name) return;
        Resolved r = lookup(*name, &scope);
        if (!r.clauses || onPath.count(r.clauses)) return;
        const Definition& target = *r.clauses->front();
        if (program_.typeOf(*target.body).kind != TypeTag::Kind::picture) return;
        Layer below;
        auto cached = memo.find(r.clauses);
        if (cached != memo.end()) {
          below = cached->second;
        } else {
          // Locals see the scope chain of the clause that declares them.
          const Scope* outer = &scope;
          for (int i = 0; i < r.distance; ++i) outer = outer->parent;
          onPath.insert(r.clauses);
          below = layersBelow(*r.clauses,
                              r.kind == Resolved::Kind::local ? outer : nullptr,
                              onPath, memo);
          onPath.erase(r.clauses);
          memo[r.clauses] = below;
        }
        if (below.depth + 1 > best.depth) {
          best.depth = below.depth + 1;
          best.chain = below.chain;
          best.chain.insert(best.chain.begin(), target.position);
        }
      });
    }
    return best;
  }

  void layering(RuleResult& result) {
    auto entry = globals_.find("program");
    Layer layer;
    if (entry != globals_.end()) {
      std::set<const Clauses*> onPath{&entry->second};
      std::map<const Clauses*, Layer> memo;
      layer = layersBelow(entry->second, nullptr, onPath, memo);
    }
    int high = static_cast<int>(param("highDepth"));
    if (layer.depth >= high) {
      result.tier = Tier::high;
    } else if (layer.depth == high - 1 && layer.depth > 0) {
      result.tier = Tier::mid;
    } else if (layer.depth >= 1) {
      result.tier = Tier::low;
    } else {
      result.tier = Tier::minimal;
    }
    result.summary = "named layers nest " + std::to_string(layer.depth) + " deep";
    if (result.tier != Tier::high) {
      std::vector<Position> at = layer.chain;
      if (at.empty() && entry != globals_.end()) {
        at.push_back(entry->second.front()->position);
      }
      finding(at, "the drawing nests only " + std::to_string(layer.depth) +
                      " named layer" + (layer.depth == 1 ? "" : "s") +
                      "; group related parts under their own names");
    }
  }

  // ---- R4 ---------------------------------------------------------------

  void locals(RuleResult& result) {
    int withLocals = 0;
    forEachClause([&](const Definition& def, const Scope&) {
      if (!def.locals.empty()) ++withLocals;
    });
    if (withLocals > 0) {
      result.tier = Tier::high;
      result.summary = std::to_string(withLocals) + " definition" +
                       (withLocals == 1 ? " uses" : "s use") + " where locals";
      return;
    }
    result.tier = Tier::low;
    result.summary = "only global definitions";
    auto entry = globals_.find("program");
    std::vector<Position> at;
    if (entry != globals_.end()) at.push_back(entry->second.front()->position);
    finding(at, "no definition uses 'where' for local variables");
  }

  // ---- R5 ---------------------------------------------------------------

  static bool lowerCamel(const std::string& name) {
    if (name.empty() || !std::islower(static_cast<unsigned char>(name[0]))) {
      return false;
    }
    return std::all_of(name.begin(), name.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c));
    });
  }

  void naming(RuleResult& result) {
    int violations = 0;
    std::set<std::pair<const Scope*, std::string>> seen;
    auto checkName = [&](const std::string& name, Position at, std::size_t minLength,
                         const char* what) {
      if (!lowerCamel(name)) {
        ++violations;
        finding({at}, std::string(what) + " '" + name + "' is not lowerCamelCase");
      } else if (name.size() < minLength) {
        ++violations;
        finding({at}, std::string(what) + " '" + name + "' is shorter than " +
                          std::to_string(minLength) + " characters");
      }
    };
    std::set<std::string> topNames;
    forEachClause([&](const Definition& def, const Scope& scope) {
      // One report per name, not per clause.
      bool top = !scope.parent;
      if (!top || topNames.insert(def.name).second) {
        if (top || seen.insert({scope.parent, def.name}).second) {
          checkName(def.name, def.position,
                    static_cast<std::size_t>(param("minLength")), "name");
        }
      }
      for (const Param& p : def.params) {
        checkName(p.name, p.position,
                  static_cast<std::size_t>(param("paramMinLength")), "parameter");
      }
      std::set<int> localColumns;
      for (const auto& local : def.locals) localColumns.insert(local.position.column);
      std::set<int> bodyColumns;
      for (int column : def.continuationColumns) {
        if (!localColumns.count(column)) bodyColumns.insert(column);
      }
      if (bodyColumns.size() > 1 || localColumns.size() > 1) {
        ++violations;
        finding({def.position}, "continuation lines of '" + def.name +
                                    "' are indented inconsistently");
      }
    });
    if (violations == 0) {
      result.tier = Tier::high;
    } else if (violations <= param("midMax")) {
      result.tier = Tier::mid;
    } else if (violations <= param("lowMax")) {
      result.tier = Tier::low;
    } else {
      result.tier = Tier::minimal;
    }
    result.summary = violations == 0 ? "names and indentation are consistent"
                                     : std::to_string(violations) +
                                           " naming or indentation issue" +
                                           (violations == 1 ? "" : "s");
  }

  // ---- R6 ---------------------------------------------------------------

  static bool isZero(const Expr& e) {
    const Expr* at = stripParens(std::make_shared<Expr>(e)).get();
    auto* literal = at->as<NumberLiteral>();
    return literal && literal->value == 0;
  }

  // `p - 1` or `p + 1` where p is parameter `index` of the clause.
  static int stepOf(const Expr& e, const std::string& param) {
    ExprPtr bare = stripParens(std::make_shared<Expr>(e));
    auto* b = bare->as<Binary>();
    if (!b || (b->op != BinaryOp::add && b->op != BinaryOp::subtract)) return 0;
    ExprPtr lhs = stripParens(b->lhs), rhs = stripParens(b->rhs);
    auto* id = lhs->as<Identifier>();
    auto* one = rhs->as<NumberLiteral>();
    if (!id || id->name != param || !one || one->value != 1) return 0;
    return b->op == BinaryOp::add ? 1 : -1;
  }

  void ranges(RuleResult& result) {
    int ranged = 0;
    std::vector<std::pair<std::string, const Expr*>> overlaysCalls;
    std::map<std::string, std::vector<const Expr*>> zeroCalls;
    forEachClause([&](const Definition& def, const Scope& scope) {
      walkExpr(*def.body, [&](const Expr& e) {
        auto* call = e.as<Call>();
        if (!call) return;
        Resolved r = lookup(call->callee, &scope);
        if (call->callee == "overlays" && r.kind == Resolved::Kind::builtin &&
            call->args.size() == 2) {
          ++ranged;
          ExprPtr f = stripParens(call->args[0]);
          if (auto* id = f->as<Identifier>()) {
            if (lookup(id->name, &scope).kind == Resolved::Kind::global) {
              overlaysCalls.push_back({id->name, &e});
            }
          }
        }
        if (r.kind == Resolved::Kind::global && call->args.size() == 1 &&
            isZero(*call->args[0])) {
          zeroCalls[call->callee].push_back(&e);
        }
      });
    });
    for (const auto& [name, site] : overlaysCalls) {
      auto zero = zeroCalls.find(name);
      if (zero == zeroCalls.end()) continue;
      std::vector<Position> at{site->position};
      for (const Expr* z : zero->second) at.push_back(z->position);
      finding(at, "overlays already draws " + name + "(1) to " + name +
                      "(n); drawing " + name + "(0) too repeats an end of the range");
    }
    // Self-recursion guarded by an inclusive comparison that admits 0 and
    // walks the parameter one step at a time covers both ends.
    for (const Definition* def : roots_) {
      if (!def->guard) continue;
      auto* cmp = stripParens(def->guard)->as<Binary>();
      if (!cmp || (cmp->op != BinaryOp::lessEqual && cmp->op != BinaryOp::greaterEqual)) {
        continue;
      }
      ExprPtr lhs = stripParens(cmp->lhs), rhs = stripParens(cmp->rhs);
      // Normalize to `p >= bound` (descending) or `p <= bound` (ascending).
      bool paramLeft = lhs->as<Identifier>() != nullptr;
      auto* id = (paramLeft ? lhs : rhs)->as<Identifier>();
      if (!id) continue;
      const Expr& bound = paramLeft ? *rhs : *lhs;
      bool lowerBound = (cmp->op == BinaryOp::greaterEqual) == paramLeft;
      auto slot = std::find_if(def->params.begin(), def->params.end(),
                               [&](const Param& p) { return p.name == id->name; });
      if (slot == def->params.end()) continue;
      std::size_t index = static_cast<std::size_t>(slot - def->params.begin());
      bool recursive = false;
      walkExpr(*def->body, [&](const Expr& e) {
        auto* call = e.as<Call>();
        if (!call || call->callee != def->name || call->args.size() <= index) return;
        int step = stepOf(*call->args[index], id->name);
        if ((lowerBound && step == -1) || (!lowerBound && step == 1)) recursive = true;
      });
      if (!recursive) continue;
      ++ranged;
      bool bothEnds = lowerBound ? isZero(bound) : zeroCalls.count(def->name) > 0;
      if (bothEnds) {
        finding({def->guard->position},
                "the guard of '" + def->name +
                    "' includes both 0 and the far end of its range");
      }
    }
    int problems = 0;
    for (const auto& f : report_.findings) problems += f.rule == rule_->id;
    result.tier = problems == 0 ? Tier::high : Tier::low;
    if (ranged == 0) {
      result.summary = "no ranges to review";
    } else {
      result.summary = problems == 0 ? "ranges include one end"
                                     : "a range draws both of its ends";
    }
  }

  const TypedProgram& program_;
  std::map<std::string, Clauses> globals_;
  std::set<std::string> reachable_;
  std::vector<const Definition*> roots_;
  std::set<std::string> noted_;
  const RubricRule* rule_ = nullptr;
  LintReport report_;
};

json positionsJson(const std::vector<Position>& positions) {
  json out = json::array();
  for (const Position& p : positions) out.push_back({{"line", p.line}, {"column", p.column}});
  return out;
}

}  // namespace

LintReport lintProgram(const TypedProgram& program,
                       const std::vector<RubricRule>& rubric) {
  return Linter(program).run(rubric);
}

std::string reportToJson(const LintReport& report) {
  json out;
  out["rules"] = json::array();
  for (const auto& r : report.results) {
    out["rules"].push_back({{"id", r.rule},
                            {"name", r.name},
                            {"tier", toString(r.tier)},
                            {"points", r.points},
                            {"maxPoints", r.maxPoints},
                            {"summary", r.summary}});
  }
  out["findings"] = json::array();
  for (const auto& f : report.findings) {
    out["findings"].push_back({{"rule", f.rule},
                               {"tier", toString(f.tier)},
                               {"positions", positionsJson(f.positions)},
                               {"explanation", f.explanation}});
  }
  out["notes"] = json::array();
  for (const auto& n : report.notes) {
    out["notes"].push_back({{"code", n.code},
                            {"message", n.message},
                            {"line", n.position.line},
                            {"column", n.position.column}});
  }
  out["total"] = report.total;
  out["maximum"] = report.maximum;
  return out.dump(2);
}

std::string reportToText(const LintReport& report) {
  std::ostringstream out;
  for (const auto& r : report.results) {
    out << r.rule << ' ' << r.name << ": " << toString(r.tier) << ' '
        << formatNumber(r.points) << '/' << formatNumber(r.maxPoints) << " ("
        << r.summary << ")\n";
    for (const auto& f : report.findings) {
      if (f.rule != r.rule) continue;
      out << "  " << f.explanation;
      if (!f.positions.empty()) out << " [" << sitesOf(f.positions) << "]";
      out << '\n';
    }
  }
  for (const auto& n : report.notes) out << "note: " << formatDiagnostic(n) << '\n';
  out << "total: " << formatNumber(report.total) << '/'
      << formatNumber(report.maximum) << '\n';
  return out.str();
}

}  // namespace funcanvas
