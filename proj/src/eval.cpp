// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

#include "funcanvas/eval.hpp"

#include <pthread.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <utility>

#include "funcanvas/number_format.hpp"
#include "funcanvas/prng.hpp"

namespace funcanvas {

std::string code(RuntimeErrorKind kind) {
  switch (kind) {
    case RuntimeErrorKind::guardFallthrough:
      return "guard-fallthrough";
    case RuntimeErrorKind::indexOutOfRange:
      return "index-out-of-range";
    case RuntimeErrorKind::divisionByZero:
      return "division-by-zero";
    case RuntimeErrorKind::fuelExhausted:
      return "fuel-exhausted";
    case RuntimeErrorKind::nonFiniteNumber:
      return "non-finite-number";
    case RuntimeErrorKind::nonWholeCount:
      return "non-whole-count";
    case RuntimeErrorKind::negativeCount:
      return "negative-count";
    case RuntimeErrorKind::invalidArgument:
      return "invalid-argument";
    case RuntimeErrorKind::deadlineExceeded:
      return "deadline-exceeded";
    case RuntimeErrorKind::recursionTooDeep:
      return "recursion-too-deep";
  }
  return "runtime-error";
}

RuntimeError::RuntimeError(RuntimeErrorKind kind, std::string message,
                           Position position, std::vector<StackFrame> stack)
    : std::runtime_error(std::move(message)),
      kind_(kind),
      position_(position),
      stack_(std::move(stack)) {}

Diagnostic RuntimeError::toDiagnostic() const {
  std::string message = what();
  if (time) message += " (at t = " + formatNumber(*time) + ")";
  if (!stack_.empty()) {
    message += "; called from";
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
      message += " " + it->function + " at " +
                 std::to_string(it->position.line) + ":" +
                 std::to_string(it->position.column);
      if (std::next(it) != stack_.rend()) message += ",";
    }
  }
  return makeError(code(kind_), std::move(message), position_);
}

// ---------------------------------------------------------------------------
// Runtime structures

using ClauseGroup = std::vector<const Definition*>;

struct Env;
using EnvPtr = std::shared_ptr<const Env>;

struct Binding {
  const std::string* name;
  ThunkPtr thunk;
  // Local functions close over the environment that holds them; storing a
  // closure here would make the environment own itself.
  const ClauseGroup* function = nullptr;
};

struct Env : std::enable_shared_from_this<Env> {
  EnvPtr parent;
  std::vector<Binding> bindings;
};

struct Closure {
  std::string name;
  const ClauseGroup* clauses;
  EnvPtr env;  // null at top level
};

class Thunk {
 public:
  using Generator = std::function<ValuePtr(Interpreter&)>;
  enum class State { pending, forcing, done };

  explicit Thunk(ValuePtr value) : value_(std::move(value)), state_(State::done) {}

  Thunk(const Expr* expr, EnvPtr env)
      : expr_(expr), env_(std::move(env)), position_(expr->position) {}

  // A definition with no parameters. `scope` is the environment that
  // binds it, kept raw to avoid a cycle; the thunk is only reachable
  // through that environment while pending.
  Thunk(std::string name, const ClauseGroup* group, const Env* scope)
      : name_(std::move(name)),
        group_(group),
        scope_(scope),
        position_(group->front()->position) {}

  Thunk(Generator generator, Position position)
      : generator_(std::move(generator)), position_(position) {}

  bool evaluated() const { return state_ == State::done; }
  bool shareable() const { return !group_ || !scope_; }

  ValuePtr takeValue() { return std::move(value_); }

 private:
  friend class Interpreter;

  const Expr* expr_ = nullptr;
  EnvPtr env_;
  std::string name_;
  const ClauseGroup* group_ = nullptr;
  const Env* scope_ = nullptr;
  Generator generator_;
  ValuePtr value_;
  State state_ = State::pending;
  Position position_;
};

// ---------------------------------------------------------------------------
// Interpreter

class Interpreter {
 public:
  Interpreter(const TypedProgram& program, EvalOptions options)
      : tree_(program.tree), options_(options) {
    for (const Definition& def : tree_->definitions) {
      globalGroups_[def.name].push_back(&def);
      collectLocals(def);
    }
    for (const auto& [name, group] : globalGroups_) {
      Global entry;
      if (group.front()->arity() == 0) {
        entry.caf = std::make_shared<Thunk>(name, &group, nullptr);
      } else {
        entry.function = FunctionValue{
            name, std::make_shared<const Closure>(Closure{name, &group, nullptr}),
            group.front()->arity()};
      }
      globals_.emplace(name, std::move(entry));
    }
  }

  ValuePtr global(const std::string& name) {
    auto it = globals_.find(name);
    if (it == globals_.end()) {
      throw std::invalid_argument("no definition named '" + name + "'");
    }
    if (it->second.caf) return force(*it->second.caf);
    return std::make_shared<const Value>(*it->second.function);
  }

  ValuePtr applyValues(const FunctionValue& f, std::vector<ValuePtr> args) {
    std::vector<ThunkPtr> thunks;
    for (auto& a : args) thunks.push_back(std::make_shared<Thunk>(std::move(a)));
    return applyFunction(f, thunks, Position{1, 1});
  }

  std::vector<ValuePtr> take(ValuePtr list, std::size_t n) {
    std::vector<ValuePtr> out;
    while (out.size() < n) {
      const auto& l = std::get<ListValue>(*list);
      if (!l.cell) break;
      out.push_back(force(*l.cell->head));
      list = force(*l.cell->tail);
    }
    return out;
  }

  std::string display(const ValuePtr& value, std::size_t maxItems) {
    return std::visit(
        [&](const auto& v) -> std::string {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            return formatNumber(v);
          } else if constexpr (std::is_same_v<T, bool>) {
            return v ? "true" : "false";
          } else if constexpr (std::is_same_v<T, Text>) {
            return "\"" + v.value + "\"";
          } else if constexpr (std::is_same_v<T, Color>) {
            return v.describe();
          } else if constexpr (std::is_same_v<T, Picture>) {
            return "<picture>";
          } else if constexpr (std::is_same_v<T, ListValue>) {
            std::string out = "[";
            ValuePtr rest = value;
            for (std::size_t i = 0;; ++i) {
              const auto& l = std::get<ListValue>(*rest);
              if (!l.cell) break;
              if (i == maxItems) {
                out += ", ...";
                break;
              }
              if (i > 0) out += ", ";
              out += display(force(*l.cell->head), maxItems);
              rest = force(*l.cell->tail);
            }
            return out + "]";
          } else if constexpr (std::is_same_v<T, TupleValue>) {
            std::string out = "(";
            for (std::size_t i = 0; i < v.items.size(); ++i) {
              if (i > 0) out += ", ";
              out += display(force(*v.items[i]), maxItems);
            }
            return out + ")";
          } else if constexpr (std::is_same_v<T, FunctionValue>) {
            return "<function " + v.name + ">";
          } else {
            return v.drawing ? "<drawing>" : "<animation>";
          }
        },
        *value);
  }

  Picture frame(const FunctionValue& animation, double t) {
    refuel();
    ValuePtr v = applyValues(animation, {number(t)});
    return std::get<Picture>(*v);
  }

  uint64_t fuelUsed() const { return used_; }
  void refuel() { used_ = 0; }

  // -------------------------------------------------------------------------

  ValuePtr force(Thunk& t) {
    if (t.state_ == Thunk::State::done) return t.value_;
    if (t.state_ == Thunk::State::forcing) {
      // Re-entering a value still being computed can never finish.
      fail(RuntimeErrorKind::fuelExhausted,
           (t.name_.empty() ? std::string("a value")
                            : "'" + t.name_ + "'") +
               " is defined in terms of itself and never produces a value",
           t.position_);
    }
    DepthGuard depth(*this, t.position_);
    t.state_ = Thunk::State::forcing;
    ValuePtr v;
    try {
      if (t.generator_) {
        v = t.generator_(*this);
      } else if (t.group_) {
        EnvPtr scope = t.scope_ ? t.scope_->shared_from_this() : nullptr;
        Closure closure{t.name_, t.group_, std::move(scope)};
        v = applyClosure(closure, {}, t.position_);
      } else {
        v = eval(*t.expr_, t.env_);
      }
    } catch (...) {
      t.state_ = Thunk::State::pending;
      throw;
    }
    t.value_ = v;
    t.state_ = Thunk::State::done;
    t.expr_ = nullptr;
    t.env_.reset();
    t.generator_ = nullptr;
    return v;
  }

  ValuePtr eval(const Expr& expr, const EnvPtr& env) {
    return std::visit(
        [&](const auto& n) -> ValuePtr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, NumberLiteral>) {
            return number(n.value);
          } else if constexpr (std::is_same_v<T, TextLiteral>) {
            return std::make_shared<const Value>(Text{n.value});
          } else if constexpr (std::is_same_v<T, Identifier>) {
            return lookup(n.name, env, expr.position);
          } else if constexpr (std::is_same_v<T, Call>) {
            return evalCall(expr, n, env);
          } else if constexpr (std::is_same_v<T, Binary>) {
            return evalBinary(expr, n, env);
          } else if constexpr (std::is_same_v<T, Negate>) {
            return number(-numberOf(eval(*n.operand, env), n.operand->position));
          } else if constexpr (std::is_same_v<T, ListLiteral>) {
            ValuePtr list = std::make_shared<const Value>(ListValue{});
            for (auto it = n.elements.rbegin(); it != n.elements.rend(); ++it) {
              list = cons(delay(**it, env), std::make_shared<Thunk>(list));
            }
            return list;
          } else if constexpr (std::is_same_v<T, TupleLiteral>) {
            TupleValue tuple;
            for (const auto& e : n.elements) tuple.items.push_back(delay(*e, env));
            return std::make_shared<const Value>(std::move(tuple));
          } else if constexpr (std::is_same_v<T, Index>) {
            return evalIndex(expr, n, env);
          } else {
            return eval(*n.inner, env);
          }
        },
        expr.node);
  }

  ValuePtr applyFunction(const FunctionValue& f,
                         const std::vector<ThunkPtr>& args, Position at) {
    if (f.closure) return applyClosure(*f.closure, args, at);
    return applyBuiltin(f.name, args, at);
  }

 private:
  struct Global {
    ThunkPtr caf;
    std::optional<FunctionValue> function;
  };

  class DepthGuard {
   public:
    DepthGuard(Interpreter& in, Position at) : in_(in) {
      if (++in_.depth_ > in_.options_.maxDepth) {
        --in_.depth_;
        in_.fail(RuntimeErrorKind::recursionTooDeep,
                 "recursion is more than " +
                     std::to_string(in_.options_.maxDepth) + " calls deep",
                 at);
      }
    }
    ~DepthGuard() { --in_.depth_; }

   private:
    Interpreter& in_;
  };

  class FrameGuard {
   public:
    FrameGuard(Interpreter& in, const std::string& name, Position at)
        : in_(in) {
      in_.stack_.push_back({name, at});
    }
    ~FrameGuard() { in_.stack_.pop_back(); }

   private:
    Interpreter& in_;
  };

  void collectLocals(const Definition& def) {
    if (def.locals.empty()) return;
    auto& groups = localGroups_[&def];
    for (const Definition& local : def.locals) {
      auto it = std::find_if(groups.begin(), groups.end(),
                             [&](const auto& g) { return g.first == local.name; });
      if (it == groups.end()) {
        groups.emplace_back(local.name, ClauseGroup{});
        it = std::prev(groups.end());
      }
      it->second.push_back(&local);
      collectLocals(local);
    }
  }

  [[noreturn]] void fail(RuntimeErrorKind kind, std::string message,
                         Position at) {
    std::size_t first = stack_.size() > RuntimeError::kMaxFrames
                            ? stack_.size() - RuntimeError::kMaxFrames
                            : 0;
    throw RuntimeError(kind, std::move(message), at,
                       std::vector<StackFrame>(stack_.begin() + first,
                                               stack_.end()));
  }

  void charge(Position at) {
    if (++used_ > options_.fuel) {
      fail(RuntimeErrorKind::fuelExhausted,
           "evaluation ran out of fuel after " + std::to_string(options_.fuel) +
               " function applications",
           at);
    }
    if ((used_ & 255) == 0) checkLimits(at);
  }

  void checkLimits(Position at) {
    if (options_.cancelled && options_.cancelled->load()) {
      fail(RuntimeErrorKind::deadlineExceeded, "evaluation was cancelled", at);
    }
    if (options_.deadline &&
        std::chrono::steady_clock::now() > *options_.deadline) {
      fail(RuntimeErrorKind::deadlineExceeded,
           "evaluation took longer than the time limit", at);
    }
  }

  static ValuePtr number(double v) { return std::make_shared<const Value>(v); }

  ValuePtr checkedNumber(double v, Position at) {
    if (!std::isfinite(v)) {
      fail(RuntimeErrorKind::nonFiniteNumber,
           "arithmetic result is too large to represent", at);
    }
    return number(v);
  }

  static ValuePtr cons(ThunkPtr head, ThunkPtr tail) {
    return std::make_shared<const Value>(ListValue{
        std::make_shared<const ListCell>(ListCell{std::move(head), std::move(tail)})});
  }

  static ValuePtr emptyList() {
    return std::make_shared<const Value>(ListValue{});
  }

  double numberOf(const ValuePtr& v, Position) { return std::get<double>(*v); }

  // Suspends an argument or element. Literals and shareable bindings are
  // passed through without a new thunk.
  ThunkPtr delay(const Expr& expr, const EnvPtr& env) {
    if (const auto* lit = expr.as<NumberLiteral>()) {
      return std::make_shared<Thunk>(number(lit->value));
    }
    if (const auto* id = expr.as<Identifier>()) {
      for (const Env* e = env.get(); e; e = e->parent.get()) {
        for (const Binding& b : e->bindings) {
          if (*b.name != id->name) continue;
          if (b.thunk && b.thunk->shareable()) return b.thunk;
          return std::make_shared<Thunk>(&expr, env);
        }
      }
      auto it = globals_.find(id->name);
      if (it != globals_.end() && it->second.caf) return it->second.caf;
    }
    return std::make_shared<Thunk>(&expr, env);
  }

  bool bound(const std::string& name, const EnvPtr& env) const {
    for (const Env* e = env.get(); e; e = e->parent.get()) {
      for (const Binding& b : e->bindings) {
        if (*b.name == name) return true;
      }
    }
    return globals_.count(name) > 0;
  }

  ValuePtr lookup(const std::string& name, const EnvPtr& env, Position at) {
    for (const Env* e = env.get(); e; e = e->parent.get()) {
      for (const Binding& b : e->bindings) {
        if (*b.name != name) continue;
        if (b.thunk) return force(*b.thunk);
        return std::make_shared<const Value>(FunctionValue{
            name,
            std::make_shared<const Closure>(
                Closure{name, b.function, e->shared_from_this()}),
            b.function->front()->arity()});
      }
    }
    auto it = globals_.find(name);
    if (it != globals_.end()) {
      if (it->second.caf) return force(*it->second.caf);
      return std::make_shared<const Value>(*it->second.function);
    }
    return builtinValue(name, at);
  }

  ValuePtr builtinValue(const std::string& name, Position at) {
    if (name == "blank") return std::make_shared<const Value>(Picture());
    if (name == "coordinatePlane") {
      return std::make_shared<const Value>(Picture::coordinatePlane());
    }
    if (Color::isNamed(name)) {
      return std::make_shared<const Value>(Color::named(name));
    }
    const BuiltinInfo* info = findBuiltin(name);
    if (!info || info->arity < 0) {
      fail(RuntimeErrorKind::invalidArgument, "'" + name + "' is not defined",
           at);
    }
    return std::make_shared<const Value>(FunctionValue{name, nullptr, info->arity});
  }

  ValuePtr evalCall(const Expr& expr, const Call& call, const EnvPtr& env) {
    std::vector<ThunkPtr> args;
    args.reserve(call.args.size());
    for (const auto& a : call.args) args.push_back(delay(*a, env));
    // A call of a builtin name means the function, even where the bare name
    // is also a constant (grey).
    ValuePtr callee;
    if (!bound(call.callee, env)) {
      const BuiltinInfo* info = findBuiltin(call.callee);
      if (info && info->arity >= 0) {
        return applyFunction(FunctionValue{call.callee, nullptr, info->arity},
                             args, expr.position);
      }
    }
    callee = lookup(call.callee, env, expr.position);
    const auto* f = std::get_if<FunctionValue>(callee.get());
    if (!f) {
      fail(RuntimeErrorKind::invalidArgument,
           "'" + call.callee + "' is not a function", expr.position);
    }
    return applyFunction(*f, args, expr.position);
  }

  ValuePtr evalBinary(const Expr& expr, const Binary& b, const EnvPtr& env) {
    ValuePtr lhs = eval(*b.lhs, env);
    ValuePtr rhs = eval(*b.rhs, env);
    switch (b.op) {
      case BinaryOp::overlay:
        return std::make_shared<const Value>(
            overlay(std::get<Picture>(*lhs), std::get<Picture>(*rhs)));
      case BinaryOp::equal:
        return std::make_shared<const Value>(sameValue(*lhs, *rhs));
      case BinaryOp::notEqual:
        return std::make_shared<const Value>(!sameValue(*lhs, *rhs));
      default:
        break;
    }
    if (const auto* lt = std::get_if<Text>(lhs.get())) {
      const std::string& x = lt->value;
      const std::string& y = std::get<Text>(*rhs).value;
      return std::make_shared<const Value>(compare(b.op, x, y));
    }
    double x = std::get<double>(*lhs);
    double y = std::get<double>(*rhs);
    switch (b.op) {
      case BinaryOp::add:
        return checkedNumber(x + y, expr.position);
      case BinaryOp::subtract:
        return checkedNumber(x - y, expr.position);
      case BinaryOp::multiply:
        return checkedNumber(x * y, expr.position);
      case BinaryOp::divide:
        if (y == 0) {
          fail(RuntimeErrorKind::divisionByZero,
               "division by zero (" + formatNumber(x) + " / 0)", expr.position);
        }
        return checkedNumber(x / y, expr.position);
      default:
        return std::make_shared<const Value>(compare(b.op, x, y));
    }
  }

  template <typename T>
  static bool compare(BinaryOp op, const T& x, const T& y) {
    switch (op) {
      case BinaryOp::less:
        return x < y;
      case BinaryOp::lessEqual:
        return x <= y;
      case BinaryOp::greater:
        return x > y;
      case BinaryOp::greaterEqual:
        return x >= y;
      default:
        return false;
    }
  }

  static bool sameValue(const Value& a, const Value& b) {
    if (a.index() != b.index()) return false;
    if (const auto* x = std::get_if<double>(&a)) return *x == std::get<double>(b);
    if (const auto* x = std::get_if<bool>(&a)) return *x == std::get<bool>(b);
    if (const auto* x = std::get_if<Text>(&a)) {
      return x->value == std::get<Text>(b).value;
    }
    if (const auto* x = std::get_if<Color>(&a)) {
      return x->resolve() == std::get<Color>(b).resolve();
    }
    return false;
  }

  // Checks a count argument and returns it as an integer.
  uint64_t wholeCount(double n, const std::string& what, Position at) {
    if (n != std::trunc(n)) {
      fail(RuntimeErrorKind::nonWholeCount,
           what + " must be a whole number, got " + formatNumber(n), at);
    }
    if (n < 0) {
      fail(RuntimeErrorKind::negativeCount,
           what + " must not be negative, got " + formatNumber(n), at);
    }
    return n >= 1.8e19 ? UINT64_MAX : static_cast<uint64_t>(n);
  }

  ValuePtr evalIndex(const Expr& expr, const Index& ix, const EnvPtr& env) {
    ValuePtr list = eval(*ix.list, env);
    double n = std::get<double>(*eval(*ix.index, env));
    if (n != std::trunc(n)) {
      fail(RuntimeErrorKind::nonWholeCount,
           "list index must be a whole number, got " + formatNumber(n),
           expr.position);
    }
    if (n < 1) {
      fail(RuntimeErrorKind::indexOutOfRange,
           "list index " + formatNumber(n) + " is out of range; the first element is # 1",
           expr.position);
    }
    double seen = 0;
    while (true) {
      const auto& l = std::get<ListValue>(*list);
      if (!l.cell) {
        fail(RuntimeErrorKind::indexOutOfRange,
             "list index " + formatNumber(n) + " is out of range for a list of " +
                 formatNumber(seen) + (seen == 1 ? " element" : " elements"),
             expr.position);
      }
      if (++seen == n) return force(*l.cell->head);
      list = force(*l.cell->tail);
    }
  }

  EnvPtr bindLocals(const Definition& clause, EnvPtr parent) {
    auto it = localGroups_.find(&clause);
    if (it == localGroups_.end()) return parent;
    auto scope = std::make_shared<Env>();
    scope->parent = std::move(parent);
    for (const auto& [name, group] : it->second) {
      Binding b{&name, nullptr, nullptr};
      if (group.front()->arity() == 0) {
        b.thunk = std::make_shared<Thunk>(name, &group, scope.get());
      } else {
        b.function = &group;
      }
      scope->bindings.push_back(std::move(b));
    }
    return scope;
  }

  ValuePtr applyClosure(const Closure& c, const std::vector<ThunkPtr>& args,
                        Position at) {
    charge(at);
    DepthGuard depth(*this, at);
    FrameGuard frame(*this, c.name, at);
    for (const Definition* clause : *c.clauses) {
      EnvPtr scope = c.env;
      if (!clause->params.empty()) {
        auto params = std::make_shared<Env>();
        params->parent = c.env;
        for (std::size_t i = 0; i < clause->params.size(); ++i) {
          params->bindings.push_back({&clause->params[i].name, args[i], nullptr});
        }
        scope = std::move(params);
      }
      scope = bindLocals(*clause, std::move(scope));
      if (clause->guard && !std::get<bool>(*eval(*clause->guard, scope))) {
        continue;
      }
      return eval(*clause->body, scope);
    }
    std::string shown;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i > 0) shown += ", ";
      shown += args[i]->evaluated() ? display(args[i]->value_, 5) : "_";
    }
    fail(RuntimeErrorKind::guardFallthrough,
         "no clause of '" + c.name + "' applies" +
             (args.empty() ? std::string() : " to (" + shown + ")"),
         at);
  }

  // -------------------------------------------------------------------------
  // Builtins

  double num(const ThunkPtr& t) { return std::get<double>(*force(*t)); }
  const Picture& pic(const ValuePtr& v) { return std::get<Picture>(*v); }

  std::vector<ValuePtr> spine(ValuePtr list) {
    std::vector<ValuePtr> items;
    while (true) {
      const auto& l = std::get<ListValue>(*list);
      if (!l.cell) return items;
      items.push_back(force(*l.cell->head));
      list = force(*l.cell->tail);
    }
  }

  std::vector<Point> points(const ThunkPtr& t) {
    std::vector<Point> out;
    for (const ValuePtr& item : spine(force(*t))) {
      const auto& tuple = std::get<TupleValue>(*item);
      out.push_back({num(tuple.items.at(0)), num(tuple.items.at(1))});
    }
    return out;
  }

  ValuePtr mapList(const ValuePtr& list, const FunctionValue& f, Position at) {
    const auto& l = std::get<ListValue>(*list);
    if (!l.cell) return emptyList();
    auto head = std::make_shared<Thunk>(
        [f, h = l.cell->head, at](Interpreter& in) {
          return in.applyFunction(f, {h}, at);
        },
        at);
    auto tail = std::make_shared<Thunk>(
        [f, t = l.cell->tail, at](Interpreter& in) {
          return in.mapList(in.force(*t), f, at);
        },
        at);
    return cons(std::move(head), std::move(tail));
  }

  ValuePtr randomList(RandomStream stream, Position at) {
    double v = stream.next();
    auto tail = std::make_shared<Thunk>(
        [stream, at](Interpreter& in) {
          in.charge(at);
          return in.randomList(stream, at);
        },
        at);
    return cons(std::make_shared<Thunk>(number(v)), std::move(tail));
  }

  ValuePtr overlays(const FunctionValue& f, uint64_t n, Position at) {
    if (n == 0) return std::make_shared<const Value>(Picture());
    std::vector<Picture> parts;
    for (uint64_t k = 1; k <= n; ++k) {
      auto arg = std::make_shared<Thunk>(number(static_cast<double>(k)));
      parts.push_back(pic(applyFunction(f, {arg}, at)));
    }
    Picture result = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) {
      result = overlay(parts[i], result);
    }
    return std::make_shared<const Value>(std::move(result));
  }

  ValuePtr pictures(const ThunkPtr& list) {
    std::vector<ValuePtr> items = spine(force(*list));
    if (items.empty()) return std::make_shared<const Value>(Picture());
    Picture result = pic(items.back());
    for (std::size_t i = items.size() - 1; i-- > 0;) {
      result = overlay(pic(items[i]), result);
    }
    return std::make_shared<const Value>(std::move(result));
  }

  ValuePtr applyBuiltin(const std::string& name,
                        const std::vector<ThunkPtr>& a, Position at) {
    charge(at);
    auto picture = [](Picture p) { return std::make_shared<const Value>(std::move(p)); };
    auto color = [](Color c) { return std::make_shared<const Value>(std::move(c)); };
    try {
      if (name == "circle") return picture(Picture::circle(num(a[0]), false));
      if (name == "solidCircle") return picture(Picture::circle(num(a[0]), true));
      if (name == "rectangle") {
        return picture(Picture::rectangle(num(a[0]), num(a[1]), false));
      }
      if (name == "solidRectangle") {
        return picture(Picture::rectangle(num(a[0]), num(a[1]), true));
      }
      if (name == "polygon") return picture(Picture::polygon(points(a[0]), false));
      if (name == "solidPolygon") {
        return picture(Picture::polygon(points(a[0]), true));
      }
      if (name == "sector") {
        return picture(Picture::sector(num(a[0]), num(a[1]), num(a[2])));
      }
      if (name == "lettering") {
        return picture(Picture::lettering(std::get<Text>(*force(*a[0])).value));
      }
      if (name == "translated") {
        return picture(pic(force(*a[0])).translated(num(a[1]), num(a[2])));
      }
      if (name == "rotated") return picture(pic(force(*a[0])).rotated(num(a[1])));
      if (name == "scaled") {
        return picture(pic(force(*a[0])).scaled(num(a[1]), num(a[2])));
      }
      if (name == "dilated") return picture(pic(force(*a[0])).dilated(num(a[1])));
      if (name == "colored") {
        return picture(
            pic(force(*a[0])).colored(std::get<Color>(*force(*a[1]))));
      }
      if (name == "translucent") {
        return color(Color::translucent(std::get<Color>(*force(*a[0]))));
      }
      if (name == "grey") return color(Color::grey(num(a[0])));
      if (name == "rgb") {
        return color(Color::rgba(num(a[0]), num(a[1]), num(a[2]), 1));
      }
      if (name == "rgba") {
        return color(Color::rgba(num(a[0]), num(a[1]), num(a[2]), num(a[3])));
      }
    } catch (const PictureError& e) {
      fail(RuntimeErrorKind::invalidArgument,
           "'" + name + "': " + e.what(), at);
    }
    if (name == "pictures") return pictures(a[0]);
    if (name == "overlays") {
      FunctionValue f = std::get<FunctionValue>(*force(*a[0]));
      return overlays(f, wholeCount(num(a[1]), "overlays count", at), at);
    }
    if (name == "foreach") {
      ValuePtr list = force(*a[0]);
      FunctionValue f = std::get<FunctionValue>(*force(*a[1]));
      return mapList(list, f, at);
    }
    if (name == "randomNumbers") return randomList(RandomStream(num(a[0])), at);
    if (name == "drawingOf") {
      return std::make_shared<const Value>(
          ProgramValue{pic(force(*a[0])), std::nullopt});
    }
    if (name == "animationOf") {
      return std::make_shared<const Value>(
          ProgramValue{std::nullopt, std::get<FunctionValue>(*force(*a[0]))});
    }
    fail(RuntimeErrorKind::invalidArgument, "'" + name + "' is not a function",
         at);
  }

  std::shared_ptr<const SyntaxTree> tree_;
  EvalOptions options_;
  std::map<std::string, ClauseGroup> globalGroups_;
  std::map<const Definition*, std::vector<std::pair<std::string, ClauseGroup>>>
      localGroups_;
  std::unordered_map<std::string, Global> globals_;
  std::vector<StackFrame> stack_;
  uint64_t used_ = 0;
  std::size_t depth_ = 0;
};

// ---------------------------------------------------------------------------

ListCell::~ListCell() {
  // Unlink a long forced tail one cell at a time instead of recursively.
  ThunkPtr next = std::move(tail);
  while (next && next.use_count() == 1) {
    ValuePtr value = next->takeValue();
    next.reset();
    if (!value || value.use_count() != 1) break;
    const auto* list = std::get_if<ListValue>(value.get());
    if (!list || !list->cell || list->cell.use_count() != 1) break;
    next = std::move(const_cast<ListCell&>(*list->cell).tail);
  }
}

// ---------------------------------------------------------------------------
// Session

namespace {

struct LargeStackJob {
  const std::function<void()>* task;
  std::exception_ptr error;
};

void* runJob(void* arg) {
  auto* job = static_cast<LargeStackJob*>(arg);
  try {
    (*job->task)();
  } catch (...) {
    job->error = std::current_exception();
  }
  return nullptr;
}

}  // namespace

void runOnLargeStack(const std::function<void()>& task, std::size_t stackBytes) {
  LargeStackJob job{&task, nullptr};
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, stackBytes);
  pthread_t thread;
  int rc = pthread_create(&thread, &attr, runJob, &job);
  pthread_attr_destroy(&attr);
  if (rc != 0) {
    // No thread available; fall back to the caller's stack.
    task();
    return;
  }
  pthread_join(thread, nullptr);
  if (job.error) std::rethrow_exception(job.error);
}

Session::Session(const TypedProgram& program, EvalOptions options)
    : impl_(std::make_unique<Interpreter>(program, options)) {}

Session::~Session() {
  if (impl_) runOnLargeStack([this] { impl_.reset(); });
}

Session::Session(Session&&) noexcept = default;
Session& Session::operator=(Session&& other) noexcept {
  if (this != &other) {
    if (impl_) runOnLargeStack([this] { impl_.reset(); });
    impl_ = std::move(other.impl_);
  }
  return *this;
}

ValuePtr Session::global(const std::string& name) {
  ValuePtr out;
  runOnLargeStack([&] { out = impl_->global(name); });
  return out;
}

ValuePtr Session::apply(const FunctionValue& function,
                        std::vector<ValuePtr> args) {
  ValuePtr out;
  runOnLargeStack([&] { out = impl_->applyValues(function, std::move(args)); });
  return out;
}

std::vector<ValuePtr> Session::take(const ValuePtr& list, std::size_t n) {
  std::vector<ValuePtr> out;
  runOnLargeStack([&] { out = impl_->take(list, n); });
  return out;
}

std::string Session::display(const ValuePtr& value, std::size_t maxItems) {
  std::string out;
  runOnLargeStack([&] { out = impl_->display(value, maxItems); });
  return out;
}

Picture Session::frame(const FunctionValue& animation, double t) {
  Picture out;
  runOnLargeStack([&] {
    try {
      out = impl_->frame(animation, t);
    } catch (RuntimeError& e) {
      e.time = t;
      throw;
    }
  });
  return out;
}

uint64_t Session::fuelUsed() const { return impl_->fuelUsed(); }
void Session::refuel() { impl_->refuel(); }

}  // namespace funcanvas
