// Copyright 2026 The funcanvas Authors
// SPDX-License-Identifier: Apache-2.0

// Call-by-need evaluation of checked programs.

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "funcanvas/analysis.hpp"
#include "funcanvas/picture.hpp"

namespace funcanvas {

enum class RuntimeErrorKind {
  guardFallthrough,
  indexOutOfRange,
  divisionByZero,
  fuelExhausted,
  nonFiniteNumber,
  nonWholeCount,
  negativeCount,
  invalidArgument,
  deadlineExceeded,
  recursionTooDeep,
};

/// Diagnostic code, e.g. "guard-fallthrough".
std::string code(RuntimeErrorKind kind);

struct StackFrame {
  std::string function;
  Position position;  // call site
};

class RuntimeError : public std::runtime_error {
 public:
  static constexpr std::size_t kMaxFrames = 20;

  RuntimeError(RuntimeErrorKind kind, std::string message, Position position,
               std::vector<StackFrame> stack = {});

  RuntimeErrorKind kind() const { return kind_; }
  const Position& position() const { return position_; }
  // Innermost call last, at most kMaxFrames entries.
  const std::vector<StackFrame>& stack() const { return stack_; }

  // Set when raised while sampling an animation.
  std::optional<double> time;

  Diagnostic toDiagnostic() const;

 private:
  RuntimeErrorKind kind_;
  Position position_;
  std::vector<StackFrame> stack_;
};

struct EvalOptions {
  static constexpr uint64_t kDefaultFuel = 1'000'000;

  uint64_t fuel = kDefaultFuel;
  // Nested forcing and application depth before recursion-too-deep.
  std::size_t maxDepth = 100'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  const std::atomic<bool>* cancelled = nullptr;
};

// ---------------------------------------------------------------------------
// Values

class Thunk;
using ThunkPtr = std::shared_ptr<Thunk>;
struct Closure;

struct Text {
  std::string value;
};

struct ListCell;

/// Lazy list; a null cell is the empty list.
struct ListValue {
  std::shared_ptr<const ListCell> cell;
};

struct TupleValue {
  std::vector<ThunkPtr> items;
};

/// A user closure, or a builtin when `closure` is null.
struct FunctionValue {
  std::string name;
  std::shared_ptr<const Closure> closure;
  int arity = 0;
};

struct ProgramValue {
  std::optional<Picture> drawing;
  std::optional<FunctionValue> animation;
};

using Value = std::variant<double, bool, Text, Color, Picture, ListValue,
                           TupleValue, FunctionValue, ProgramValue>;
using ValuePtr = std::shared_ptr<const Value>;

struct ListCell {
  ThunkPtr head;
  ThunkPtr tail;  // forces to a ListValue

  ~ListCell();
};

// ---------------------------------------------------------------------------
// Sessions

class Interpreter;

/// Evaluation state for one checked program. Top-level definitions are
/// memoized for the session's lifetime. Every entry point runs on a
/// dedicated thread with a large stack, so deep recursion in student code
/// hits the depth limit rather than the native stack.
///
/// A session is not thread-safe; distinct sessions are independent.
class Session {
 public:
  Session(const TypedProgram& program, EvalOptions options = {});
  ~Session();
  Session(Session&&) noexcept;
  Session& operator=(Session&&) noexcept;

  /// Value of the arity-0 definition `name`, to weak head normal form.
  ValuePtr global(const std::string& name);

  /// Value of `program`.
  ValuePtr program() { return global("program"); }

  /// Applies a function value to already-evaluated arguments.
  ValuePtr apply(const FunctionValue& function, std::vector<ValuePtr> args);

  /// Forces the first `n` elements of a list (fewer if it is shorter).
  std::vector<ValuePtr> take(const ValuePtr& list, std::size_t n);

  /// Forces a value completely, printing lists of more than `maxItems`
  /// elements with a trailing "...".
  std::string display(const ValuePtr& value, std::size_t maxItems = 1000);

  /// Picture of an animation at time t. Fuel is refilled for each call.
  Picture frame(const FunctionValue& animation, double t);

  uint64_t fuelUsed() const;
  void refuel();

 private:
  std::unique_ptr<Interpreter> impl_;
};

/// Runs `task` on a thread with a stack of `stackBytes`, rethrowing its
/// exception in the caller.
void runOnLargeStack(const std::function<void()>& task,
                     std::size_t stackBytes = std::size_t{512} << 20);

}  // namespace funcanvas
