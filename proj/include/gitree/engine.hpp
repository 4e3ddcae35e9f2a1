#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gitree/core.hpp"

namespace gitree {

// Per-family local states.
struct UnitState {};

struct Heap {
  std::map<Location, LaterTree> cells;
  Location next_fresh{0};
};

struct HandlerEntry {
  ExcName exc;
  KFun handler;
  KFun saved;
};
// front() is the innermost handler.
using HandlerStack = std::vector<HandlerEntry>;
// front() is the continuation saved by the most recent delimiter.
using ContStack = std::vector<KFun>;

using SubState = std::variant<UnitState, Heap, HandlerStack, ContStack>;
using SubStatePtr = std::shared_ptr<const SubState>;

template <class T>
SubStatePtr make_substate(T v) {
  return std::make_shared<const SubState>(std::move(v));
}

class CompositeState {
 public:
  void add(std::string family, SubStatePtr s);
  bool has(std::string_view family) const;
  const SubStatePtr& slot(std::string_view family) const;
  template <class T>
  const T& get(std::string_view family) const {
    return std::get<T>(*slot(family));
  }
  CompositeState with(std::string_view family, SubStatePtr s) const;
  // True when every family other than `family` holds the identical sub-state.
  bool frame_equal_except(const CompositeState& other, std::string_view family) const;
  std::vector<std::string> families() const;

 private:
  std::vector<std::pair<std::string, SubStatePtr>> slots_;
};

struct ReifySuccess {
  LaterTree next;
  SubStatePtr state;
  std::vector<LaterTree> spawned;
};
struct ReifyFailure {
  std::string reason;
};
using ReifyResult = std::variant<ReifySuccess, ReifyFailure>;

using ReifyFn = std::function<ReifyResult(const OpId&, const Payload&, const SubStatePtr&, const Cont&)>;

struct OpDecl {
  OpId id;
  Arity input;
  Arity output;
};

struct Reifier {
  std::string family;
  std::vector<OpDecl> ops;
  SubStatePtr initial;
  ReifyFn step;
};

struct RegistrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class EffectSystem {
 public:
  static EffectSystem combine(std::vector<Reifier> rs);

  const std::vector<OpDecl>& signature() const { return signature_; }
  CompositeState initial_state() const;
  const Reifier* find(const OpId& id) const;
  const OpDecl* decl(const OpId& id) const;

 private:
  std::vector<Reifier> reifiers_;
  std::vector<OpDecl> signature_;
  std::map<OpId, std::size_t> dispatch_;
};

// Ground-serializable rendering of an effect input; function parts render as null.
nlohmann::json render_payload(const Payload& p);

struct Event {
  enum class Kind { Tau, Effect, Spawn };
  std::size_t step = 0;
  std::size_t thread = 0;
  Kind kind = Kind::Tau;
  OpId op;
  nlohmann::json input;
  std::size_t count = 0;
  // Size of the acting family's stack state after the step, when it has one.
  std::optional<std::size_t> depth;

  nlohmann::json to_json() const;
};

struct ReifyStep {
  GITree tree;
  CompositeState state;
  std::vector<GITree> spawned;
  std::string diagnostic;
};

// reify(Vis(i, x, k), σ): (Tau(β), σ′, forced l⃗) or (Err RunTime, σ, []).
ReifyStep reify(const GITree& a, const CompositeState& s, const EffectSystem& sys);

struct Stepped {
  GITree next;
  CompositeState state;
  std::vector<GITree> spawned;
  std::string diagnostic;
};
struct ValueResult {
  GITree value;
};
struct StuckResult {
  std::string reason;
};
using StepResult = std::variant<Stepped, ValueResult, StuckResult>;

StepResult istep(const GITree& a, const CompositeState& s, const EffectSystem& sys);

struct TpStep {
  bool ok = false;
  std::vector<GITree> pool;
  CompositeState state;
  std::vector<Event> events;
  std::string diagnostic;
};

TpStep tp_step(const std::vector<GITree>& pool, const CompositeState& s, std::size_t choice,
               const EffectSystem& sys, std::size_t step_index = 0);

// Scheduling.
struct RoundRobin {};
struct RandomPolicy {
  std::uint64_t seed = 0;
};
struct Exhaustive {
  std::size_t max_threads = 3;
  std::size_t max_fuel = 64;
};
using SchedulerPolicy = std::variant<RoundRobin, RandomPolicy, Exhaustive>;

class Scheduler {
 public:
  virtual ~Scheduler() = default;
  // runnable is non-empty and sorted; returns one of its elements.
  virtual std::size_t choose(std::span<const std::size_t> runnable, std::size_t step) = 0;
};

class RoundRobinScheduler : public Scheduler {
 public:
  std::size_t choose(std::span<const std::size_t> runnable, std::size_t step) override;

 private:
  std::size_t cursor_ = 0;
};

class RandomScheduler : public Scheduler {
 public:
  explicit RandomScheduler(std::uint64_t seed);
  std::size_t choose(std::span<const std::size_t> runnable, std::size_t step) override;

 private:
  std::uint64_t state_;
};

// Replays a prefix of choices and extends it with first choices; advance()
// moves to the next unexplored choice sequence in depth-first order.
class ExhaustiveScheduler : public Scheduler {
 public:
  std::size_t choose(std::span<const std::size_t> runnable, std::size_t step) override;
  bool advance();

 private:
  struct Branch {
    std::size_t taken;
    std::size_t width;
  };
  std::vector<Branch> path_;
  std::size_t pos_ = 0;
};

std::unique_ptr<Scheduler> make_scheduler(const SchedulerPolicy& p);

struct Outcome {
  enum class Kind { FinalValue, Error, Timeout, Stuck };
  Kind kind = Kind::Stuck;
  std::optional<GITree> value;
  ErrorKind error;
  std::string diagnostic;
  CompositeState state;
  std::vector<GITree> pool;
  std::vector<Event> trace;
  std::size_t steps = 0;

  bool is_value() const { return kind == Kind::FinalValue; }
  // "VALUE 12", "ERROR Lin", "TIMEOUT", "STUCK".
  std::string summary() const;
  std::string trace_jsonl() const;
};

struct RunOptions {
  std::size_t fuel = 10000;
  SchedulerPolicy policy = RoundRobin{};
  std::optional<CompositeState> initial_state;
  std::size_t max_threads = 0;  // 0 = unbounded
};

Outcome run(const GITree& a, const EffectSystem& sys, const RunOptions& opts = {});
Outcome run_pool(std::vector<GITree> pool, const EffectSystem& sys, CompositeState state, std::size_t fuel,
                 Scheduler& sched, std::size_t max_threads = 0);

// Every choice sequence of the pool, depth first. Requires pool ≤ max_threads
// throughout and fuel ≤ max_fuel.
std::vector<Outcome> explore_all(std::vector<GITree> pool, const EffectSystem& sys, CompositeState state,
                                 std::size_t fuel, Exhaustive bounds = {});

}  // namespace gitree
