#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gitree/engine.hpp"
#include "gitree/lang/ast.hpp"

namespace gitree::lang {

struct ExcConfig {
  enum class Kind { Term, Eval, Cont, Ret };
  Kind kind = Kind::Term;
  ExprPtr e;  // the expression or value
  Frames k;
};

struct DelimConfig {
  enum class Kind { Term, Eval, Cont, MCont, Ret };
  Kind kind = Kind::Term;
  ExprPtr e;
  Frames k;
  // front() is the most recently pushed context.
  std::vector<Frames> mk;
};

std::string print(const ExcConfig& c);
std::string print(const DelimConfig& c);

template <class Config>
struct Transition {
  std::string rule;
  Config next;
};

// Every rule whose left-hand side matches; the machines are deterministic
// when this has at most one element.
std::vector<Transition<ExprPtr>> cc_transitions(const ExprPtr& e);
std::vector<Transition<ExcConfig>> exc_transitions(const ExcConfig& c);
std::vector<Transition<DelimConfig>> delim_transitions(const DelimConfig& c);

struct CcStep {
  enum class Kind { Next, Terminal, Stuck };
  Kind kind;
  ExprPtr expr;
  std::string rule;
};
CcStep machine_cc_step(const ExprPtr& e);

template <class Config>
struct MachineStep {
  enum class Kind { Next, Terminal, Stuck };
  Kind kind;
  Config next;
  std::string rule;
};
MachineStep<ExcConfig> machine_exc_step(const ExcConfig& c);
MachineStep<DelimConfig> machine_delim_step(const DelimConfig& c);

struct MachineOutcome {
  enum class Kind { Terminal, Timeout, Stuck };
  Kind kind = Kind::Stuck;
  ExprPtr value;
  std::string reason;
  std::size_t steps = 0;
  // Printed configurations, one per step, when recorded.
  std::vector<std::string> trace;

  std::string summary() const;
  std::string trace_jsonl() const;
};

bool has_machine(Lang lang);
MachineOutcome machine_run(Lang lang, const ExprPtr& program, std::size_t max_steps, bool record = false);

// Configuration sequences of a run, for the soundness sampler.
std::vector<ExcConfig> exc_configs(const ExprPtr& program, std::size_t max_steps);
std::vector<DelimConfig> delim_configs(const ExprPtr& program, std::size_t max_steps);

// Configuration denotations: the tree to run and the stack to start from.
std::pair<GITree, HandlerStack> denote_config(const ExcConfig& c);
std::pair<GITree, ContStack> denote_config(const DelimConfig& c);
// Initial effect state holding the configuration's stack.
CompositeState config_state(const EffectSystem& sys, const HandlerStack& s);
CompositeState config_state(const EffectSystem& sys, const ContStack& s);

}  // namespace gitree::lang
