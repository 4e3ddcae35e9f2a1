#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gitree/engine.hpp"
#include "gitree/lang/ast.hpp"
#include "gitree/lang/generate.hpp"
#include "gitree/lang/machines.hpp"

namespace gitree::harness {

using lang::ExprPtr;
using lang::Lang;

enum class Mode { Denote, Machine, Diff };

struct RunConfig {
  std::optional<Lang> lang;  // defaults to the file extension
  Mode mode = Mode::Denote;
  std::size_t fuel = 10000;
  SchedulerPolicy sched = RoundRobin{};
  std::optional<std::string> trace_path;
  bool typecheck = true;
  std::optional<std::string> inspect_heap;
};

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitType = 3;
inline constexpr int kExitRuntime = 4;
inline constexpr int kExitTimeout = 5;

struct CmdResult {
  int exit_code = kExitOk;
  std::string output;  // what the CLI prints to stdout
};

SchedulerPolicy parse_sched(const std::string& s);

CmdResult cmd_run_source(const std::string& text, Lang lang, const RunConfig& cfg);
CmdResult cmd_run(const std::string& path, const RunConfig& cfg);
CmdResult cmd_typecheck(const std::string& path, std::optional<Lang> lang);

// Differential comparison of a program's denotation against its machine.
struct DiffReport {
  enum class Verdict { Agree, Disagree, BothTimeout, BothStuck };
  Verdict verdict = Verdict::Disagree;
  std::string denote_summary, machine_summary;
  std::string value;  // for Agree
  std::string line() const;
};

// sys defaults to effects_for(lang); the machine gets 10× fuel.
DiffReport diff_program(const ExprPtr& e, Lang lang, std::size_t fuel, const EffectSystem* sys = nullptr);
CmdResult cmd_diff_file(const std::string& path, const RunConfig& cfg);

struct FuzzOptions {
  Lang lang = Lang::CallCC;
  std::size_t count = 100;
  std::uint64_t seed = 0;
  std::size_t size = 20;
  std::size_t fuel = 10000;
};
// Oracle languages: diff every generated program. λ_aff: typecheck, then run
// under round-robin and five random seeds expecting no Error/Stuck. λ_embed:
// typecheck, run, and require an empty ContStack at termination.
CmdResult cmd_fuzz(const FuzzOptions& opts);

// A copy of the language's effect system whose control reifier hands the
// program an identity continuation. Only for λ_callcc and λ_delim.
EffectSystem corrupted_effects(Lang lang);

// Depth of the delimited-continuation stack in a final state.
std::optional<std::size_t> cont_stack_depth(const CompositeState& s);

// Executable soundness for one machine step c0 ↦ c1: running ⟦c0⟧ and ⟦c1⟧
// gives the same outcome, c1's effect events are a suffix of c0's, and the
// final stack depths agree.
struct SoundnessResult {
  bool ok = false;
  std::string detail;
};
SoundnessResult check_step_soundness(const lang::ExcConfig& c0, const lang::ExcConfig& c1, std::size_t fuel);
SoundnessResult check_step_soundness(const lang::DelimConfig& c0, const lang::DelimConfig& c1, std::size_t fuel);

std::string read_file(const std::string& path);

}  // namespace gitree::harness
