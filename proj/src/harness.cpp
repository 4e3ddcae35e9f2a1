#include "gitree/harness.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "gitree/effects.hpp"
#include "gitree/lang/denote.hpp"
#include "gitree/lang/parser.hpp"
#include "gitree/lang/types.hpp"

namespace gitree::harness {

using namespace gitree::lang;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int exit_for(const Outcome& o) {
  switch (o.kind) {
    case Outcome::Kind::FinalValue:
      return kExitOk;
    case Outcome::Kind::Error:
      return kExitRuntime;
    default:
      return kExitTimeout;
  }
}

int exit_for(const MachineOutcome& o) {
  return o.kind == MachineOutcome::Kind::Terminal ? kExitOk : kExitTimeout;
}

Lang lang_for(const std::string& path, const std::optional<Lang>& override) {
  if (override) return *override;
  if (auto l = lang_from_path(path)) return *l;
  throw std::invalid_argument("cannot infer the language of " + path + "; pass --lang");
}

std::string render_tree(const GITree& t) {
  if (t.is_ret()) return t.ground().render();
  if (t.is_fun()) return "<fun>";
  return "<" + t.describe() + ">";
}

}  // namespace

SchedulerPolicy parse_sched(const std::string& s) {
  if (s == "rr") return RoundRobin{};
  if (s == "exhaustive") return Exhaustive{};
  if (s.rfind("rand:", 0) == 0) return RandomPolicy{std::stoull(s.substr(5))};
  throw std::invalid_argument("unknown scheduler " + s + " (expected rr, rand:SEED or exhaustive)");
}

std::optional<std::size_t> cont_stack_depth(const CompositeState& s) {
  if (!s.has(delim::kFamily)) return std::nullopt;
  return s.get<ContStack>(delim::kFamily).size();
}

std::string DiffReport::line() const {
  switch (verdict) {
    case Verdict::Agree:
      return "AGREE " + value;
    case Verdict::BothTimeout:
      return "BOTH-TIMEOUT";
    case Verdict::BothStuck:
      return "BOTH-STUCK";
    case Verdict::Disagree:
      return "DISAGREE denote=" + denote_summary + " machine=" + machine_summary;
  }
  return "?";
}

namespace {

struct DiffRun {
  DiffReport report;
  Outcome denote;
};

DiffRun diff_run(const ExprPtr& e, Lang lang, std::size_t fuel, const EffectSystem* sys) {
  EffectSystem own = sys ? *sys : effects_for(lang);
  RunOptions opts;
  opts.fuel = fuel;
  Outcome d = run(denote_program(e, lang), own, opts);
  MachineOutcome m = machine_run(lang, e, fuel * 10);
  DiffReport r;
  r.denote_summary = d.summary();
  r.machine_summary = m.summary();
  bool d_stuck = d.kind == Outcome::Kind::Error || d.kind == Outcome::Kind::Stuck;
  if (d.kind == Outcome::Kind::FinalValue && m.kind == MachineOutcome::Kind::Terminal) {
    bool same = d.value->is_ret() && d.value->ground().is_nat() && m.value->kind == ExprKind::Num &&
                d.value->ground().nat() == m.value->num;
    if (same) {
      r.verdict = DiffReport::Verdict::Agree;
      r.value = print(m.value);
    }
  } else if (d.kind == Outcome::Kind::Timeout && m.kind == MachineOutcome::Kind::Timeout) {
    r.verdict = DiffReport::Verdict::BothTimeout;
  } else if (d_stuck && m.kind == MachineOutcome::Kind::Stuck) {
    r.verdict = DiffReport::Verdict::BothStuck;
  }
  return {r, d};
}

}  // namespace

DiffReport diff_program(const ExprPtr& e, Lang lang, std::size_t fuel, const EffectSystem* sys) {
  return diff_run(e, lang, fuel, sys).report;
}

CmdResult cmd_run_source(const std::string& text, Lang lang, const RunConfig& cfg) {
  ExprPtr e;
  try {
    e = parse(text, lang);
  } catch (const ParseError& err) {
    return {kExitParse, std::string("PARSE ERROR ") + err.what() + "\n"};
  }
  if (cfg.typecheck) {
    try {
      typecheck(e, lang);
    } catch (const TypeError& err) {
      return {kExitType, std::string("TYPE ERROR ") + err.what() + "\n"};
    }
  }
  if (cfg.mode != Mode::Denote && !has_machine(lang))
    return {kExitFailure, "no abstract machine for " + lang_name(lang) + "\n"};
  if (cfg.mode == Mode::Machine) {
    MachineOutcome m = machine_run(lang, e, cfg.fuel, cfg.trace_path.has_value());
    if (cfg.trace_path) write_file(*cfg.trace_path, m.trace_jsonl());
    return {exit_for(m), m.summary() + "\n"};
  }
  if (cfg.mode == Mode::Diff) {
    DiffReport r = diff_program(e, lang, cfg.fuel);
    return {r.verdict == DiffReport::Verdict::Disagree ? kExitFailure : kExitOk, r.line() + "\n"};
  }

  std::optional<Location> watched;
  bool watched_non_loc = false;
  DenoteHooks hooks;
  if (cfg.inspect_heap) {
    hooks.on_bind = [&](const std::string& x, const GITree& a) {
      if (x != *cfg.inspect_heap || watched) return;
      if (a.is_ret() && a.ground().is_loc())
        watched = a.ground().loc();
      else
        watched_non_loc = true;
    };
  }
  EffectSystem sys = effects_for(lang);
  GITree tree = denote_program(e, lang, &hooks);

  if (auto* ex = std::get_if<Exhaustive>(&cfg.sched)) {
    std::size_t fuel = std::min(cfg.fuel, ex->max_fuel);
    std::vector<Outcome> outs = explore_all({tree}, sys, sys.initial_state(), fuel, *ex);
    std::map<std::string, std::size_t> counts;
    bool all_values = true;
    for (const Outcome& o : outs) {
      ++counts[o.summary()];
      all_values = all_values && o.is_value();
    }
    std::string text_out = "INTERLEAVINGS " + std::to_string(outs.size()) + "\n";
    for (const auto& [s, n] : counts) text_out += std::to_string(n) + " x " + s + "\n";
    return {all_values ? kExitOk : kExitRuntime, text_out};
  }

  RunOptions opts;
  opts.fuel = cfg.fuel;
  opts.policy = cfg.sched;
  Outcome o = run(tree, sys, opts);
  if (cfg.trace_path) write_file(*cfg.trace_path, o.trace_jsonl());
  std::string out = o.summary() + "\n";
  if (cfg.inspect_heap) {
    std::string shown = "<unbound>";
    if (watched) {
      shown = "<freed>";
      if (o.state.has(store::kFamily)) {
        const Heap& heap = store::heap_of(o.state);
        if (auto it = heap.cells.find(*watched); it != heap.cells.end()) shown = render_tree(it->second.force());
      }
    } else if (watched_non_loc) {
      shown = "<not a location>";
    }
    out += *cfg.inspect_heap + " = " + shown + "\n";
  }
  return {exit_for(o), out};
}

CmdResult cmd_run(const std::string& path, const RunConfig& cfg) {
  Lang lang = lang_for(path, cfg.lang);
  return cmd_run_source(read_file(path), lang, cfg);
}

CmdResult cmd_typecheck(const std::string& path, std::optional<Lang> l) {
  Lang lang = lang_for(path, l);
  try {
    ExprPtr e = parse(read_file(path), lang);
    return {kExitOk, typecheck(e, lang).show() + "\n"};
  } catch (const ParseError& err) {
    return {kExitParse, std::string("PARSE ERROR ") + err.what() + "\n"};
  } catch (const TypeError& err) {
    return {kExitType, std::string("TYPE ERROR ") + err.what() + "\n"};
  }
}

CmdResult cmd_diff_file(const std::string& path, const RunConfig& cfg) {
  RunConfig c = cfg;
  c.mode = Mode::Diff;
  return cmd_run(path, c);
}

CmdResult cmd_fuzz(const FuzzOptions& opts) {
  std::map<std::string, std::size_t> tally;
  std::size_t failures = 0;
  std::string out;
  EffectSystem sys = effects_for(opts.lang);
  for (std::size_t i = 0; i < opts.count; ++i) {
    GenSpec spec{opts.lang, opts.size, "nat", opts.seed + i};
    ExprPtr e = gen_program(spec);
    std::string text = print(e);
    std::string verdict;
    std::string why;
    ExprPtr reparsed;
    try {
      reparsed = parse(text, opts.lang);
    } catch (const ParseError& err) {
      verdict = std::string("FAIL parse: ") + err.what();
    }
    if (verdict.empty() && !equal(reparsed, e)) verdict = "FAIL round-trip";
    if (verdict.empty() && !is_nat_program(e, opts.lang, &why)) verdict = "FAIL typecheck: " + why;
    if (verdict.empty()) {
      if (has_machine(opts.lang)) {
        DiffRun dr = diff_run(e, opts.lang, opts.fuel, nullptr);
        verdict = dr.report.line();
        ++tally[dr.report.verdict == DiffReport::Verdict::Agree ? "agree"
                : dr.report.verdict == DiffReport::Verdict::BothTimeout ? "both-timeout"
                : dr.report.verdict == DiffReport::Verdict::BothStuck   ? "both-stuck"
                                                                        : "disagree"];
        if (dr.report.verdict == DiffReport::Verdict::Disagree) ++failures;
        auto depth = cont_stack_depth(dr.denote.state);
        if (dr.denote.is_value() && depth && *depth != 0) {
          verdict += " FAIL bracket depth " + std::to_string(*depth);
          ++failures;
        }
      } else {
        std::vector<SchedulerPolicy> policies = {RoundRobin{}};
        if (opts.lang == Lang::Aff)
          for (std::uint64_t s = 1; s <= 5; ++s) policies.push_back(RandomPolicy{opts.seed * 31 + i * 7 + s});
        std::string first;
        for (const auto& p : policies) {
          RunOptions ro;
          ro.fuel = opts.fuel;
          ro.policy = p;
          Outcome o = run(denote_program(e, opts.lang), sys, ro);
          if (first.empty()) first = o.summary();
          if (o.kind == Outcome::Kind::Error || o.kind == Outcome::Kind::Stuck) {
            verdict = "FAIL " + o.summary();
            break;
          }
          auto depth = cont_stack_depth(o.state);
          if (o.is_value() && depth && *depth != 0) {
            verdict = "FAIL bracket depth " + std::to_string(*depth);
            break;
          }
        }
        if (verdict.empty()) verdict = "OK " + first;
        ++tally[verdict.rfind("FAIL", 0) == 0 ? "fail" : "ok"];
        if (verdict.rfind("FAIL", 0) == 0) ++failures;
      }
    } else {
      ++failures;
      ++tally["fail"];
    }
    out += "#" + std::to_string(i) + " " + verdict + " | " + text + "\n";
  }
  out += "lang=" + lang_name(opts.lang) + " count=" + std::to_string(opts.count);
  for (const auto& [k, n] : tally) out += " " + k + "=" + std::to_string(n);
  out += "\n";
  return {failures ? kExitFailure : kExitOk, out};
}

EffectSystem corrupted_effects(Lang lang) {
  auto wrap = [](Reifier r, std::string op_name) {
    ReifyFn inner = r.step;
    r.step = [inner, op_name](const OpId& op, const Payload& in, const SubStatePtr& s, const Cont& k) -> ReifyResult {
      if (op.name != op_name) return inner(op, in, s, k);
      KFun kk = cont_as_kfun(k);
      LaterTree body = in.as_callback()(identity_k());
      return ReifySuccess{op_name == "callcc" ? kk(body) : body, s, {}};
    };
    return r;
  };
  if (lang == Lang::CallCC) return EffectSystem::combine({wrap(callcc::reifier(), "callcc")});
  if (lang == Lang::Delim) return EffectSystem::combine({wrap(delim::reifier(), "shift")});
  throw std::invalid_argument("no corrupted fixture for " + lang_name(lang));
}

namespace {

std::vector<std::string> effect_keys(const Outcome& o) {
  std::vector<std::string> out;
  for (const Event& e : o.trace) {
    if (e.kind != Event::Kind::Effect) continue;
    std::string key = e.op.str() + " " + e.input.dump();
    if (e.depth) key += " @" + std::to_string(*e.depth);
    out.push_back(std::move(key));
  }
  return out;
}

std::size_t stack_depth(const CompositeState& s) {
  if (s.has(delim::kFamily)) return s.get<ContStack>(delim::kFamily).size();
  if (s.has(exc::kFamily)) return s.get<HandlerStack>(exc::kFamily).size();
  return 0;
}

template <class Config>
SoundnessResult check_pair(const Config& c0, const Config& c1, Lang lang, std::size_t fuel) {
  EffectSystem sys = effects_for(lang);
  auto [t0, s0] = denote_config(c0);
  auto [t1, s1] = denote_config(c1);
  RunOptions o0, o1;
  o0.fuel = o1.fuel = fuel;
  o0.initial_state = config_state(sys, s0);
  o1.initial_state = config_state(sys, s1);
  Outcome r0 = run(t0, sys, o0);
  Outcome r1 = run(t1, sys, o1);
  std::string where = print(c0) + " -> " + print(c1);
  if (r0.summary() != r1.summary())
    return {false, "outcome " + r0.summary() + " vs " + r1.summary() + " at " + where};
  if (r0.kind == Outcome::Kind::Timeout) return {true, "both timed out"};
  auto e0 = effect_keys(r0), e1 = effect_keys(r1);
  if (e1.size() > e0.size() || !std::equal(e1.begin(), e1.end(), e0.end() - static_cast<long>(e1.size())))
    return {false, "effect suffix mismatch (" + std::to_string(e0.size()) + " vs " + std::to_string(e1.size()) +
                       " events) at " + where};
  if (stack_depth(r0.state) != stack_depth(r1.state)) return {false, "final stack depth differs at " + where};
  return {true, r0.summary()};
}

}  // namespace

SoundnessResult check_step_soundness(const ExcConfig& c0, const ExcConfig& c1, std::size_t fuel) {
  return check_pair(c0, c1, Lang::Exc, fuel);
}

SoundnessResult check_step_soundness(const DelimConfig& c0, const DelimConfig& c1, std::size_t fuel) {
  return check_pair(c0, c1, Lang::Delim, fuel);
}

}  // namespace gitree::harness
