#include "gitree/lang/machines.hpp"

#include <functional>
#include <stdexcept>

#include "gitree/effects.hpp"
#include "gitree/lang/denote.hpp"

namespace gitree::lang {

namespace {

Frames push(Frames k, Frame f) {
  k.push_back(std::move(f));
  return k;
}

Frames pop(const Frames& k) { return Frames(k.begin(), k.end() - 1); }

Frame frame(FrameKind kind, ExprPtr a = nullptr, ExprPtr b = nullptr) {
  Frame f{kind};
  f.a = std::move(a);
  f.b = std::move(b);
  return f;
}

Frame op_frame(FrameKind kind, NatOp op, ExprPtr a) {
  Frame f = frame(kind, std::move(a));
  f.op = op;
  return f;
}

bool is_fun(const ExprPtr& e) { return e->kind == ExprKind::Lam || e->kind == ExprKind::Rec; }

// Body of (rec f x = b) v, or (fun x -> b) v.
ExprPtr beta(const ExprPtr& f, const ExprPtr& v) {
  if (f->kind == ExprKind::Lam) return subst(f->kids[0], f->name, v);
  ExprPtr body = f->kids[0];
  if (f->name != f->name2) body = subst(body, f->name, f);
  return subst(body, f->name2, v);
}

std::optional<ExprPtr> delta(NatOp op, const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != ExprKind::Num || b->kind != ExprKind::Num) return std::nullopt;
  return num(apply_natop(op, a->num, b->num));
}

bool prime(const Nat& n) {
  if (n < 2) return false;
  for (Nat d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

// λ_callcc: unique decomposition K[r] computed on every step.

std::vector<Transition<ExprPtr>> cc_transitions(const ExprPtr& program) {
  Frames k;
  ExprPtr e = program;
  while (true) {
    const auto& kids = e->kids;
    if (e->kind == ExprKind::App || e->kind == ExprKind::BinOp) {
      bool app = e->kind == ExprKind::App;
      if (!is_value(kids[1])) {
        k.push_back(app ? frame(FrameKind::AppArg, kids[0]) : op_frame(FrameKind::OpRight, e->op, kids[0]));
        e = kids[1];
        continue;
      }
      if (!is_value(kids[0])) {
        k.push_back(app ? frame(FrameKind::AppFun, kids[1]) : op_frame(FrameKind::OpLeft, e->op, kids[1]));
        e = kids[0];
        continue;
      }
    } else if (e->kind == ExprKind::If && !is_value(kids[0])) {
      k.push_back(frame(FrameKind::If, kids[1], kids[2]));
      e = kids[0];
      continue;
    } else if (e->kind == ExprKind::Throw) {
      if (!is_value(kids[0])) {
        k.push_back(frame(FrameKind::ThrowVal, kids[1]));
        e = kids[0];
        continue;
      }
      if (!is_value(kids[1])) {
        k.push_back(frame(FrameKind::ThrowTo, kids[0]));
        e = kids[1];
        continue;
      }
    }
    break;
  }
  const auto& kids = e->kids;
  switch (e->kind) {
    case ExprKind::App:
      if (is_fun(kids[0])) return {{"beta", plug(k, beta(kids[0], kids[1]))}};
      return {};
    case ExprKind::BinOp:
      if (auto n = delta(e->op, kids[0], kids[1])) return {{"natop", plug(k, *n)}};
      return {};
    case ExprKind::If:
      if (kids[0]->kind != ExprKind::Num) return {};
      return {{"if", plug(k, kids[0]->num != 0 ? kids[1] : kids[2])}};
    case ExprKind::CallCC:
      return {{"callcc", plug(k, subst(kids[0], e->name, cont_val(k)))}};
    case ExprKind::Throw:
      if (kids[1]->kind != ExprKind::ContVal) return {};
      return {{"throw", plug(*kids[1]->frames, kids[0])}};
    default:
      return {};
  }
}

CcStep machine_cc_step(const ExprPtr& e) {
  if (is_value(e)) return {CcStep::Kind::Terminal, e, "value"};
  auto ts = cc_transitions(e);
  if (ts.empty()) return {CcStep::Kind::Stuck, e, "stuck"};
  return {CcStep::Kind::Next, ts[0].next, ts[0].rule};
}

// λ_exc

namespace {

using EK = ExcConfig::Kind;

ExcConfig exc_eval(ExprPtr e, Frames k) { return {EK::Eval, std::move(e), std::move(k)}; }
ExcConfig exc_cont(Frames k, ExprPtr v) { return {EK::Cont, std::move(v), std::move(k)}; }

using ExcRule = std::function<std::optional<ExcConfig>(const ExcConfig&)>;

const std::vector<std::pair<std::string, ExcRule>>& exc_rules() {
  static const std::vector<std::pair<std::string, ExcRule>> rules = {
      {"term", [](const ExcConfig& c) -> std::optional<ExcConfig> {
         if (c.kind != EK::Term) return std::nullopt;
         return exc_eval(c.e, {});
       }},
      {"eval-value", [](const ExcConfig& c) -> std::optional<ExcConfig> {
         if (c.kind != EK::Eval || !is_value(c.e)) return std::nullopt;
         return exc_cont(c.k, c.e);
       }},
      {"eval-app", [](const ExcConfig& c) -> std::optional<ExcConfig> {
         if (c.kind != EK::Eval || c.e->kind != ExprKind::App) return std::nullopt;
         return exc_eval(c.e->kids[1], push(c.k, frame(FrameKind::AppArg, c.e->kids[0])));
       }},
      {"cont-app-arg", [](const ExcConfig& c) -> std::optional<ExcConfig> {
         if (c.kind != EK::Cont || c.k.empty() || c.k.back().kind != FrameKind::AppArg) return std::nullopt;
         return exc_eval(c.k.back().a, push(pop(c.k), frame(FrameKind::AppFun, c.e)));
       }},
      {"cont-beta", [](const ExcConfig& c) -> std::optional<ExcConfig> {
         if (c.kind != EK::Cont || c.k.empty() || c.k.back().kind != FrameKind::AppFun || !is_fun(c.e))
           return std::nullopt;
         return exc_eval(beta(c.e, c.k.back().a), pop(c.k));
       }},
      {"eval-try", [](const ExcConfig& c) -> std::optional<ExcConfig> {
         if (c.kind != EK::Eval || c.e->kind != ExprKind::Try) return std::nullopt;
         Frame f = frame(FrameKind::Catch, c.e->kids[1]);
         f.exc = c.e->exc;
         f.name = c.e->name;
         return exc_eval(c.e->kids[0], push(c.k, f));
       }},
      {"eval-raise", [](const ExcConfig& c) -> std::optional<ExcConfig> {
         if (c.kind != EK::Eval || c.e->kind != ExprKind::Raise) return std::nullopt;
         Frame f = frame(FrameKind::Raise);
         f.exc = c.e->exc;
         return exc_eval(c.e->kids[0], push(c.k, f));
       }},
      {"cont-catch", [](const ExcConfig& c) -> std::optional<ExcConfig> {
         if (c.kind != EK::Cont || c.k.empty() || c.k.back().kind != FrameKind::Catch) return std::nullopt;
         return exc_eval(c.e, pop(c.k));
       }},
      {"cont-raise", [](const ExcConfig& c) -> std::optional<ExcConfig> {
         if (c.kind != EK::Cont || c.k.empty() || c.k.back().kind != FrameKind::Raise) return std::nullopt;
         const std::string& name = c.k.back().exc;
         for (std::size_t i = c.k.size() - 1; i-- > 0;) {
           const Frame& f = c.k[i];
           if (f.kind == FrameKind::Catch && f.exc == name)
             return exc_eval(subst(f.a, f.name, c.e), Frames(c.k.begin(), c.k.begin() + static_cast<long>(i)));
         }
         return std::nullopt;
       }},
      {"cont-ret", [](const ExcConfig& c) -> std::optional<ExcConfig> {
         if (c.kind != EK::Cont || !c.k.empty()) return std::nullopt;
         return ExcConfig{EK::Ret, c.e, {}};
       }},
      // Reconstructed: natop and if in CEK style.
      {"eval-natop", [](const ExcConfig& c) -> std::optional<ExcConfig> {
         if (c.kind != EK::Eval || c.e->kind != ExprKind::BinOp) return std::nullopt;
         return exc_eval(c.e->kids[1], push(c.k, op_frame(FrameKind::OpRight, c.e->op, c.e->kids[0])));
       }},
      {"cont-natop-right", [](const ExcConfig& c) -> std::optional<ExcConfig> {
         if (c.kind != EK::Cont || c.k.empty() || c.k.back().kind != FrameKind::OpRight) return std::nullopt;
         return exc_eval(c.k.back().a, push(pop(c.k), op_frame(FrameKind::OpLeft, c.k.back().op, c.e)));
       }},
      {"cont-natop", [](const ExcConfig& c) -> std::optional<ExcConfig> {
         if (c.kind != EK::Cont || c.k.empty() || c.k.back().kind != FrameKind::OpLeft) return std::nullopt;
         auto n = delta(c.k.back().op, c.e, c.k.back().a);
         if (!n) return std::nullopt;
         return exc_cont(pop(c.k), *n);
       }},
      {"eval-if", [](const ExcConfig& c) -> std::optional<ExcConfig> {
         if (c.kind != EK::Eval || c.e->kind != ExprKind::If) return std::nullopt;
         return exc_eval(c.e->kids[0], push(c.k, frame(FrameKind::If, c.e->kids[1], c.e->kids[2])));
       }},
      {"cont-if", [](const ExcConfig& c) -> std::optional<ExcConfig> {
         if (c.kind != EK::Cont || c.k.empty() || c.k.back().kind != FrameKind::If || c.e->kind != ExprKind::Num)
           return std::nullopt;
         return exc_eval(c.e->num != 0 ? c.k.back().a : c.k.back().b, pop(c.k));
       }},
  };
  return rules;
}

}  // namespace

std::vector<Transition<ExcConfig>> exc_transitions(const ExcConfig& c) {
  std::vector<Transition<ExcConfig>> out;
  for (const auto& [name, rule] : exc_rules())
    if (auto next = rule(c)) out.push_back({name, std::move(*next)});
  return out;
}

MachineStep<ExcConfig> machine_exc_step(const ExcConfig& c) {
  if (c.kind == EK::Ret) return {MachineStep<ExcConfig>::Kind::Terminal, c, "ret"};
  auto ts = exc_transitions(c);
  if (ts.empty()) return {MachineStep<ExcConfig>::Kind::Stuck, c, "stuck"};
  if (ts.size() > 1) throw std::logic_error("overlapping exc rules: " + ts[0].rule + ", " + ts[1].rule);
  return {MachineStep<ExcConfig>::Kind::Next, std::move(ts[0].next), ts[0].rule};
}

// λ_delim

namespace {

using DK = DelimConfig::Kind;

DelimConfig d_eval(ExprPtr e, Frames k, std::vector<Frames> mk) { return {DK::Eval, std::move(e), std::move(k), std::move(mk)}; }
DelimConfig d_cont(Frames k, ExprPtr v, std::vector<Frames> mk) { return {DK::Cont, std::move(v), std::move(k), std::move(mk)}; }

bool top_is(const DelimConfig& c, FrameKind f) { return c.kind == DK::Cont && !c.k.empty() && c.k.back().kind == f; }

using DelimRule = std::function<std::optional<DelimConfig>(const DelimConfig&)>;

const std::vector<std::pair<std::string, DelimRule>>& delim_rules() {
  static const std::vector<std::pair<std::string, DelimRule>> rules = {
      {"term", [](const DelimConfig& c) -> std::optional<DelimConfig> {
         if (c.kind != DK::Term) return std::nullopt;
         return d_eval(c.e, {}, {});
       }},
      {"mcont-pop", [](const DelimConfig& c) -> std::optional<DelimConfig> {
         if (c.kind != DK::MCont || c.mk.empty()) return std::nullopt;
         return d_cont(c.mk.front(), c.e, std::vector<Frames>(c.mk.begin() + 1, c.mk.end()));
       }},
      {"mcont-ret", [](const DelimConfig& c) -> std::optional<DelimConfig> {
         if (c.kind != DK::MCont || !c.mk.empty()) return std::nullopt;
         return DelimConfig{DK::Ret, c.e, {}, {}};
       }},
      {"cont-empty", [](const DelimConfig& c) -> std::optional<DelimConfig> {
         if (c.kind != DK::Cont || !c.k.empty()) return std::nullopt;
         return DelimConfig{DK::MCont, c.e, {}, c.mk};
       }},
      {"cont-contapp", [](const DelimConfig& c) -> std::optional<DelimConfig> {
         if (!top_is(c, FrameKind::ContFun) || c.e->kind != ExprKind::ContVal) return std::nullopt;
         std::vector<Frames> mk = c.mk;
         mk.insert(mk.begin(), pop(c.k));
         return d_cont(*c.e->frames, c.k.back().a, std::move(mk));
       }},
      {"cont-contapp-arg", [](const DelimConfig& c) -> std::optional<DelimConfig> {
         if (!top_is(c, FrameKind::ContArg)) return std::nullopt;
         return d_eval(c.k.back().a, push(pop(c.k), frame(FrameKind::ContFun, c.e)), c.mk);
       }},
      {"eval-value", [](const DelimConfig& c) -> std::optional<DelimConfig> {
         if (c.kind != DK::Eval || !is_value(c.e)) return std::nullopt;
         return d_cont(c.k, c.e, c.mk);
       }},
      {"eval-contapp", [](const DelimConfig& c) -> std::optional<DelimConfig> {
         if (c.kind != DK::Eval || c.e->kind != ExprKind::ContApp) return std::nullopt;
         return d_eval(c.e->kids[1], push(c.k, frame(FrameKind::ContArg, c.e->kids[0])), c.mk);
       }},
      {"eval-reset", [](const DelimConfig& c) -> std::optional<DelimConfig> {
         if (c.kind != DK::Eval || c.e->kind != ExprKind::Reset) return std::nullopt;
         std::vector<Frames> mk = c.mk;
         mk.insert(mk.begin(), c.k);
         return d_eval(c.e->kids[0], {}, std::move(mk));
       }},
      {"eval-shift", [](const DelimConfig& c) -> std::optional<DelimConfig> {
         if (c.kind != DK::Eval || c.e->kind != ExprKind::Shift) return std::nullopt;
         return d_eval(subst(c.e->kids[0], c.e->name, cont_val(c.k)), {}, c.mk);
       }},
      {"eval-app", [](const DelimConfig& c) -> std::optional<DelimConfig> {
         if (c.kind != DK::Eval || c.e->kind != ExprKind::App) return std::nullopt;
         return d_eval(c.e->kids[1], push(c.k, frame(FrameKind::AppArg, c.e->kids[0])), c.mk);
       }},
      {"cont-app-arg", [](const DelimConfig& c) -> std::optional<DelimConfig> {
         if (!top_is(c, FrameKind::AppArg)) return std::nullopt;
         return d_eval(c.k.back().a, push(pop(c.k), frame(FrameKind::AppFun, c.e)), c.mk);
       }},
      {"cont-beta", [](const DelimConfig& c) -> std::optional<DelimConfig> {
         if (!top_is(c, FrameKind::AppFun) || !is_fun(c.e)) return std::nullopt;
         return d_eval(beta(c.e, c.k.back().a), pop(c.k), c.mk);
       }},
      {"cont-isprime", [](const DelimConfig& c) -> std::optional<DelimConfig> {
         if (!top_is(c, FrameKind::AppFun) || c.e->kind != ExprKind::IsPrime) return std::nullopt;
         const ExprPtr& arg = c.k.back().a;
         if (arg->kind != ExprKind::Num) return std::nullopt;
         return d_cont(pop(c.k), num(prime(arg->num) ? 1 : 0), c.mk);
       }},
      // Reconstructed: natop and if, mirroring the application rules.
      {"eval-natop", [](const DelimConfig& c) -> std::optional<DelimConfig> {
         if (c.kind != DK::Eval || c.e->kind != ExprKind::BinOp) return std::nullopt;
         return d_eval(c.e->kids[1], push(c.k, op_frame(FrameKind::OpRight, c.e->op, c.e->kids[0])), c.mk);
       }},
      {"cont-natop-right", [](const DelimConfig& c) -> std::optional<DelimConfig> {
         if (!top_is(c, FrameKind::OpRight)) return std::nullopt;
         return d_eval(c.k.back().a, push(pop(c.k), op_frame(FrameKind::OpLeft, c.k.back().op, c.e)), c.mk);
       }},
      {"cont-natop", [](const DelimConfig& c) -> std::optional<DelimConfig> {
         if (!top_is(c, FrameKind::OpLeft)) return std::nullopt;
         auto n = delta(c.k.back().op, c.e, c.k.back().a);
         if (!n) return std::nullopt;
         return d_cont(pop(c.k), *n, c.mk);
       }},
      {"eval-if", [](const DelimConfig& c) -> std::optional<DelimConfig> {
         if (c.kind != DK::Eval || c.e->kind != ExprKind::If) return std::nullopt;
         return d_eval(c.e->kids[0], push(c.k, frame(FrameKind::If, c.e->kids[1], c.e->kids[2])), c.mk);
       }},
      {"cont-if", [](const DelimConfig& c) -> std::optional<DelimConfig> {
         if (!top_is(c, FrameKind::If) || c.e->kind != ExprKind::Num) return std::nullopt;
         return d_eval(c.e->num != 0 ? c.k.back().a : c.k.back().b, pop(c.k), c.mk);
       }},
  };
  return rules;
}

}  // namespace

std::vector<Transition<DelimConfig>> delim_transitions(const DelimConfig& c) {
  std::vector<Transition<DelimConfig>> out;
  for (const auto& [name, rule] : delim_rules())
    if (auto next = rule(c)) out.push_back({name, std::move(*next)});
  return out;
}

MachineStep<DelimConfig> machine_delim_step(const DelimConfig& c) {
  if (c.kind == DK::Ret) return {MachineStep<DelimConfig>::Kind::Terminal, c, "ret"};
  auto ts = delim_transitions(c);
  if (ts.empty()) return {MachineStep<DelimConfig>::Kind::Stuck, c, "stuck"};
  if (ts.size() > 1) throw std::logic_error("overlapping delim rules: " + ts[0].rule + ", " + ts[1].rule);
  return {MachineStep<DelimConfig>::Kind::Next, std::move(ts[0].next), ts[0].rule};
}

// Printing and runs.

std::string print(const ExcConfig& c) {
  switch (c.kind) {
    case EK::Term:
      return "term<" + print(c.e) + ">";
    case EK::Eval:
      return "eval<" + print(c.e) + " ; " + print(c.k) + ">";
    case EK::Cont:
      return "cont<" + print(c.k) + " ; " + print(c.e) + ">";
    case EK::Ret:
      return "ret<" + print(c.e) + ">";
  }
  return "?";
}

namespace {

std::string print_mk(const std::vector<Frames>& mk) {
  std::string s = "[";
  for (std::size_t i = 0; i < mk.size(); ++i) s += (i ? " :: " : "") + print(mk[i]);
  return s + "]";
}

}  // namespace

std::string print(const DelimConfig& c) {
  switch (c.kind) {
    case DK::Term:
      return "term<" + print(c.e) + ">";
    case DK::Eval:
      return "eval<" + print(c.e) + " ; " + print(c.k) + " ; " + print_mk(c.mk) + ">";
    case DK::Cont:
      return "cont<" + print(c.k) + " ; " + print(c.e) + " ; " + print_mk(c.mk) + ">";
    case DK::MCont:
      return "mcont<" + print_mk(c.mk) + " ; " + print(c.e) + ">";
    case DK::Ret:
      return "ret<" + print(c.e) + ">";
  }
  return "?";
}

std::string MachineOutcome::summary() const {
  switch (kind) {
    case Kind::Terminal:
      return "VALUE " + print(value);
    case Kind::Timeout:
      return "TIMEOUT";
    case Kind::Stuck:
      return "STUCK";
  }
  return "?";
}

std::string MachineOutcome::trace_jsonl() const {
  std::string out;
  for (std::size_t i = 0; i < trace.size(); ++i)
    out += nlohmann::json{{"kind", "machine-step"}, {"step", i}, {"config", trace[i]}}.dump() + "\n";
  return out;
}

bool has_machine(Lang lang) { return lang == Lang::CallCC || lang == Lang::Exc || lang == Lang::Delim; }

namespace {

template <class Config, class Step>
MachineOutcome drive(Config c, std::size_t max_steps, bool record, Step step) {
  MachineOutcome out;
  while (true) {
    if (record) out.trace.push_back(print(c));
    auto s = step(c);
    using K = decltype(s.kind);
    if (s.kind == K::Terminal) {
      out.kind = MachineOutcome::Kind::Terminal;
      out.value = s.next.e;
      return out;
    }
    if (s.kind == K::Stuck) {
      out.kind = MachineOutcome::Kind::Stuck;
      out.reason = "no rule applies to " + print(c);
      return out;
    }
    if (out.steps >= max_steps) {
      out.kind = MachineOutcome::Kind::Timeout;
      return out;
    }
    ++out.steps;
    c = std::move(s.next);
  }
}

}  // namespace

MachineOutcome machine_run(Lang lang, const ExprPtr& program, std::size_t max_steps, bool record) {
  switch (lang) {
    case Lang::CallCC: {
      MachineOutcome out;
      ExprPtr e = program;
      while (true) {
        if (record) out.trace.push_back(print(e));
        CcStep s = machine_cc_step(e);
        if (s.kind == CcStep::Kind::Terminal) {
          out.kind = MachineOutcome::Kind::Terminal;
          out.value = e;
          return out;
        }
        if (s.kind == CcStep::Kind::Stuck) {
          out.kind = MachineOutcome::Kind::Stuck;
          out.reason = "no rule applies to " + print(e);
          return out;
        }
        if (out.steps >= max_steps) {
          out.kind = MachineOutcome::Kind::Timeout;
          return out;
        }
        ++out.steps;
        e = s.expr;
      }
    }
    case Lang::Exc:
      return drive(ExcConfig{EK::Term, program, {}}, max_steps, record, machine_exc_step);
    case Lang::Delim:
      return drive(DelimConfig{DK::Term, program, {}, {}}, max_steps, record, machine_delim_step);
    default:
      throw std::invalid_argument("no abstract machine for " + lang_name(lang));
  }
}

std::vector<ExcConfig> exc_configs(const ExprPtr& program, std::size_t max_steps) {
  std::vector<ExcConfig> out{{EK::Term, program, {}}};
  while (out.size() <= max_steps) {
    auto s = machine_exc_step(out.back());
    if (s.kind != MachineStep<ExcConfig>::Kind::Next) break;
    out.push_back(std::move(s.next));
  }
  return out;
}

std::vector<DelimConfig> delim_configs(const ExprPtr& program, std::size_t max_steps) {
  std::vector<DelimConfig> out{{DK::Term, program, {}, {}}};
  while (out.size() <= max_steps) {
    auto s = machine_delim_step(out.back());
    if (s.kind != MachineStep<DelimConfig>::Kind::Next) break;
    out.push_back(std::move(s.next));
  }
  return out;
}

std::pair<GITree, HandlerStack> denote_config(const ExcConfig& c) {
  switch (c.kind) {
    case EK::Term:
    case EK::Ret:
      return {denote(c.e, Lang::Exc), {}};
    case EK::Eval:
    case EK::Cont: {
      ExcContext k = denote_exc_context(c.k);
      return {k.hom(denote(c.e, Lang::Exc)), k.stack};
    }
  }
  throw std::logic_error("bad config");
}

std::pair<GITree, ContStack> denote_config(const DelimConfig& c) {
  switch (c.kind) {
    case DK::Term:
      return {delim::pop_prime(denote(c.e, Lang::Delim)), {}};
    case DK::Eval:
    case DK::Cont:
      return {delim::pop_prime(denote(plug(c.k, c.e), Lang::Delim)), denote_mcont(c.mk)};
    case DK::MCont:
      return {delim::pop_prime(denote(c.e, Lang::Delim)), denote_mcont(c.mk)};
    case DK::Ret:
      return {denote(c.e, Lang::Delim), {}};
  }
  throw std::logic_error("bad config");
}

CompositeState config_state(const EffectSystem& sys, const HandlerStack& s) {
  return sys.initial_state().with(exc::kFamily, make_substate(s));
}

CompositeState config_state(const EffectSystem& sys, const ContStack& s) {
  return sys.initial_state().with(delim::kFamily, make_substate(s));
}

}  // namespace gitree::lang
