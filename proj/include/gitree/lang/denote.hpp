#pragma once

#include <functional>
#include <map>
#include <string>

#include "gitree/engine.hpp"
#include "gitree/hom.hpp"
#include "gitree/lang/ast.hpp"

namespace gitree::lang {

// Semantic environment ρ.
using Env = std::map<std::string, GITree>;

struct DenoteHooks {
  // Called with (variable, argument) whenever a λ-bound variable is bound at run time.
  std::function<void(const std::string&, const GITree&)> on_bind;
};

EffectSystem effects_for(Lang lang);

// ⟦e⟧ρ
GITree denote(const ExprPtr& e, Lang lang, const Env& env = {}, const DenoteHooks* hooks = nullptr);
// The tree a program runs as: POP′(⟦e⟧∅) for λ_delim, ⟦e⟧∅ otherwise.
GITree denote_program(const ExprPtr& e, Lang lang, const DenoteHooks* hooks = nullptr);

// ⟦K⟧ for λ_callcc and λ_delim contexts.
HomCtx denote_context(const Frames& k, Lang lang);

// ⟦K⟧ for λ_exc: the hom plus the handlers its catch frames install.
struct ExcContext {
  HomCtx hom;
  HandlerStack stack;
};
ExcContext denote_exc_context(const Frames& k);

// λ_delim continuation values and metacontinuations.
GITree denote_delim_cont(const Frames& k);
ContStack denote_mcont(const std::vector<Frames>& mk);

// λ_aff helpers.
GITree thunk(const GITree& a);
GITree force(const GITree& a);

// prog = λy. SHIFT(λk. ALLOC(1, λx. …)) from the FFI figure, with the
// stated POP′ wrappers. run_prog builds RESET(Next(POP′(APP(prog, Ret y)))).
GITree ffi_prog();
GITree ffi_prog_applied(Location y);

}  // namespace gitree::lang
