#pragma once

#include <string>

#include "gitree/engine.hpp"

namespace gitree {

// A Vis continuation for ops whose output arity is empty.
Cont elim_empty();
// View a continuation on ▷IT outputs as a ▷IT → ▷IT function.
KFun cont_as_kfun(Cont k);

namespace store {

inline const std::string kFamily = "store";
OpId op_alloc();
OpId op_read();
OpId op_write();
OpId op_dealloc();
OpId op_atomic();

GITree alloc(GITree a, std::function<GITree(Location)> k);
GITree read(Location l);
GITree write(Location l, GITree a);
GITree dealloc(Location l);
GITree atomic(Location l, LaterAtomicFn f);
GITree xchg(Location l, GITree w);
// Booleans as Ret 1 / Ret 0.
GITree cas(Location l, GroundValue expected, GITree desired);
GITree faa(Location l, Nat n);

Reifier reifier();
const Heap& heap_of(const CompositeState& s);
// Heap with the given cells and next_fresh past them.
Heap heap_with(std::vector<std::pair<Location, GITree>> cells);

}  // namespace store

namespace callcc {

inline const std::string kFamily = "callcc";
OpId op_callcc();
OpId op_throw();

GITree callcc_gt(Callback f);
GITree throw_gt(LaterTree e, LaterFn f);
Reifier reifier();

}  // namespace callcc

namespace exc {

inline const std::string kFamily = "exc";
OpId op_register();
OpId op_throw();
OpId op_pop();

GITree reg(ExcName e, KFun h, LaterTree x);
GITree pop(ExcName e);
// THROW(ε, x): evaluates x first.
GITree raise(ExcName e, const GITree& x);
// λx. get_val(x, λy. get_val(POP ε, λ_. y))
GITree pop_wrap(ExcName e, const GITree& x);
GITree catch_(ExcName e, KFun h, const GITree& x);
Reifier reifier();

}  // namespace exc

namespace delim {

inline const std::string kFamily = "delim";
OpId op_reset();
OpId op_shift();
OpId op_pop();
OpId op_appcont();

GITree reset(LaterTree e);
GITree shift(Callback f);
GITree appcont(LaterTree e, LaterFn k);
GITree pop(LaterTree e);
// POP′(β) = get_val(β, POP)
GITree pop_prime(const GITree& b);
Reifier reifier();

}  // namespace delim

namespace fork {

inline const std::string kFamily = "fork";
OpId op_fork();

GITree fork(GITree e);
Reifier reifier();

}  // namespace fork

}  // namespace gitree
