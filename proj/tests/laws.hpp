#pragma once

// Equational laws shared by core_test and the acceptance binary.

#include <string>
#include <vector>

#include "gitree/bisim.hpp"
#include "gitree/effects.hpp"
#include "gitree/hom.hpp"

namespace gitree::laws {

struct Law {
  std::string name;
  bool ok;
};

inline GITree n(long v) { return ret_nat(v); }

inline bool same(const GITree& a, const GITree& b, std::size_t depth = 4) { return bisim_probe(a, b, depth); }

inline bool is_nat(const GITree& t, long v) { return t.is_ret() && t.ground().is_nat() && t.ground().nat() == v; }

// A Vis node that any probe can resume: read with the identity continuation.
inline GITree sample_vis() { return store::read(Location{0}); }

inline GITree resume(const GITree& vis, const GITree& with) { return vis.cont()(Payload::tree(next(with))).force(); }

inline GITree sample_fun() {
  return fun_now([](const GITree& x) { return natop(NatOp::Add, x, n(1)); });
}

inline GITree run_value(const GITree& t, const EffectSystem& sys, const CompositeState& s) {
  RunOptions o;
  o.fuel = 1000;
  o.initial_state = s;
  Outcome r = run(t, sys, o);
  return r.value ? *r.value : err(ErrorKind::tagged("no value"));
}

inline std::vector<Law> get_val_laws() {
  ValueFn f = [](const GITree& v) { return natop(NatOp::Mul, v, n(2)); };
  std::vector<Law> out;
  out.push_back({"get_val Ret", same(get_val(n(3), f), f(n(3)))});
  GITree g = sample_fun();
  out.push_back({"get_val Fun", same(get_val(g, [](const GITree& v) { return app(v, n(4)); }), app(g, n(4)))});
  out.push_back({"get_val Err", get_val(err(ErrorKind::runtime()), f).is_err()});
  LaterTree t = next(n(5));
  out.push_back({"get_val Tau", same(get_val(tau(t), f), tau(t.map([f](const GITree& a) { return get_val(a, f); })))});
  out.push_back({"get_val Tick", same(get_val(tick(n(5)), f), tick(get_val(n(5), f)))});
  GITree v = get_val(sample_vis(), f);
  bool vis_ok = v.is_vis() && v.op() == store::op_read();
  for (long p : {0L, 7L}) vis_ok = vis_ok && same(resume(v, n(p)), get_val(n(p), f));
  out.push_back({"get_val Vis", vis_ok});
  return out;
}

inline std::vector<Law> app_laws() {
  std::vector<Law> out;
  GITree g = sample_fun();
  out.push_back({"APP arg Tick", same(app(g, tick(n(1))), tick(app(g, n(1))))});
  GITree av = app(g, sample_vis());
  bool ok = av.is_vis();
  for (long p : {0L, 3L}) ok = ok && same(resume(av, n(p)), app(g, n(p)));
  out.push_back({"APP arg Vis", ok});
  out.push_back({"APP fun Tick", same(app(tick(g), n(2)), tick(app(g, n(2))))});
  GITree fv = app(get_val(sample_vis(), [g](const GITree&) { return g; }), n(2));
  ok = fv.is_vis() && same(resume(fv, n(0)), app(g, n(2)));
  out.push_back({"APP fun Vis", ok});
  GITree beta = app(g, n(4));
  out.push_back({"APP Fun(Next g) v", beta.is_tau() && same(beta.rest().force(), natop(NatOp::Add, n(4), n(1)))});
  bool other = app(n(0), n(1)).is_err() && app(err(ErrorKind::runtime()), n(1)).is_err() &&
               app(g, err(ErrorKind::runtime())).is_err();
  out.push_back({"APP other cases", other});
  return out;
}

inline std::vector<Law> hom_laws() {
  std::vector<Law> out;
  for (const HomCtx& k : sample_homs()) {
    std::string d = k.describe();
    out.push_back({"hom Err " + d, k(err(ErrorKind::lin())).is_err() && k(err(ErrorKind::lin())).error() == ErrorKind::lin()});
    out.push_back({"hom Tick " + d, same(k(tick(n(2))), tick(k(n(2))))});
    GITree v = k(sample_vis());
    bool ok = v.is_vis() && v.op() == store::op_read();
    for (long p : {0L, 1L}) ok = ok && same(resume(v, n(p)), k(n(p)), 3);
    out.push_back({"hom Vis " + d, ok});
  }
  return out;
}

inline std::vector<Law> reify_laws() {
  std::vector<Law> out;
  EffectSystem sys = EffectSystem::combine(
      {store::reifier(), callcc::reifier(), exc::reifier(), delim::reifier(), fork::reifier()});
  CompositeState s0 = sys.initial_state();
  auto with_heap = [&](std::vector<std::pair<Location, GITree>> cells) {
    return s0.with(store::kFamily, make_substate(store::heap_with(std::move(cells))));
  };
  auto body = [](const ReifyStep& r) { return r.tree.is_tau() ? r.tree.rest().force() : r.tree; };
  Location l0{0};
  auto heap = [](const CompositeState& s) { return store::heap_of(s); };
  auto cell = [&](const CompositeState& s, Location l) { return heap(s).cells.at(l).force(); };

  CompositeState h1 = with_heap({{l0, n(1)}});
  ReifyStep r = reify(store::read(l0), h1, sys);
  out.push_back({"reify read present", r.tree.is_tau() && is_nat(body(r), 1) && heap(r.state).cells.size() == 1});
  r = reify(store::read(Location{9}), h1, sys);
  out.push_back({"reify read absent", r.tree.is_err()});
  r = reify(store::write(l0, n(7)), h1, sys);
  out.push_back({"reify write present", body(r).is_ret() && body(r).ground().is_unit() && is_nat(cell(r.state, l0), 7)});
  r = reify(store::write(Location{3}, n(7)), h1, sys);
  out.push_back({"reify write absent", r.tree.is_err()});
  r = reify(store::alloc(n(4), [](Location l) { return ret_loc(l); }), s0, sys);
  out.push_back({"reify alloc fresh", body(r).is_ret() && body(r).ground().is_loc() && body(r).ground().loc() == l0 &&
                                          is_nat(cell(r.state, l0), 4) && heap(r.state).next_fresh.index == 1});
  r = reify(store::dealloc(l0), h1, sys);
  out.push_back({"reify dealloc", heap(r.state).cells.empty() && body(r).ground().is_unit()});
  r = reify(store::dealloc(l0), s0, sys);
  out.push_back({"reify dealloc absent", r.tree.is_err()});

  CompositeState h3 = with_heap({{l0, n(3)}});
  r = reify(store::xchg(l0, n(7)), h3, sys);
  out.push_back({"reify xchg", is_nat(body(r), 3) && is_nat(cell(r.state, l0), 7)});
  CompositeState h5 = with_heap({{l0, n(5)}});
  r = reify(store::faa(l0, 2), h5, sys);
  out.push_back({"reify faa", is_nat(body(r), 5) && is_nat(cell(r.state, l0), 7)});
  CompositeState h4 = with_heap({{l0, n(4)}});
  r = reify(store::cas(l0, Nat(3), n(9)), h4, sys);
  out.push_back({"reify cas fail", is_nat(body(r), 0) && is_nat(cell(r.state, l0), 4)});
  r = reify(store::cas(l0, Nat(4), n(9)), h4, sys);
  out.push_back({"reify cas success", is_nat(body(r), 1) && is_nat(cell(r.state, l0), 9)});

  r = reify(fork::fork(n(1)), s0, sys);
  out.push_back({"reify fork", r.spawned.size() == 1 && is_nat(r.spawned[0], 1) && body(r).ground().is_unit()});

  // κ = 1 + [] around each control operator.
  HomCtx plus1 = HomCtx::natop_right(NatOp::Add, n(1));
  GITree cc = plus1(callcc::callcc_gt([](const KFun&) { return next(n(41)); }));
  r = reify(cc, s0, sys);
  out.push_back({"reify callcc resumes", is_nat(run_value(body(r), sys, r.state), 42)});
  GITree thr = plus1(callcc::throw_gt(next(n(41)), to_later_fn(identity_k())));
  r = reify(thr, s0, sys);
  out.push_back({"reify throw discards", is_nat(run_value(body(r), sys, r.state), 41)});

  ExcName e{"E"};
  KFun h = lift([](const GITree& x) { return natop(NatOp::Add, x, n(1)); });
  r = reify(exc::reg(e, h, next(n(5))), s0, sys);
  out.push_back({"reify exc register", r.state.get<HandlerStack>(exc::kFamily).size() == 1 && is_nat(body(r), 5)});
  r = reify(exc::raise(e, n(5)), s0, sys);
  out.push_back({"reify exc throw uncaught", r.tree.is_err()});
  CompositeState hs = s0.with(exc::kFamily, make_substate(HandlerStack{{ExcName{"F"}, h, identity_k()},
                                                                        {e, h, identity_k()},
                                                                        {e, identity_k(), identity_k()}}));
  r = reify(exc::raise(e, n(5)), hs, sys);
  out.push_back({"reify exc throw nearest", is_nat(run_value(body(r), sys, r.state), 6) &&
                                                r.state.get<HandlerStack>(exc::kFamily).size() == 1});
  r = reify(exc::pop(e), s0, sys);
  out.push_back({"reify exc pop empty", r.tree.is_err()});
  r = reify(exc::pop(ExcName{"G"}), hs, sys);
  out.push_back({"reify exc pop mismatch", r.tree.is_err()});

  r = reify(plus1(delim::reset(next(n(5)))), s0, sys);
  out.push_back({"reify reset", r.state.get<ContStack>(delim::kFamily).size() == 1 && is_nat(body(r), 5)});
  r = reify(plus1(delim::shift([](const KFun&) { return next(n(100)); })), s0, sys);
  out.push_back({"reify shift", r.state.get<ContStack>(delim::kFamily).empty() && is_nat(body(r), 100)});
  r = reify(delim::pop(next(n(3))), s0, sys);
  out.push_back({"reify pop empty", is_nat(body(r), 3)});
  CompositeState cs = s0.with(delim::kFamily, make_substate(ContStack{lift([](const GITree& x) {
                                 return natop(NatOp::Add, x, n(10));
                               })}));
  r = reify(delim::pop(next(n(3))), cs, sys);
  out.push_back({"reify pop nonempty", r.state.get<ContStack>(delim::kFamily).empty() &&
                                           is_nat(run_value(body(r), sys, r.state), 13)});
  GITree ac = plus1(delim::appcont(next(n(2)), to_later_fn(lift([](const GITree& x) { return natop(NatOp::Mul, x, n(3)); }))));
  r = reify(ac, s0, sys);
  out.push_back({"reify appcont", r.state.get<ContStack>(delim::kFamily).size() == 1 &&
                                      is_nat(run_value(body(r), sys, s0), 6)});
  return out;
}

inline std::vector<Law> all() {
  std::vector<Law> out;
  for (auto* f : {&get_val_laws, &app_laws, &hom_laws, &reify_laws})
    for (Law& l : f()) out.push_back(std::move(l));
  return out;
}

}  // namespace gitree::laws
