#include "gitree/effects.hpp"

namespace gitree {

using K = Arity::Kind;

Cont elim_empty() {
  return [](const Payload&) -> LaterTree { throw std::logic_error("continuation of an op with empty output"); };
}

KFun cont_as_kfun(Cont k) {
  return [k = std::move(k)](const LaterTree& x) { return k(Payload::tree(x)); };
}

namespace {

ReifyResult ok(LaterTree next, SubStatePtr s, std::vector<LaterTree> spawned = {}) {
  return ReifySuccess{std::move(next), std::move(s), std::move(spawned)};
}

ReifyResult none(std::string why) { return ReifyFailure{std::move(why)}; }

Cont identity_cont() {
  return [](const Payload& y) { return y.as_tree(); };
}

Cont unit_cont() {
  return [](const Payload&) { return next(ret_unit()); };
}

SubStatePtr unit_state() { return make_substate(UnitState{}); }

std::string loc_str(Location l) { return "l" + std::to_string(l.index); }

}  // namespace

namespace store {

OpId op_alloc() { return {kFamily, "alloc"}; }
OpId op_read() { return {kFamily, "read"}; }
OpId op_write() { return {kFamily, "write"}; }
OpId op_dealloc() { return {kFamily, "dealloc"}; }
OpId op_atomic() { return {kFamily, "atomic"}; }

GITree alloc(GITree a, std::function<GITree(Location)> k) {
  return vis(op_alloc(), Payload::tree(next(std::move(a))),
             [k = std::move(k)](const Payload& y) { return next(k(y.as_ground().loc())); });
}

GITree read(Location l) { return vis(op_read(), Payload::loc(l), identity_cont()); }

GITree write(Location l, GITree a) {
  return vis(op_write(), Payload::tuple({Payload::loc(l), Payload::tree(next(std::move(a)))}), unit_cont());
}

GITree dealloc(Location l) { return vis(op_dealloc(), Payload::loc(l), unit_cont()); }

GITree atomic(Location l, LaterAtomicFn f) {
  return vis(op_atomic(), Payload::tuple({Payload::loc(l), Payload::atomic(std::move(f))}), identity_cont());
}

GITree xchg(Location l, GITree w) {
  return atomic(l, LaterAtomicFn::now([w = std::move(w)](const GITree& x) { return std::make_pair(x, w); }));
}

GITree cas(Location l, GroundValue expected, GITree desired) {
  return atomic(l, LaterAtomicFn::now([expected, desired](const GITree& x) {
    if (!x.is_ret()) return std::make_pair(err(ErrorKind::runtime()), x);
    auto eq = ground_equal(x.ground(), expected);
    if (!eq) return std::make_pair(err(ErrorKind::runtime()), x);
    if (*eq) return std::make_pair(ret_nat(1), desired);
    return std::make_pair(ret_nat(0), x);
  }));
}

GITree faa(Location l, Nat n) {
  return atomic(l, LaterAtomicFn::now([n](const GITree& x) {
    return std::make_pair(x, natop(NatOp::Add, x, ret_nat(n)));
  }));
}

namespace {

ReifyResult step(const OpId& op, const Payload& in, const SubStatePtr& s, const Cont& k) {
  const Heap& h = std::get<Heap>(*s);
  if (op.name == "alloc") {
    Heap h2 = h;
    Location l = h2.next_fresh;
    h2.cells[l] = in.as_tree();
    h2.next_fresh = Location{l.index + 1};
    return ok(k(Payload::loc(l)), make_substate(std::move(h2)));
  }
  if (op.name == "read") {
    Location l = in.as_ground().loc();
    auto it = h.cells.find(l);
    if (it == h.cells.end()) return none("read of unallocated " + loc_str(l));
    return ok(k(Payload::tree(it->second)), s);
  }
  if (op.name == "write") {
    Location l = in.at(0).as_ground().loc();
    if (!h.cells.count(l)) return none("write to unallocated " + loc_str(l));
    Heap h2 = h;
    h2.cells[l] = in.at(1).as_tree();
    return ok(k(Payload::unit()), make_substate(std::move(h2)));
  }
  if (op.name == "dealloc") {
    Location l = in.as_ground().loc();
    if (!h.cells.count(l)) return none("dealloc of unallocated " + loc_str(l));
    Heap h2 = h;
    h2.cells.erase(l);
    return ok(k(Payload::unit()), make_substate(std::move(h2)));
  }
  if (op.name == "atomic") {
    Location l = in.at(0).as_ground().loc();
    auto it = h.cells.find(l);
    if (it == h.cells.end()) return none("atomic on unallocated " + loc_str(l));
    auto [r, v2] = in.at(1).as_atomic().force()(it->second.force());
    Heap h2 = h;
    h2.cells[l] = next(v2);
    return ok(k(Payload::tree(next(r))), make_substate(std::move(h2)));
  }
  return none("unknown store op " + op.name);
}

}  // namespace

Reifier reifier() {
  Arity loc = Arity::of(K::Loc), tree = Arity::of(K::Tree), unit = Arity::of(K::Unit);
  return Reifier{kFamily,
                 {{op_alloc(), tree, loc},
                  {op_read(), loc, tree},
                  {op_write(), Arity::tuple({loc, tree}), unit},
                  {op_dealloc(), loc, unit},
                  {op_atomic(), Arity::tuple({loc, Arity::of(K::Atomic)}), tree}},
                 make_substate(Heap{}),
                 step};
}

const Heap& heap_of(const CompositeState& s) { return s.get<Heap>(kFamily); }

Heap heap_with(std::vector<std::pair<Location, GITree>> cells) {
  Heap h;
  for (auto& [l, t] : cells) {
    h.cells[l] = next(t);
    if (l.index >= h.next_fresh.index) h.next_fresh = Location{l.index + 1};
  }
  return h;
}

}  // namespace store

namespace callcc {

OpId op_callcc() { return {kFamily, "callcc"}; }
OpId op_throw() { return {kFamily, "throw"}; }

GITree callcc_gt(Callback f) { return vis(op_callcc(), Payload::callback(std::move(f)), identity_cont()); }

GITree throw_gt(LaterTree e, LaterFn f) {
  return vis(op_throw(), Payload::tuple({Payload::tree(std::move(e)), Payload::later_fn(std::move(f))}),
             elim_empty());
}

Reifier reifier() {
  ReifyFn step = [](const OpId& op, const Payload& in, const SubStatePtr& s, const Cont& k) -> ReifyResult {
    if (op.name == "callcc") {
      KFun kk = cont_as_kfun(k);
      return ok(kk(in.as_callback()(kk)), s);
    }
    if (op.name == "throw") return ok(apply_later(in.at(1).as_later_fn(), in.at(0).as_tree()), s);
    return none("unknown callcc op " + op.name);
  };
  Arity tree = Arity::of(K::Tree);
  return Reifier{kFamily,
                 {{op_callcc(), Arity::of(K::Callback), tree},
                  {op_throw(), Arity::tuple({tree, Arity::of(K::LaterFun)}), Arity::of(K::Empty)}},
                 unit_state(),
                 step};
}

}  // namespace callcc

namespace exc {

OpId op_register() { return {kFamily, "register"}; }
OpId op_throw() { return {kFamily, "throw"}; }
OpId op_pop() { return {kFamily, "pop"}; }

GITree reg(ExcName e, KFun h, LaterTree x) {
  return vis(op_register(),
             Payload::tuple({Payload::exc(std::move(e)), Payload::kfun(std::move(h)), Payload::tree(std::move(x))}),
             identity_cont());
}

GITree pop(ExcName e) { return vis(op_pop(), Payload::exc(std::move(e)), unit_cont()); }

GITree raise(ExcName e, const GITree& x) {
  return get_val(x, [e](const GITree& r) {
    return vis(op_throw(), Payload::tuple({Payload::exc(e), Payload::tree(next(r))}), elim_empty());
  });
}

GITree pop_wrap(ExcName e, const GITree& x) {
  return get_val(x, [e](const GITree& y) { return seq(pop(e), y); });
}

GITree catch_(ExcName e, KFun h, const GITree& x) {
  GITree body = pop_wrap(e, x);
  return reg(std::move(e), std::move(h), next(body));
}

Reifier reifier() {
  ReifyFn step = [](const OpId& op, const Payload& in, const SubStatePtr& s, const Cont& k) -> ReifyResult {
    const HandlerStack& st = std::get<HandlerStack>(*s);
    if (op.name == "register") {
      HandlerStack st2;
      st2.reserve(st.size() + 1);
      st2.push_back({in.at(0).as_exc(), in.at(1).as_kfun(), cont_as_kfun(k)});
      st2.insert(st2.end(), st.begin(), st.end());
      return ok(in.at(2).as_tree(), make_substate(std::move(st2)));
    }
    if (op.name == "throw") {
      const ExcName& e = in.at(0).as_exc();
      for (std::size_t i = 0; i < st.size(); ++i) {
        if (st[i].exc != e) continue;
        HandlerStack rest(st.begin() + static_cast<std::ptrdiff_t>(i) + 1, st.end());
        return ok(st[i].saved(st[i].handler(in.at(1).as_tree())), make_substate(std::move(rest)));
      }
      return none("uncaught exception " + e.name);
    }
    if (op.name == "pop") {
      const ExcName& e = in.as_exc();
      if (st.empty()) return none("pop of " + e.name + " on an empty handler stack");
      if (st.front().exc != e) return none("pop of " + e.name + " but innermost handler is " + st.front().exc.name);
      HandlerStack rest(st.begin() + 1, st.end());
      return ok(st.front().saved(k(Payload::unit())), make_substate(std::move(rest)));
    }
    return none("unknown exc op " + op.name);
  };
  Arity tree = Arity::of(K::Tree), exc = Arity::of(K::Exc);
  return Reifier{kFamily,
                 {{op_register(), Arity::tuple({exc, Arity::of(K::KFun), tree}), tree},
                  {op_throw(), Arity::tuple({exc, tree}), Arity::of(K::Empty)},
                  {op_pop(), exc, Arity::of(K::Unit)}},
                 make_substate(HandlerStack{}),
                 step};
}

}  // namespace exc

namespace delim {

OpId op_reset() { return {kFamily, "reset"}; }
OpId op_shift() { return {kFamily, "shift"}; }
OpId op_pop() { return {kFamily, "pop"}; }
OpId op_appcont() { return {kFamily, "appcont"}; }

GITree reset(LaterTree e) { return vis(op_reset(), Payload::tree(std::move(e)), identity_cont()); }
GITree shift(Callback f) { return vis(op_shift(), Payload::callback(std::move(f)), identity_cont()); }

GITree appcont(LaterTree e, LaterFn k) {
  return vis(op_appcont(), Payload::tuple({Payload::tree(std::move(e)), Payload::later_fn(std::move(k))}),
             identity_cont());
}

GITree pop(LaterTree e) { return vis(op_pop(), Payload::tree(std::move(e)), elim_empty()); }

GITree pop_prime(const GITree& b) {
  return get_val(b, [](const GITree& v) { return pop(next(v)); });
}

Reifier reifier() {
  ReifyFn step = [](const OpId& op, const Payload& in, const SubStatePtr& s, const Cont& k) -> ReifyResult {
    const ContStack& st = std::get<ContStack>(*s);
    auto push = [&](KFun top) {
      ContStack st2;
      st2.reserve(st.size() + 1);
      st2.push_back(std::move(top));
      st2.insert(st2.end(), st.begin(), st.end());
      return make_substate(std::move(st2));
    };
    if (op.name == "reset") return ok(in.as_tree(), push(cont_as_kfun(k)));
    if (op.name == "shift") return ok(in.as_callback()(cont_as_kfun(k)), s);
    if (op.name == "pop") {
      if (st.empty()) return ok(in.as_tree(), s);
      ContStack rest(st.begin() + 1, st.end());
      return ok(st.front()(in.as_tree()), make_substate(std::move(rest)));
    }
    if (op.name == "appcont")
      return ok(apply_later(in.at(1).as_later_fn(), in.at(0).as_tree()), push(cont_as_kfun(k)));
    return none("unknown delim op " + op.name);
  };
  Arity tree = Arity::of(K::Tree);
  return Reifier{kFamily,
                 {{op_reset(), tree, tree},
                  {op_shift(), Arity::of(K::Callback), tree},
                  {op_pop(), tree, Arity::of(K::Empty)},
                  {op_appcont(), Arity::tuple({tree, Arity::of(K::LaterFun)}), tree}},
                 make_substate(ContStack{}),
                 step};
}

}  // namespace delim

namespace fork {

OpId op_fork() { return {kFamily, "fork"}; }

GITree fork(GITree e) {
  return vis(op_fork(), Payload::tree(next(std::move(e))),
             [](const Payload& y) { return next(ret(y.as_ground())); });
}

Reifier reifier() {
  ReifyFn step = [](const OpId& op, const Payload& in, const SubStatePtr& s, const Cont& k) -> ReifyResult {
    if (op.name != "fork") return none("unknown fork op " + op.name);
    return ok(k(Payload::unit()), s, {in.as_tree()});
  };
  return Reifier{kFamily, {{op_fork(), Arity::of(K::Tree), Arity::of(K::Unit)}}, unit_state(), step};
}

}  // namespace fork

}  // namespace gitree
