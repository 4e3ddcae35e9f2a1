#include <gtest/gtest.h>

#include <set>

#include "laws.hpp"

using namespace gitree;
using laws::is_nat;
using laws::n;

namespace {

EffectSystem store_fork() { return EffectSystem::combine({store::reifier(), fork::reifier()}); }

GITree ticks(std::size_t k, GITree t) {
  for (std::size_t i = 0; i < k; ++i) t = tick(t);
  return t;
}

// ℓ := !ℓ + 1 as a separate read and write.
GITree racy_incr(Location l) {
  return get_val(store::read(l), [l](const GITree& v) { return store::write(l, natop(NatOp::Add, v, n(1))); });
}

CompositeState heap0(const EffectSystem& sys, long v) {
  return sys.initial_state().with(store::kFamily, make_substate(store::heap_with({{Location{0}, n(v)}})));
}

std::set<std::string> final_cells(const std::vector<Outcome>& outs) {
  std::set<std::string> s;
  for (const Outcome& o : outs) s.insert(store::heap_of(o.state).cells.at(Location{0}).force().ground().render());
  return s;
}

}  // namespace

TEST(Run, ValueNeedsNoFuel) {
  EffectSystem sys = store_fork();
  RunOptions o;
  o.fuel = 0;
  Outcome r = run(n(5), sys, o);
  ASSERT_TRUE(r.is_value());
  EXPECT_TRUE(is_nat(*r.value, 5));
  EXPECT_EQ(r.summary(), "VALUE 5");
}

TEST(Run, TicksCostOneFuelEach) {
  EffectSystem sys = store_fork();
  RunOptions o;
  o.fuel = 7;
  Outcome r = run(ticks(7, n(5)), sys, o);
  ASSERT_TRUE(r.is_value());
  EXPECT_EQ(r.trace.size(), 7u);
  for (const Event& e : r.trace) EXPECT_EQ(e.kind, Event::Kind::Tau);
  o.fuel = 6;
  EXPECT_EQ(run(ticks(7, n(5)), sys, o).kind, Outcome::Kind::Timeout);
}

TEST(Run, DivergenceTimesOut) {
  GITree omega = guarded_fix([](const LaterTree& self) { return tau(self); });
  RunOptions o;
  o.fuel = 100;
  EXPECT_EQ(run(omega, store_fork(), o).summary(), "TIMEOUT");
}

TEST(Istep, Shapes) {
  EffectSystem sys = store_fork();
  auto s = sys.initial_state();
  auto a = istep(tick(n(3)), s, sys);
  ASSERT_TRUE(std::holds_alternative<Stepped>(a));
  EXPECT_TRUE(is_nat(std::get<Stepped>(a).next, 3));
  EXPECT_TRUE(std::holds_alternative<ValueResult>(istep(n(3), s, sys)));
  EXPECT_TRUE(std::holds_alternative<StuckResult>(istep(err(ErrorKind::runtime()), s, sys)));
  GITree unknown = vis(OpId{"nowhere", "op"}, Payload::unit(), elim_empty());
  EXPECT_TRUE(std::holds_alternative<StuckResult>(istep(unknown, s, sys)));
}

TEST(TpStep, PreservesOtherThreads) {
  EffectSystem sys = store_fork();
  std::vector<GITree> pool = {n(1), tick(n(2))};
  TpStep ts = tp_step(pool, sys.initial_state(), 1, sys);
  ASSERT_TRUE(ts.ok);
  EXPECT_EQ(ts.pool[0].identity(), pool[0].identity());
  EXPECT_TRUE(is_nat(ts.pool[1], 2));
  EXPECT_FALSE(tp_step(pool, sys.initial_state(), 0, sys).ok);
}

TEST(TpStep, ForkAppendsThread) {
  EffectSystem sys = store_fork();
  TpStep ts = tp_step({seq(fork::fork(tick(n(1))), n(2)), n(9)}, sys.initial_state(), 0, sys);
  ASSERT_TRUE(ts.ok);
  ASSERT_EQ(ts.pool.size(), 3u);
  EXPECT_TRUE(is_nat(ts.pool[1], 9));
  Outcome r = run(seq(fork::fork(n(1)), n(2)), sys);
  ASSERT_TRUE(r.is_value());
  EXPECT_TRUE(is_nat(*r.value, 2));
  ASSERT_EQ(r.pool.size(), 2u);
  EXPECT_TRUE(r.pool[1].is_value());
  std::size_t spawns = 0;
  for (const Event& e : r.trace) spawns += e.kind == Event::Kind::Spawn;
  EXPECT_EQ(spawns, 1u);
}

TEST(Combine, RejectsDuplicatesAndKeepsFrames) {
  EXPECT_THROW(EffectSystem::combine({store::reifier(), store::reifier()}), RegistrationError);
  EffectSystem sys = EffectSystem::combine({store::reifier(), delim::reifier()});
  CompositeState s = sys.initial_state();
  ReifyStep r = reify(store::alloc(n(1), [](Location l) { return ret_loc(l); }), s, sys);
  EXPECT_TRUE(r.state.frame_equal_except(s, store::kFamily));
}

TEST(Combine, OrderIndependent) {
  GITree prog = store::alloc(n(3), [](Location l) {
    return delim::reset(next(delim::pop_prime(natop(NatOp::Add, store::read(l), n(4)))));
  });
  Outcome a = run(prog, EffectSystem::combine({delim::reifier(), store::reifier()}));
  Outcome b = run(prog, EffectSystem::combine({store::reifier(), delim::reifier()}));
  EXPECT_EQ(a.summary(), "VALUE 7");
  EXPECT_EQ(a.summary(), b.summary());
  EXPECT_EQ(a.trace_jsonl(), b.trace_jsonl());
}

TEST(Schedulers, RoundRobinAlternates) {
  RoundRobinScheduler rr;
  std::vector<std::size_t> both = {0, 1}, choices;
  for (std::size_t i = 0; i < 4; ++i) choices.push_back(rr.choose(both, i));
  EXPECT_EQ(choices, (std::vector<std::size_t>{0, 1, 0, 1}));
}

TEST(Schedulers, RandomIsReproducible) {
  std::vector<std::size_t> three = {0, 1, 2};
  RandomScheduler a(42), b(42);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(a.choose(three, i), b.choose(three, i));
}

TEST(Schedulers, ExhaustiveCountsInterleavings) {
  EffectSystem sys = store_fork();
  // Two threads of two steps each: 4!/(2!2!) = 6 interleavings.
  GITree child = ticks(2, n(0));
  GITree main = seq(fork::fork(child), ticks(2, n(0)));
  std::vector<Outcome> outs = explore_all({main}, sys, sys.initial_state(), 30);
  // The fork step itself is not interleaved with anything.
  EXPECT_EQ(outs.size(), 6u);
  for (const Outcome& o : outs) EXPECT_TRUE(o.is_value());
}

TEST(Atomicity, FaaNeverLosesUpdates) {
  EffectSystem sys = store_fork();
  Location l{0};
  GITree main = seq(fork::fork(store::faa(l, 1)), store::faa(l, 1));
  auto outs = explore_all({main}, sys, heap0(sys, 0), 64);
  EXPECT_LE(outs.size(), 20u);
  EXPECT_EQ(final_cells(outs), std::set<std::string>{"2"});
}

TEST(Atomicity, ReadWriteRaces) {
  EffectSystem sys = store_fork();
  Location l{0};
  GITree main = seq(fork::fork(racy_incr(l)), racy_incr(l));
  auto outs = explore_all({main}, sys, heap0(sys, 0), 64);
  EXPECT_LE(outs.size(), 20u);
  EXPECT_EQ(final_cells(outs), (std::set<std::string>{"1", "2"}));
}

TEST(Atomicity, XchgEqualsAtomicExchange) {
  EffectSystem sys = store_fork();
  Location l{0};
  for (long v = 0; v < 50; ++v) {
    GITree a = store::xchg(l, n(v));
    GITree b = store::atomic(l, LaterAtomicFn::now([v](const GITree& x) { return std::make_pair(x, n(v)); }));
    RunOptions o;
    o.initial_state = heap0(sys, v + 1);
    Outcome ra = run(a, sys, o), rb = run(b, sys, o);
    EXPECT_EQ(ra.summary(), rb.summary());
    EXPECT_EQ(ra.trace_jsonl(), rb.trace_jsonl());
    EXPECT_TRUE(is_nat(store::heap_of(ra.state).cells.at(l).force(), v));
  }
}

TEST(Store, RoundTripAndPresence) {
  EffectSystem sys = store_fork();
  for (const GITree& v : {n(0), n(12), laws::sample_fun()}) {
    Outcome r = run(store::alloc(v, [](Location l) { return store::read(l); }), sys);
    ASSERT_TRUE(r.is_value());
    EXPECT_TRUE(bisim_probe(*r.value, v, 3));
  }
  EXPECT_EQ(run(store::write(Location{4}, n(1)), sys).summary(), "ERROR RunTime");
  Outcome one = run(store::faa(Location{0}, 1), sys, RunOptions{10, RoundRobin{}, heap0(sys, 5), 0});
  std::size_t effects = 0;
  for (const Event& e : one.trace) effects += e.kind == Event::Kind::Effect;
  EXPECT_EQ(effects, 1u);
}

TEST(Determinism, RepeatedRunsIdentical) {
  EffectSystem sys = store_fork();
  Location l{0};
  GITree main = seq(fork::fork(racy_incr(l)), seq(racy_incr(l), store::read(l)));
  RunOptions o;
  o.policy = RandomPolicy{7};
  o.initial_state = heap0(sys, 0);
  std::string first = run(main, sys, o).trace_jsonl();
  for (int i = 0; i < 5; ++i) EXPECT_EQ(run(main, sys, o).trace_jsonl(), first);
}
