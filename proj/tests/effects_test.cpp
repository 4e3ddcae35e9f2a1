#include <gtest/gtest.h>

#include "gitree/harness.hpp"
#include "gitree/lang/denote.hpp"
#include "laws.hpp"

using namespace gitree;
using laws::is_nat;
using laws::n;

namespace {

std::size_t count_op(const Outcome& o, const OpId& op) {
  std::size_t c = 0;
  for (const Event& e : o.trace) c += e.kind == Event::Kind::Effect && e.op == op;
  return c;
}

Outcome run_ffi(long start) {
  EffectSystem sys = lang::effects_for(lang::Lang::Embed);
  Location y{0};
  RunOptions o;
  o.initial_state = sys.initial_state().with(store::kFamily, make_substate(store::heap_with({{y, n(start)}})));
  return run(lang::ffi_prog_applied(y), sys, o);
}

}  // namespace

class FfiProg : public ::testing::TestWithParam<long> {};

TEST_P(FfiProg, AddsThreeAndRestoresStack) {
  long start = GetParam();
  Outcome r = run_ffi(start);
  ASSERT_TRUE(r.is_value()) << r.summary() << " " << r.diagnostic;
  EXPECT_TRUE(is_nat(store::heap_of(r.state).cells.at(Location{0}).force(), start + 3));
  EXPECT_EQ(harness::cont_stack_depth(r.state), 0u);
  EXPECT_EQ(count_op(r, delim::op_appcont()), 2u);
}

INSTANTIATE_TEST_SUITE_P(Starts, FfiProg, ::testing::Values(0L, 1L, 5L));

TEST(Delim, ResetPopsBalance) {
  EffectSystem sys = EffectSystem::combine({delim::reifier()});
  // reset (1 + shift k. k (k 10)) at the tree level.
  GITree body = delim::shift([](const KFun& k) {
    LaterFn kf = to_later_fn(k);
    GITree inner = delim::appcont(next(n(10)), kf);
    return next(delim::pop_prime(get_val(inner, [kf](const GITree& x) { return delim::appcont(next(x), kf); })));
  });
  GITree prog = delim::pop_prime(delim::reset(next(delim::pop_prime(natop(NatOp::Add, n(1), body)))));
  Outcome r = run(prog, sys);
  ASSERT_TRUE(r.is_value()) << r.summary();
  EXPECT_TRUE(is_nat(*r.value, 12));
  EXPECT_EQ(r.state.get<ContStack>(delim::kFamily).size(), 0u);
  std::size_t resets = count_op(r, delim::op_reset());
  std::size_t popped = 0;
  for (const Event& e : r.trace)
    if (e.kind == Event::Kind::Effect && e.op == delim::op_pop() && e.depth) popped += 1;
  EXPECT_EQ(resets, 1u);
  EXPECT_GE(popped, resets);
}

TEST(Exc, NearestHandlerWins) {
  EffectSystem sys = EffectSystem::combine({exc::reifier()});
  ExcName e{"E"};
  KFun plus100 = lift([](const GITree& x) { return natop(NatOp::Add, x, n(100)); });
  KFun plus1 = lift([](const GITree& x) { return natop(NatOp::Add, x, n(1)); });
  GITree inner = exc::catch_(e, plus100, exc::raise(e, n(5)));
  Outcome r = run(exc::catch_(e, plus1, inner), sys);
  EXPECT_EQ(r.summary(), "VALUE 105");
  EXPECT_TRUE(r.state.get<HandlerStack>(exc::kFamily).empty());
  GITree skip = exc::catch_(ExcName{"F"}, plus100, exc::raise(e, n(5)));
  EXPECT_EQ(run(exc::catch_(e, plus1, skip), sys).summary(), "VALUE 6");
}

TEST(Exc, UncaughtIsRuntimeError) {
  EffectSystem sys = EffectSystem::combine({exc::reifier()});
  Outcome r = run(exc::raise(ExcName{"E"}, n(5)), sys);
  EXPECT_EQ(r.summary(), "ERROR RunTime");
  EXPECT_NE(r.diagnostic.find("E"), std::string::npos) << r.diagnostic;
}

TEST(Exc, NormalExitPopsHandler) {
  EffectSystem sys = EffectSystem::combine({exc::reifier()});
  Outcome r = run(exc::catch_(ExcName{"E"}, identity_k(), n(7)), sys);
  EXPECT_EQ(r.summary(), "VALUE 7");
  EXPECT_EQ(count_op(r, exc::op_register()), 1u);
  EXPECT_EQ(count_op(r, exc::op_pop()), 1u);
}

TEST(CallCC, UnusedContinuationIsIdentity) {
  EffectSystem sys = EffectSystem::combine({callcc::reifier()});
  for (long v = 0; v < 10; ++v) {
    GITree body = natop(NatOp::Mul, n(v), n(3));
    Outcome with = run(callcc::callcc_gt([body](const KFun&) { return next(body); }), sys);
    Outcome without = run(body, sys);
    EXPECT_EQ(with.summary(), without.summary());
  }
}

TEST(CallCC, ThrowEscapes) {
  EffectSystem sys = EffectSystem::combine({callcc::reifier()});
  // 1 + callcc k. throw 41 to k
  GITree cc = callcc::callcc_gt([](const KFun& k) { return next(callcc::throw_gt(next(n(41)), to_later_fn(k))); });
  EXPECT_EQ(run(natop(NatOp::Add, n(1), cc), sys).summary(), "VALUE 42");
}
