#include <gtest/gtest.h>

#include <random>

#include "gitree/bisim.hpp"
#include "gitree/harness.hpp"
#include "gitree/lang/denote.hpp"
#include "gitree/lang/parser.hpp"

using namespace gitree;
using namespace gitree::lang;
using harness::cmd_run_source;
using harness::RunConfig;

namespace {

std::string run_src(const std::string& src, Lang l, bool typecheck = true) {
  RunConfig cfg;
  cfg.typecheck = typecheck;
  return cmd_run_source(src, l, cfg).output;
}

}  // namespace

TEST(Oracles, HandCorpus) {
  EXPECT_EQ(run_src("1 + callcc k. throw 41 to k", Lang::CallCC), "VALUE 42\n");
  EXPECT_EQ(run_src("10 + callcc k. (throw 1 to k) + 5", Lang::CallCC), "VALUE 11\n");
  EXPECT_EQ(run_src("callcc k. 5", Lang::CallCC), "VALUE 5\n");
  EXPECT_EQ(run_src("reset (1 + shift k. k (k 10))", Lang::Delim), "VALUE 12\n");
  EXPECT_EQ(run_src("10 + reset(2 + shift k. 100)", Lang::Delim), "VALUE 110\n");
  EXPECT_EQ(run_src("<(rec f x = isprime (shift k. x - 1)) 2>", Lang::Delim), "VALUE 1\n");
  EXPECT_EQ(run_src("try (fun x -> raise E x) 5 catch E with h. h + 1", Lang::Exc), "VALUE 6\n");
  EXPECT_EQ(run_src("try (fun x -> raise E x) 5 catch E with h. h", Lang::Exc), "VALUE 5\n");
  EXPECT_EQ(run_src("try (try (raise E 5) catch F with h. h + 100) catch E with h. h + 1", Lang::Exc), "VALUE 6\n");
  EXPECT_EQ(run_src("try (try (raise E 5) catch E with h. h + 100) catch E with h. h + 1", Lang::Exc), "VALUE 105\n");
  EXPECT_EQ(run_src("raise E 5", Lang::Exc), "ERROR RunTime\n");
  EXPECT_EQ(run_src("embed { <1 + shift k. k 1> }", Lang::Embed), "VALUE 2\n");
  EXPECT_EQ(run_src("(fun r -> (fun _ -> !r) (r := 4)) (alloc 1)", Lang::Embed), "VALUE 4\n");
}

TEST(Embed, ProgFigureFromSource) {
  RunConfig cfg;
  cfg.typecheck = false;
  cfg.inspect_heap = "y";
  auto r = harness::cmd_run("programs/ffi/prog_fig.emb", cfg);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("y = 8"), std::string::npos) << r.output;
}

TEST(Embed, EmbedLeavesStackEmpty) {
  EffectSystem sys = effects_for(Lang::Embed);
  Outcome o = run(denote_program(parse("embed { <1 + shift k. k 1> } + 1", Lang::Embed), Lang::Embed), sys);
  EXPECT_EQ(o.summary(), "VALUE 3");
  EXPECT_EQ(harness::cont_stack_depth(o.state), 0u);
  EXPECT_TRUE(denote(parse("1", Lang::Embed), Lang::Embed).is_ret());
}

TEST(Aff, ThunkForcesOnce) {
  EffectSystem sys = effects_for(Lang::Aff);
  GITree prog = get_val(thunk(ret_nat(9)), [](const GITree& t) { return force(t); });
  EXPECT_EQ(run(prog, sys).summary(), "VALUE 9");
  GITree twice = get_val(thunk(ret_nat(9)), [](const GITree& t) { return natop(NatOp::Add, force(t), force(t)); });
  EXPECT_EQ(run(twice, sys).summary(), "ERROR Lin");
}

TEST(Aff, Programs) {
  EXPECT_EQ(run_src("let (a, b) = (1, 2) in a", Lang::Aff), "VALUE 1\n");
  EXPECT_EQ(run_src("let (a, b) = (1, 2) in b", Lang::Aff), "VALUE 2\n");
  EXPECT_EQ(run_src("fork(dealloc (alloc 1), 5)", Lang::Aff), "VALUE 5\n");
  EXPECT_EQ(run_src("let (v, r) = replace(alloc 1, 2) in (fun u -> v) (dealloc r)", Lang::Aff), "VALUE 1\n");
  EXPECT_EQ(run_src("(fun x -> if x then 1 else 2) false", Lang::Aff), "VALUE 2\n");
}

TEST(Aff, DoubleUseIsLinError) {
  for (const char* src : {"let (a, b) = (fun x -> (x, x)) 5 in a + b", "(fun x -> x + x) 3",
                          "(fun x -> (fun y -> x + y) x) 1"}) {
    auto r = cmd_run_source(src, Lang::Aff, RunConfig{std::nullopt, harness::Mode::Denote, 10000, RoundRobin{},
                                                       std::nullopt, false, std::nullopt});
    EXPECT_EQ(r.output, "ERROR Lin\n") << src;
    EXPECT_EQ(r.exit_code, harness::kExitRuntime);
  }
}

TEST(Delim, ConfigTermDenotation) {
  ExprPtr e = parse("reset (1 + shift k. k (k 10))", Lang::Delim);
  DelimConfig c{DelimConfig::Kind::Term, e, {}, {}};
  auto [tree, stack] = denote_config(c);
  EXPECT_TRUE(stack.empty());
  EffectSystem sys = effects_for(Lang::Delim);
  RunOptions o;
  o.initial_state = config_state(sys, stack);
  Outcome r = run(tree, sys, o);
  EXPECT_EQ(r.summary(), "VALUE 12");
  EXPECT_EQ(harness::cont_stack_depth(r.state), 0u);
}

TEST(Exc, ConfigTermDenotation) {
  ExprPtr e = parse("try (fun x -> raise E x) 5 catch E with h. h + 1", Lang::Exc);
  auto [tree, stack] = denote_config(ExcConfig{ExcConfig::Kind::Term, e, {}});
  EXPECT_TRUE(stack.empty());
  EffectSystem sys = effects_for(Lang::Exc);
  EXPECT_EQ(run(tree, sys).summary(), "VALUE 6");
}

namespace {

// Random λ_callcc evaluation contexts.
Frames random_context(std::mt19937_64& rng) {
  Frames k;
  std::size_t depth = 1 + rng() % 3;
  auto operand = [&]() -> ExprPtr {
    switch (rng() % 3) {
      case 0:
        return num(rng() % 10);
      case 1:
        return binop(NatOp::Add, num(rng() % 5), num(rng() % 5));
      default:
        return callcc("q", num(rng() % 10));
    }
  };
  for (std::size_t i = 0; i < depth; ++i) {
    Frame f{FrameKind::OpRight};
    switch (rng() % 5) {
      case 0:
        f = Frame{FrameKind::OpRight, NatOp::Add, "", "", operand(), nullptr};
        break;
      case 1:
        f = Frame{FrameKind::OpLeft, NatOp::Mul, "", "", num(rng() % 5), nullptr};
        break;
      case 2:
        f = Frame{FrameKind::If, NatOp::Add, "", "", operand(), operand()};
        break;
      case 3:
        f = Frame{FrameKind::AppArg, NatOp::Add, "", "", lam("z", binop(NatOp::Sub, var("z"), num(1))), nullptr};
        break;
      default:
        f = Frame{FrameKind::OpRight, NatOp::Sub, "", "", num(rng() % 9), nullptr};
        break;
    }
    k.push_back(f);
  }
  return k;
}

}  // namespace

TEST(Compositionality, CallCCContexts) {
  std::mt19937_64 rng(2024);
  std::vector<ExprPtr> holes = {num(3), callcc("k", num(4)), callcc("k", throw_(num(7), var("k"))),
                                binop(NatOp::Add, num(1), num(2))};
  std::size_t checked = 0;
  for (int i = 0; i < 30; ++i) {
    Frames k = random_context(rng);
    for (const ExprPtr& e : holes) {
      GITree whole = denote(plug(k, e), Lang::CallCC);
      GITree split = denote_context(k, Lang::CallCC)(denote(e, Lang::CallCC));
      EXPECT_TRUE(bisim_probe(whole, split, 4)) << print(k) << " with " << print(e);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 120u);
}
