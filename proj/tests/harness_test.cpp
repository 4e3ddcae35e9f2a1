#include <gtest/gtest.h>

#include "gitree/harness.hpp"
#include "gitree/lang/parser.hpp"

using namespace gitree;
using namespace gitree::harness;
using namespace gitree::lang;

TEST(Diff, CorpusAgrees) {
  RunConfig cfg;
  for (const char* path : {"programs/cc/callcc_throw.cc", "programs/cc/escape_sum.cc", "programs/delim/k_twice.dl",
                           "programs/delim/reset_discard.dl", "programs/delim/isprime.dl", "programs/exc/handler.exc",
                           "programs/exc/nested_outer.exc", "programs/exc/nested_inner.exc"}) {
    CmdResult r = cmd_diff_file(path, cfg);
    EXPECT_EQ(r.exit_code, kExitOk) << path;
    EXPECT_EQ(r.output.rfind("AGREE ", 0), 0u) << path << ": " << r.output;
  }
}

TEST(Diff, Verdicts) {
  auto diff = [](const char* src, Lang l) { return diff_program(parse(src, l), l, 200).line(); };
  EXPECT_EQ(diff("reset (1 + shift k. k (k 10))", Lang::Delim), "AGREE 12");
  EXPECT_EQ(diff("(rec f x = f x) 0", Lang::CallCC), "BOTH-TIMEOUT");
  EXPECT_EQ(diff("raise E 5", Lang::Exc), "BOTH-STUCK");
  EXPECT_EQ(cmd_run_source("(rec f x = f x) 0", Lang::CallCC, RunConfig{std::nullopt, Mode::Diff, 200}).exit_code,
            kExitOk);
}

TEST(Diff, CorruptedReifierIsCaught) {
  EffectSystem cc = corrupted_effects(Lang::CallCC);
  DiffReport a = diff_program(parse("10 + callcc k. (throw 1 to k) + 5", Lang::CallCC), Lang::CallCC, 1000, &cc);
  EXPECT_EQ(a.verdict, DiffReport::Verdict::Disagree);
  EXPECT_EQ(a.denote_summary, "VALUE 1");
  EXPECT_EQ(a.machine_summary, "VALUE 11");
  EffectSystem dl = corrupted_effects(Lang::Delim);
  DiffReport b = diff_program(parse("reset (1 + shift k. k (k 10))", Lang::Delim), Lang::Delim, 1000, &dl);
  EXPECT_EQ(b.verdict, DiffReport::Verdict::Disagree);
  EXPECT_EQ(b.denote_summary, "VALUE 10");
  EXPECT_THROW(corrupted_effects(Lang::Aff), std::invalid_argument);
}

TEST(ExitCodes, PerFailureKind) {
  RunConfig cfg;
  EXPECT_EQ(cmd_run_source("1 +", Lang::CallCC, cfg).exit_code, kExitParse);
  EXPECT_EQ(cmd_run_source("throw 1 to 2", Lang::CallCC, cfg).exit_code, kExitType);
  EXPECT_EQ(cmd_run_source("raise E 1", Lang::Exc, cfg).exit_code, kExitRuntime);
  EXPECT_EQ(cmd_run_source("(rec f x = f x) 0", Lang::CallCC, RunConfig{std::nullopt, Mode::Denote, 50}).exit_code,
            kExitTimeout);
  EXPECT_EQ(cmd_run_source("7", Lang::CallCC, cfg).output, "VALUE 7\n");
  RunConfig machine;
  machine.mode = Mode::Machine;
  EXPECT_EQ(cmd_run_source("1 + 1", Lang::Aff, machine).exit_code, kExitFailure);
  EXPECT_EQ(cmd_run_source("1 + callcc k. throw 41 to k", Lang::CallCC, machine).output, "VALUE 42\n");
}

TEST(Exhaustive, ReportsInterleavings) {
  RunConfig cfg;
  cfg.sched = Exhaustive{};
  CmdResult r = cmd_run_source("fork(dealloc (alloc 1), 5)", Lang::Aff, cfg);
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_EQ(r.output.rfind("INTERLEAVINGS ", 0), 0u);
  EXPECT_NE(r.output.find("VALUE 5"), std::string::npos);
}

TEST(Generator, DeterministicPerSeed) {
  for (Lang l : {Lang::CallCC, Lang::Exc, Lang::Delim, Lang::Embed, Lang::Aff}) {
    ExprPtr a = gen_program({l, 20, "nat", 1}), b = gen_program({l, 20, "nat", 1});
    EXPECT_TRUE(equal(a, b)) << lang_name(l);
    EXPECT_LE(size(a), 20u);
    EXPECT_TRUE(free_vars(a).empty());
  }
  EXPECT_THROW(gen_program({Lang::CallCC, 20, "unit", 1}), GenError);
}

TEST(Generator, ControlFrequency) {
  std::size_t with = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) with += has_control(gen_program({Lang::CallCC, 20, "nat", seed}));
  EXPECT_GE(with, 200u);
}

TEST(Fuzz, SmallRunsPassAndRepeat) {
  for (Lang l : {Lang::CallCC, Lang::Exc, Lang::Delim, Lang::Embed, Lang::Aff}) {
    FuzzOptions o;
    o.lang = l;
    o.count = 20;
    o.seed = 11;
    CmdResult a = cmd_fuzz(o), b = cmd_fuzz(o);
    EXPECT_EQ(a.exit_code, kExitOk) << a.output;
    EXPECT_EQ(a.output, b.output);
  }
}

TEST(Soundness, SampledSteps) {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto ec = exc_configs(gen_program({Lang::Exc, 14, "nat", seed}), 200);
    for (std::size_t i = 0; i + 1 < ec.size(); i += 3, ++checked) {
      auto r = check_step_soundness(ec[i], ec[i + 1], 10000);
      EXPECT_TRUE(r.ok) << r.detail;
    }
    auto dc = delim_configs(gen_program({Lang::Delim, 14, "nat", seed}), 200);
    for (std::size_t i = 0; i + 1 < dc.size(); i += 3, ++checked) {
      auto r = check_step_soundness(dc[i], dc[i + 1], 10000);
      EXPECT_TRUE(r.ok) << r.detail;
    }
  }
  EXPECT_GT(checked, 20u);
}

TEST(Soundness, RejectsUnrelatedConfigurations) {
  auto a = delim_configs(parse("reset (1 + shift k. k (k 10))", Lang::Delim), 100);
  auto b = delim_configs(parse("10 + reset(2 + shift k. 100)", Lang::Delim), 100);
  EXPECT_FALSE(check_step_soundness(a[0], b[1], 10000).ok);
  auto c = exc_configs(parse("try (raise E 5) catch E with h. h + 1", Lang::Exc), 100);
  auto d = exc_configs(parse("try (raise E 5) catch E with h. h + 2", Lang::Exc), 100);
  EXPECT_FALSE(check_step_soundness(c[0], d[1], 10000).ok);
}
