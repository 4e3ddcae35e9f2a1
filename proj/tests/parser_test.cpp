#include <gtest/gtest.h>

#include "gitree/harness.hpp"
#include "gitree/lang/parser.hpp"

using namespace gitree::lang;

TEST(Parse, GrammarExamples) {
  EXPECT_EQ(parse("callcc k. throw 41 to k", Lang::CallCC)->kind, ExprKind::CallCC);
  ExprPtr d = parse("reset (1 + shift k. k (k 10))", Lang::Delim);
  EXPECT_EQ(d->kind, ExprKind::Reset);
  EXPECT_TRUE(equal(d, parse("<1 + shift k. k (k 10)>", Lang::Delim)));
  ExprPtr f = parse("fork { l <- r } ; 5", Lang::Aff);
  EXPECT_EQ(f->kind, ExprKind::Fork);
  EXPECT_TRUE(equal(parse("fork(dealloc (alloc 1), 5)", Lang::Aff), parse("fork { dealloc (alloc 1) }; 5", Lang::Aff)));
  EXPECT_EQ(parse("try (raise E 1) catch E with h. h", Lang::Exc)->kind, ExprKind::Try);
  EXPECT_EQ(parse("embed { <1 + shift k. k 1> }", Lang::Embed)->kind, ExprKind::Embed);
  EXPECT_EQ(parse("let (a, b) = (1, 2) in a", Lang::Aff)->kind, ExprKind::LetPair);
}

TEST(Parse, ContinuationApplicationResolves) {
  ExprPtr d = parse("reset (1 + shift k. k (k 10))", Lang::Delim);
  // shift body: k (k 10) becomes nested cont applications.
  const ExprPtr& sh = d->kids[0]->kids[1];
  ASSERT_EQ(sh->kind, ExprKind::Shift);
  EXPECT_EQ(sh->kids[0]->kind, ExprKind::ContApp);
  EXPECT_EQ(sh->kids[0]->kids[1]->kind, ExprKind::ContApp);
}

TEST(Parse, CommentsAndWhitespace) {
  ExprPtr a = parse("# leading\n1 +   # trailing\n 2", Lang::CallCC);
  EXPECT_TRUE(equal(a, parse("1+2", Lang::CallCC)));
}

TEST(Parse, ErrorsCarryPositions) {
  try {
    parse("1 +\n  )", Lang::CallCC);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2u);
    EXPECT_EQ(e.col, 3u);
  }
  EXPECT_THROW(parse("shift k. 1", Lang::CallCC), ParseError);
  EXPECT_THROW(parse("callcc k. 1", Lang::Delim), ParseError);
  EXPECT_THROW(parse("fun x -> ", Lang::Exc), ParseError);
}

TEST(Parse, OpenTermsAreKept) { EXPECT_EQ(free_vars(parse("fun x -> y", Lang::CallCC)).count("y"), 1u); }

TEST(RoundTrip, GeneratedPrograms) {
  for (Lang l : {Lang::CallCC, Lang::Exc, Lang::Delim, Lang::Embed, Lang::Aff})
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      ExprPtr e = gen_program({l, 20, "nat", seed});
      std::string text = print(e);
      ExprPtr back = parse(text, l);
      ASSERT_TRUE(equal(back, e)) << lang_name(l) << " seed " << seed << ": " << text << " vs " << print(back);
    }
}

TEST(RoundTrip, Corpus) {
  for (const char* path : {"programs/cc/callcc_throw.cc", "programs/delim/k_twice.dl", "programs/delim/isprime.dl",
                           "programs/exc/nested_outer.exc", "programs/ffi/prog_fig.emb", "programs/aff/double_use.aff",
                           "programs/aff/fork.aff"}) {
    Lang l = *lang_from_path(path);
    ExprPtr e = parse(gitree::harness::read_file(path), l);
    EXPECT_TRUE(equal(parse(print(e), l), e)) << path;
  }
}
