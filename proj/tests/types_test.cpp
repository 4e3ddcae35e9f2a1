#include <gtest/gtest.h>

#include "gitree/lang/generate.hpp"
#include "gitree/lang/parser.hpp"
#include "gitree/lang/types.hpp"

using namespace gitree::lang;

namespace {

std::string type_of(const std::string& src, Lang l) { return show(typecheck(parse(src, l), l).type); }

bool rejects(const std::string& src, Lang l) {
  try {
    typecheck(parse(src, l), l);
    return false;
  } catch (const TypeError&) {
    return true;
  }
}

}  // namespace

TEST(CallCC, Rules) {
  EXPECT_EQ(type_of("callcc k. 5", Lang::CallCC), "nat");
  EXPECT_EQ(type_of("1 + callcc k. throw 41 to k", Lang::CallCC), "nat");
  EXPECT_TRUE(rejects("throw 1 to 2", Lang::CallCC));
  EXPECT_TRUE(rejects("fun x -> y", Lang::CallCC));
  EXPECT_TRUE(rejects("1 2", Lang::CallCC));
  EXPECT_EQ(type_of("(rec f n = if n then n + f (n - 1) else 0) 3", Lang::CallCC), "nat");
}

TEST(Exc, SimplyTyped) {
  EXPECT_EQ(type_of("try (fun x -> raise E x) 5 catch E with h. h + 1", Lang::Exc), "nat");
  EXPECT_TRUE(rejects("try 1 catch E with h. fun x -> x", Lang::Exc));
}

TEST(Delim, AnswerTypes) {
  TypeResult r = typecheck(parse("reset (1 + shift k. k (k 10))", Lang::Delim), Lang::Delim);
  EXPECT_EQ(show(r.type), "nat");
  EXPECT_TRUE(is_nat_program(parse("reset (1 + shift k. k (k 10))", Lang::Delim), Lang::Delim));
  EXPECT_EQ(show(typecheck_delim_pure(parse("<1 + shift k. k (k 10)>", Lang::Delim))), "nat");
  EXPECT_TRUE(is_nat_program(parse("10 + reset (2 + shift k. 100)", Lang::Delim), Lang::Delim));
  // Answer-type modification: the shift body decides the reset's type.
  EXPECT_EQ(type_of("<1 + shift k. fun x -> x>", Lang::Delim), "'b/'a -> 'b/'a");
  EXPECT_TRUE(rejects("<1 + shift k. k (fun x -> x)>", Lang::Delim));
  EXPECT_TRUE(rejects("shift k. k", Lang::Delim) ||
              !is_nat_program(parse("shift k. k", Lang::Delim), Lang::Delim));
}

TEST(Delim, IsPrimeExampleTypes) {
  ExprPtr e = parse("<(rec f x = isprime (shift k. x - 1)) 2>", Lang::Delim);
  EXPECT_TRUE(is_nat_program(e, Lang::Delim));
}

TEST(Embed, PureBodyRule) {
  EXPECT_EQ(type_of("embed { <1 + shift k. k 1> }", Lang::Embed), "nat");
  EXPECT_TRUE(rejects("embed { shift k. 5 }", Lang::Embed));
  EXPECT_TRUE(rejects("embed { 1 + 2 }", Lang::Embed));
  EXPECT_EQ(type_of("alloc 1", Lang::Embed), "ref nat");
  EXPECT_EQ(type_of("(fun r -> !r) (alloc 4)", Lang::Embed), "nat");
  EXPECT_TRUE(rejects("reset 1", Lang::Embed));
}

TEST(Aff, Linearity) {
  EXPECT_EQ(type_of("fun x -> x", Lang::Aff), "'a -o 'a");
  EXPECT_TRUE(rejects("fun x -> (x, x)", Lang::Aff));
  EXPECT_TRUE(rejects("let (a, b) = (fun x -> (x, x)) 5 in a + b", Lang::Aff));
  EXPECT_EQ(type_of("fork(dealloc (alloc 1), 5)", Lang::Aff), "nat");
  EXPECT_EQ(type_of("let (v, r) = replace(alloc 1, 2) in (fun u -> v) (dealloc r)", Lang::Aff), "nat");
  EXPECT_EQ(type_of("fun x -> if true then x + 1 else x", Lang::Aff), "nat -o nat");
  EXPECT_TRUE(rejects("if 1 then 2 else 3", Lang::Aff));
}

TEST(Generated, WellTypedByConstruction) {
  for (Lang l : {Lang::CallCC, Lang::Exc, Lang::Delim, Lang::Embed})
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      ExprPtr e = gen_program({l, 20, "nat", seed});
      std::string why;
      EXPECT_TRUE(is_nat_program(e, l, &why)) << lang_name(l) << " " << print(e) << ": " << why;
    }
}

TEST(Generated, AffineProgramsTypecheck) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    ExprPtr e = gen_program({Lang::Aff, 20, "nat", seed});
    EXPECT_NO_THROW(typecheck(e, Lang::Aff)) << print(e);
  }
  for (const char* t : {"unit", "bool"})
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      ExprPtr e = gen_program({Lang::Aff, 20, t, seed});
      EXPECT_EQ(show(typecheck(e, Lang::Aff).type), t) << print(e);
    }
}
