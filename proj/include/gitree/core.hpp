#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gitree/later.hpp"

namespace gitree {

using Nat = boost::multiprecision::cpp_int;

struct Location {
  std::uint64_t index = 0;
  auto operator<=>(const Location&) const = default;
};

struct UnitValue {
  bool operator==(const UnitValue&) const = default;
};

class GITree;
struct PairValue;

class GroundValue {
 public:
  GroundValue() : v_(Nat(0)) {}
  GroundValue(Nat n) : v_(std::move(n)) {}
  GroundValue(UnitValue u) : v_(u) {}
  GroundValue(Location l) : v_(l) {}
  static GroundValue pair(GITree a, GITree b);

  bool is_nat() const { return std::holds_alternative<Nat>(v_); }
  bool is_unit() const { return std::holds_alternative<UnitValue>(v_); }
  bool is_loc() const { return std::holds_alternative<Location>(v_); }
  bool is_pair() const { return std::holds_alternative<std::shared_ptr<const PairValue>>(v_); }

  const Nat& nat() const { return std::get<Nat>(v_); }
  Location loc() const { return std::get<Location>(v_); }
  const PairValue& pair() const { return *std::get<std::shared_ptr<const PairValue>>(v_); }

  std::string render() const;

 private:
  std::variant<Nat, UnitValue, Location, std::shared_ptr<const PairValue>> v_;
};

// Equality of ground heads. Pairs compare componentwise when both components
// are Ret; nullopt means "not comparable" (a component is a function).
std::optional<bool> ground_equal(const GroundValue& a, const GroundValue& b);

struct ErrorKind {
  enum class Tag { RunTime, Lin, Custom };
  Tag tag = Tag::RunTime;
  std::string custom;

  static ErrorKind runtime() { return {}; }
  static ErrorKind lin() { return {Tag::Lin, {}}; }
  static ErrorKind tagged(std::string t) { return {Tag::Custom, std::move(t)}; }
  std::string name() const;
  bool operator==(const ErrorKind&) const = default;
};

struct OpId {
  std::string family;
  std::string name;
  auto operator<=>(const OpId&) const = default;
  std::string str() const { return family + "/" + name; }
};

struct ExcName {
  std::string name;
  auto operator<=>(const ExcName&) const = default;
};

using LaterTree = Later<GITree>;
using ValueFn = std::function<GITree(const GITree&)>;
using LaterFn = Later<ValueFn>;
// ▷IT → ▷IT
using KFun = std::function<LaterTree(const LaterTree&)>;
// (▷IT → ▷IT) → ▷IT
using Callback = std::function<LaterTree(const KFun&)>;
using AtomicFn = std::function<std::pair<GITree, GITree>(const GITree&)>;
using LaterAtomicFn = Later<AtomicFn>;

struct Payload;
using PayloadList = std::vector<Payload>;

// Effect inputs and outputs.
struct Payload {
  using Variant =
      std::variant<GroundValue, LaterTree, KFun, LaterFn, Callback, LaterAtomicFn, ExcName, PayloadList>;
  Variant value;

  static Payload ground(GroundValue g) { return {Variant(std::in_place_index<0>, std::move(g))}; }
  static Payload unit() { return ground(UnitValue{}); }
  static Payload loc(Location l) { return ground(l); }
  static Payload tree(LaterTree t) { return {Variant(std::in_place_index<1>, std::move(t))}; }
  static Payload kfun(KFun f) { return {Variant(std::in_place_index<2>, std::move(f))}; }
  static Payload later_fn(LaterFn f) { return {Variant(std::in_place_index<3>, std::move(f))}; }
  static Payload callback(Callback f) { return {Variant(std::in_place_index<4>, std::move(f))}; }
  static Payload atomic(LaterAtomicFn f) { return {Variant(std::in_place_index<5>, std::move(f))}; }
  static Payload exc(ExcName e) { return {Variant(std::in_place_index<6>, std::move(e))}; }
  static Payload tuple(PayloadList items) { return {Variant(std::in_place_index<7>, std::move(items))}; }

  const GroundValue& as_ground() const { return std::get<0>(value); }
  const LaterTree& as_tree() const { return std::get<1>(value); }
  const KFun& as_kfun() const { return std::get<2>(value); }
  const LaterFn& as_later_fn() const { return std::get<3>(value); }
  const Callback& as_callback() const { return std::get<4>(value); }
  const LaterAtomicFn& as_atomic() const { return std::get<5>(value); }
  const ExcName& as_exc() const { return std::get<6>(value); }
  const PayloadList& items() const { return std::get<7>(value); }
  const Payload& at(std::size_t i) const { return items().at(i); }
};

struct Arity {
  enum class Kind { Empty, Unit, Ground, Loc, Tree, KFun, LaterFun, Callback, Atomic, Exc, Tuple };
  Kind kind = Kind::Unit;
  std::vector<Arity> items;

  static Arity of(Kind k) { return {k, {}}; }
  static Arity tuple(std::vector<Arity> xs) { return {Kind::Tuple, std::move(xs)}; }
  std::string str() const;
  bool operator==(const Arity&) const = default;
};

bool conforms(const Payload& p, const Arity& a);

using Cont = std::function<LaterTree(const Payload&)>;

namespace detail {
struct Node;
}

class GITree {
 public:
  enum class Head { Ret, Fun, Err, Tau, Vis };

  Head head() const;
  bool is_value() const { return head() == Head::Ret || head() == Head::Fun; }
  bool is_ret() const { return head() == Head::Ret; }
  bool is_fun() const { return head() == Head::Fun; }
  bool is_err() const { return head() == Head::Err; }
  bool is_tau() const { return head() == Head::Tau; }
  bool is_vis() const { return head() == Head::Vis; }

  const GroundValue& ground() const;
  const LaterFn& fun() const;
  const ErrorKind& error() const;
  const LaterTree& rest() const;
  const OpId& op() const;
  const Payload& input() const;
  const Cont& cont() const;

  const void* identity() const { return node_.get(); }
  // One-line rendering of the head, e.g. "Ret 3", "Vis store/read".
  std::string describe() const;

  explicit GITree(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}

 private:
  std::shared_ptr<const detail::Node> node_;
};

struct PairValue {
  GITree first;
  GITree second;
};

// Constructors.
GITree ret(GroundValue g);
GITree ret_nat(Nat n);
GITree ret_unit();
GITree ret_loc(Location l);
GITree fun(LaterFn f);
GITree fun_now(ValueFn f);
GITree err(ErrorKind e);
GITree tau(LaterTree t);
GITree tick(GITree t);
GITree vis(OpId op, Payload input, Cont k);

inline LaterTree next(GITree t) { return LaterTree::now(std::move(t)); }

// fix f = f(▷(fix f)); every unfolding sits under one Later.
GITree guarded_fix(std::function<GITree(const LaterTree&)> f);

// Sequencing and application.
GITree get_val(const GITree& a, ValueFn f);
GITree get_fun(const GITree& a, std::function<GITree(const LaterFn&)> f);
GITree get_ret(const GITree& a, std::function<GITree(const GroundValue&)> f);
GITree get_nat(const GITree& a, std::function<GITree(const Nat&)> f);
GITree app(const GITree& a, const GITree& b);
GITree natop_lift(std::function<Nat(const Nat&, const Nat&)> f, const GITree& a, const GITree& b);
GITree if_then_else(const GITree& c, GITree then_branch, GITree else_branch);
GITree seq(const GITree& a, GITree b);

enum class NatOp { Add, Sub, Mul };
Nat apply_natop(NatOp op, const Nat& a, const Nat& b);
const char* natop_symbol(NatOp op);
GITree natop(NatOp op, const GITree& a, const GITree& b);

// Later-level plumbing between the arities ▷IT→▷IT and ▷(IT→IT).
KFun lift(ValueFn f);
KFun identity_k();
LaterTree apply_later(const LaterFn& f, const LaterTree& x);
// f′ = Next(λx. Tau(f(Next x)))
LaterFn to_later_fn(KFun f);
// The semantic value Fun(Next(λy. Tau(f(Next y)))).
GITree cont_value(KFun f);

}  // namespace gitree
