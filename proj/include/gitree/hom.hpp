#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gitree/core.hpp"

namespace gitree {

// Closed algebra of homomorphisms IT → IT (evaluation contexts).
class HomCtx {
 public:
  enum class Kind { Identity, Compose, AppLeft, AppRight, GetVal, GetFun, GetRet, NatopLeft, NatopRight, PopPrime };

  static HomCtx identity();
  // outer ∘ inner
  static HomCtx compose(HomCtx outer, HomCtx inner);
  // λx. APP(x, v); v must be a value.
  static HomCtx app_left(GITree v);
  // λx. APP(f, x)
  static HomCtx app_right(GITree f);
  static HomCtx get_val(std::string label, ValueFn f);
  static HomCtx get_fun(std::string label, std::function<GITree(const LaterFn&)> f);
  static HomCtx get_ret(std::string label, std::function<GITree(const GroundValue&)> f);
  // λx. NATOP(op, x, v); v must be a value.
  static HomCtx natop_left(NatOp op, GITree v);
  // λx. NATOP(op, a, x)
  static HomCtx natop_right(NatOp op, GITree a);
  static HomCtx pop_prime();

  Kind kind() const;
  GITree operator()(const GITree& a) const;
  // ▷κ, the later-lifting used by continuation stacks.
  KFun lifted() const;
  std::string describe() const;

 private:
  struct Node;
  explicit HomCtx(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

GITree hom_apply(const HomCtx& k, const GITree& a);

// All constructor shapes, each instantiated once; used by the law suites.
std::vector<HomCtx> sample_homs();

}  // namespace gitree
