#include "gitree/hom.hpp"

#include <stdexcept>

#include "gitree/effects.hpp"

namespace gitree {

struct HomCtx::Node {
  explicit Node(Kind k, std::string l = {}) : kind(k), label(std::move(l)) {}
  Kind kind;
  std::string label;
  NatOp op = NatOp::Add;
  std::optional<GITree> operand;
  ValueFn val;
  std::function<GITree(const LaterFn&)> funf;
  std::function<GITree(const GroundValue&)> retf;
  std::shared_ptr<const Node> outer, inner;
};

HomCtx HomCtx::identity() { return HomCtx(std::make_shared<const Node>(Node(Kind::Identity))); }

HomCtx HomCtx::compose(HomCtx outer, HomCtx inner) {
  if (outer.kind() == Kind::Identity) return inner;
  if (inner.kind() == Kind::Identity) return outer;
  Node n(Kind::Compose);
  n.outer = outer.node_;
  n.inner = inner.node_;
  return HomCtx(std::make_shared<const Node>(std::move(n)));
}

HomCtx HomCtx::app_left(GITree v) {
  if (!v.is_value()) throw std::invalid_argument("app_left needs a value operand");
  Node n(Kind::AppLeft);
  n.operand = std::move(v);
  return HomCtx(std::make_shared<const Node>(std::move(n)));
}

HomCtx HomCtx::app_right(GITree f) {
  Node n(Kind::AppRight);
  n.operand = std::move(f);
  return HomCtx(std::make_shared<const Node>(std::move(n)));
}

HomCtx HomCtx::get_val(std::string label, ValueFn f) {
  Node n(Kind::GetVal, std::move(label));
  n.val = std::move(f);
  return HomCtx(std::make_shared<const Node>(std::move(n)));
}

HomCtx HomCtx::get_fun(std::string label, std::function<GITree(const LaterFn&)> f) {
  Node n(Kind::GetFun, std::move(label));
  n.funf = std::move(f);
  return HomCtx(std::make_shared<const Node>(std::move(n)));
}

HomCtx HomCtx::get_ret(std::string label, std::function<GITree(const GroundValue&)> f) {
  Node n(Kind::GetRet, std::move(label));
  n.retf = std::move(f);
  return HomCtx(std::make_shared<const Node>(std::move(n)));
}

HomCtx HomCtx::natop_left(NatOp op, GITree v) {
  if (!v.is_value()) throw std::invalid_argument("natop_left needs a value operand");
  Node n(Kind::NatopLeft);
  n.op = op;
  n.operand = std::move(v);
  return HomCtx(std::make_shared<const Node>(std::move(n)));
}

HomCtx HomCtx::natop_right(NatOp op, GITree a) {
  Node n(Kind::NatopRight);
  n.op = op;
  n.operand = std::move(a);
  return HomCtx(std::make_shared<const Node>(std::move(n)));
}

HomCtx HomCtx::pop_prime() { return HomCtx(std::make_shared<const Node>(Node(Kind::PopPrime))); }

HomCtx::Kind HomCtx::kind() const { return node_->kind; }

GITree HomCtx::operator()(const GITree& a) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Identity:
      return a;
    case Kind::Compose:
      return HomCtx(n.outer)(HomCtx(n.inner)(a));
    case Kind::AppLeft:
      return app(a, *n.operand);
    case Kind::AppRight:
      return app(*n.operand, a);
    case Kind::GetVal:
      return gitree::get_val(a, n.val);
    case Kind::GetFun:
      return gitree::get_fun(a, n.funf);
    case Kind::GetRet:
      return gitree::get_ret(a, n.retf);
    case Kind::NatopLeft:
      return natop(n.op, a, *n.operand);
    case Kind::NatopRight:
      return natop(n.op, *n.operand, a);
    case Kind::PopPrime:
      return delim::pop_prime(a);
  }
  throw std::logic_error("bad hom");
}

KFun HomCtx::lifted() const {
  HomCtx self = *this;
  return [self](const LaterTree& x) { return x.map([self](const GITree& t) { return self(t); }); };
}

std::string HomCtx::describe() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Identity:
      return "id";
    case Kind::Compose:
      return HomCtx(n.outer).describe() + " . " + HomCtx(n.inner).describe();
    case Kind::AppLeft:
      return "app([], " + n.operand->describe() + ")";
    case Kind::AppRight:
      return "app(" + n.operand->describe() + ", [])";
    case Kind::GetVal:
      return "get_val([], " + n.label + ")";
    case Kind::GetFun:
      return "get_fun([], " + n.label + ")";
    case Kind::GetRet:
      return "get_ret([], " + n.label + ")";
    case Kind::NatopLeft:
      return std::string("natop([] ") + natop_symbol(n.op) + " " + n.operand->describe() + ")";
    case Kind::NatopRight:
      return "natop(" + n.operand->describe() + " " + natop_symbol(n.op) + " [])";
    case Kind::PopPrime:
      return "pop'";
  }
  return "?";
}

GITree hom_apply(const HomCtx& k, const GITree& a) { return k(a); }

std::vector<HomCtx> sample_homs() {
  GITree id_fun = fun_now([](const GITree& x) { return x; });
  return {
      HomCtx::identity(),
      HomCtx::compose(HomCtx::natop_left(NatOp::Add, ret_nat(1)), HomCtx::app_right(id_fun)),
      HomCtx::app_left(ret_nat(3)),
      HomCtx::app_right(id_fun),
      HomCtx::get_val("succ", [](const GITree& v) { return natop(NatOp::Add, v, ret_nat(1)); }),
      HomCtx::get_fun("apply-to-2", [](const LaterFn& f) { return f.force()(ret_nat(2)); }),
      HomCtx::get_ret("double", [](const GroundValue& g) { return g.is_nat() ? ret_nat(g.nat() * 2) : ret_unit(); }),
      HomCtx::natop_left(NatOp::Mul, ret_nat(5)),
      HomCtx::natop_right(NatOp::Sub, ret_nat(10)),
      HomCtx::pop_prime(),
  };
}

}  // namespace gitree
