#include "gitree/core.hpp"

#include <sstream>
#include <stdexcept>

namespace gitree {

namespace detail {

struct RetNode {
  GroundValue ground;
};
struct FunNode {
  LaterFn fn;
};
struct ErrNode {
  ErrorKind kind;
};
struct TauNode {
  LaterTree rest;
};
struct VisNode {
  OpId op;
  Payload input;
  Cont cont;
};

struct Node {
  std::variant<RetNode, FunNode, ErrNode, TauNode, VisNode> v;
};

}  // namespace detail

using detail::Node;

GroundValue GroundValue::pair(GITree a, GITree b) {
  GroundValue g;
  g.v_ = std::make_shared<const PairValue>(PairValue{std::move(a), std::move(b)});
  return g;
}

namespace {

std::string render_value_tree(const GITree& t) {
  if (t.is_ret()) return t.ground().render();
  if (t.is_fun()) return "<fun>";
  return "<" + t.describe() + ">";
}

}  // namespace

std::string GroundValue::render() const {
  if (is_nat()) return nat().str();
  if (is_unit()) return "()";
  if (is_loc()) return "l" + std::to_string(loc().index);
  const PairValue& p = pair();
  return "(" + render_value_tree(p.first) + ", " + render_value_tree(p.second) + ")";
}

std::optional<bool> ground_equal(const GroundValue& a, const GroundValue& b) {
  if (a.is_nat() && b.is_nat()) return a.nat() == b.nat();
  if (a.is_unit() && b.is_unit()) return true;
  if (a.is_loc() && b.is_loc()) return a.loc() == b.loc();
  if (a.is_pair() && b.is_pair()) {
    const PairValue& p = a.pair();
    const PairValue& q = b.pair();
    if (!p.first.is_ret() || !p.second.is_ret() || !q.first.is_ret() || !q.second.is_ret())
      return std::nullopt;
    auto x = ground_equal(p.first.ground(), q.first.ground());
    auto y = ground_equal(p.second.ground(), q.second.ground());
    if (!x || !y) return std::nullopt;
    return *x && *y;
  }
  return false;
}

std::string ErrorKind::name() const {
  switch (tag) {
    case Tag::RunTime:
      return "RunTime";
    case Tag::Lin:
      return "Lin";
    case Tag::Custom:
      return custom;
  }
  return "?";
}

std::string Arity::str() const {
  switch (kind) {
    case Kind::Empty:
      return "0";
    case Kind::Unit:
      return "1";
    case Kind::Ground:
      return "A";
    case Kind::Loc:
      return "Loc";
    case Kind::Tree:
      return "▷IT";
    case Kind::KFun:
      return "▷IT→▷IT";
    case Kind::LaterFun:
      return "▷(IT→IT)";
    case Kind::Callback:
      return "(▷IT→▷IT)→▷IT";
    case Kind::Atomic:
      return "▷(IT→IT×IT)";
    case Kind::Exc:
      return "Exc";
    case Kind::Tuple: {
      std::string s = "(";
      for (std::size_t i = 0; i < items.size(); ++i) s += (i ? " × " : "") + items[i].str();
      return s + ")";
    }
  }
  return "?";
}

bool conforms(const Payload& p, const Arity& a) {
  using K = Arity::Kind;
  switch (a.kind) {
    case K::Empty:
      return false;
    case K::Unit:
      return p.value.index() == 0 && p.as_ground().is_unit();
    case K::Ground:
      return p.value.index() == 0;
    case K::Loc:
      return p.value.index() == 0 && p.as_ground().is_loc();
    case K::Tree:
      return p.value.index() == 1 && p.as_tree().valid();
    case K::KFun:
      return p.value.index() == 2 && static_cast<bool>(p.as_kfun());
    case K::LaterFun:
      return p.value.index() == 3 && p.as_later_fn().valid();
    case K::Callback:
      return p.value.index() == 4 && static_cast<bool>(p.as_callback());
    case K::Atomic:
      return p.value.index() == 5 && p.as_atomic().valid();
    case K::Exc:
      return p.value.index() == 6;
    case K::Tuple: {
      if (p.value.index() != 7) return false;
      const auto& xs = p.items();
      if (xs.size() != a.items.size()) return false;
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (!conforms(xs[i], a.items[i])) return false;
      return true;
    }
  }
  return false;
}

GITree::Head GITree::head() const { return static_cast<Head>(node_->v.index()); }

const GroundValue& GITree::ground() const { return std::get<detail::RetNode>(node_->v).ground; }
const LaterFn& GITree::fun() const { return std::get<detail::FunNode>(node_->v).fn; }
const ErrorKind& GITree::error() const { return std::get<detail::ErrNode>(node_->v).kind; }
const LaterTree& GITree::rest() const { return std::get<detail::TauNode>(node_->v).rest; }
const OpId& GITree::op() const { return std::get<detail::VisNode>(node_->v).op; }
const Payload& GITree::input() const { return std::get<detail::VisNode>(node_->v).input; }
const Cont& GITree::cont() const { return std::get<detail::VisNode>(node_->v).cont; }

std::string GITree::describe() const {
  switch (head()) {
    case Head::Ret:
      return "Ret " + ground().render();
    case Head::Fun:
      return "Fun";
    case Head::Err:
      return "Err " + error().name();
    case Head::Tau:
      return "Tau";
    case Head::Vis:
      return "Vis " + op().str();
  }
  return "?";
}

GITree ret(GroundValue g) {
  return GITree(std::make_shared<const Node>(Node{detail::RetNode{std::move(g)}}));
}
GITree ret_nat(Nat n) { return ret(GroundValue(std::move(n))); }
GITree ret_unit() { return ret(GroundValue(UnitValue{})); }
GITree ret_loc(Location l) { return ret(GroundValue(l)); }
GITree fun(LaterFn f) { return GITree(std::make_shared<const Node>(Node{detail::FunNode{std::move(f)}})); }
GITree fun_now(ValueFn f) { return fun(LaterFn::now(std::move(f))); }
GITree err(ErrorKind e) { return GITree(std::make_shared<const Node>(Node{detail::ErrNode{std::move(e)}})); }
GITree tau(LaterTree t) { return GITree(std::make_shared<const Node>(Node{detail::TauNode{std::move(t)}})); }
GITree tick(GITree t) { return tau(next(std::move(t))); }
GITree vis(OpId op, Payload input, Cont k) {
  return GITree(std::make_shared<const Node>(Node{detail::VisNode{std::move(op), std::move(input), std::move(k)}}));
}

GITree guarded_fix(std::function<GITree(const LaterTree&)> f) {
  auto shared = std::make_shared<std::function<GITree(const LaterTree&)>>(std::move(f));
  // Each unfolding builds a fresh Later, so no reference cycle is created.
  struct Fix {
    static GITree go(const std::shared_ptr<std::function<GITree(const LaterTree&)>>& g) {
      return (*g)(LaterTree::delay([g] { return go(g); }));
    }
  };
  return Fix::go(shared);
}

namespace {

// Shared skeleton of get_val/get_fun/get_ret: f sees value leaves only.
GITree commute(const GITree& a, const std::shared_ptr<const ValueFn>& f) {
  switch (a.head()) {
    case GITree::Head::Ret:
    case GITree::Head::Fun:
      return (*f)(a);
    case GITree::Head::Err:
      return a;
    case GITree::Head::Tau:
      return tau(a.rest().map([f](const GITree& t) { return commute(t, f); }));
    case GITree::Head::Vis: {
      Cont k = a.cont();
      return vis(a.op(), a.input(), [k, f](const Payload& y) {
        return k(y).map([f](const GITree& t) { return commute(t, f); });
      });
    }
  }
  throw std::logic_error("bad head");
}

}  // namespace

GITree get_val(const GITree& a, ValueFn f) { return commute(a, std::make_shared<const ValueFn>(std::move(f))); }

GITree get_fun(const GITree& a, std::function<GITree(const LaterFn&)> f) {
  return get_val(a, [f = std::move(f)](const GITree& v) {
    if (v.is_fun()) return f(v.fun());
    return err(ErrorKind::runtime());
  });
}

GITree get_ret(const GITree& a, std::function<GITree(const GroundValue&)> f) {
  return get_val(a, [f = std::move(f)](const GITree& v) {
    if (v.is_ret()) return f(v.ground());
    return err(ErrorKind::runtime());
  });
}

GITree get_nat(const GITree& a, std::function<GITree(const Nat&)> f) {
  return get_ret(a, [f = std::move(f)](const GroundValue& g) {
    if (g.is_nat()) return f(g.nat());
    return err(ErrorKind::runtime());
  });
}

GITree app(const GITree& a, const GITree& b) {
  return get_val(b, [a](const GITree& bv) {
    return get_fun(a, [bv](const LaterFn& g) {
      LaterFn gg = g;
      return tau(LaterTree::delay([gg, bv] { return gg.force()(bv); }));
    });
  });
}

GITree natop_lift(std::function<Nat(const Nat&, const Nat&)> f, const GITree& a, const GITree& b) {
  auto fs = std::make_shared<const std::function<Nat(const Nat&, const Nat&)>>(std::move(f));
  return get_val(b, [fs, a](const GITree& bv) {
    return get_val(a, [fs, bv](const GITree& av) {
      if (av.is_ret() && bv.is_ret() && av.ground().is_nat() && bv.ground().is_nat())
        return ret_nat((*fs)(av.ground().nat(), bv.ground().nat()));
      return err(ErrorKind::runtime());
    });
  });
}

Nat apply_natop(NatOp op, const Nat& a, const Nat& b) {
  switch (op) {
    case NatOp::Add:
      return a + b;
    case NatOp::Sub:
      return a > b ? Nat(a - b) : Nat(0);
    case NatOp::Mul:
      return a * b;
  }
  return 0;
}

const char* natop_symbol(NatOp op) {
  switch (op) {
    case NatOp::Add:
      return "+";
    case NatOp::Sub:
      return "-";
    case NatOp::Mul:
      return "*";
  }
  return "?";
}

GITree natop(NatOp op, const GITree& a, const GITree& b) {
  return natop_lift([op](const Nat& x, const Nat& y) { return apply_natop(op, x, y); }, a, b);
}

GITree if_then_else(const GITree& c, GITree then_branch, GITree else_branch) {
  return get_nat(c, [t = std::move(then_branch), e = std::move(else_branch)](const Nat& n) {
    return n != 0 ? t : e;
  });
}

GITree seq(const GITree& a, GITree b) {
  return get_val(a, [b = std::move(b)](const GITree&) { return b; });
}

KFun lift(ValueFn f) {
  auto fs = std::make_shared<const ValueFn>(std::move(f));
  return [fs](const LaterTree& x) { return x.map([fs](const GITree& t) { return (*fs)(t); }); };
}

KFun identity_k() {
  return [](const LaterTree& x) { return x; };
}

LaterTree apply_later(const LaterFn& f, const LaterTree& x) {
  return LaterTree::delay([f, x] { return f.force()(x.force()); });
}

LaterFn to_later_fn(KFun f) {
  return LaterFn::now([f = std::move(f)](const GITree& x) { return tau(f(next(x))); });
}

GITree cont_value(KFun f) { return fun(to_later_fn(std::move(f))); }

}  // namespace gitree
