#include "gitree/bisim.hpp"

#include "gitree/effects.hpp"

namespace gitree {

const std::vector<OpDecl>& builtin_signature() {
  static const std::vector<OpDecl> sig = [] {
    std::vector<OpDecl> out;
    for (const Reifier& r : {store::reifier(), callcc::reifier(), exc::reifier(), delim::reifier(), fork::reifier()})
      out.insert(out.end(), r.ops.begin(), r.ops.end());
    return out;
  }();
  return sig;
}

namespace {

struct Bisim {
  const std::vector<GITree>& probes;
  const BisimOptions& opts;

  GITree strip(GITree t) const {
    for (std::size_t i = 0; i < opts.max_skip && t.is_tau(); ++i) t = t.rest().force();
    return t;
  }

  const Arity* output_arity(const OpId& id) const {
    const auto& sig = opts.signature ? *opts.signature : builtin_signature();
    for (const OpDecl& d : sig)
      if (d.id == id) return &d.output;
    return nullptr;
  }

  std::vector<Payload> output_probes(const Arity& a) const {
    using K = Arity::Kind;
    std::vector<Payload> out;
    switch (a.kind) {
      case K::Unit:
        out.push_back(Payload::unit());
        break;
      case K::Loc:
        out.push_back(Payload::loc(Location{0}));
        out.push_back(Payload::loc(Location{1}));
        break;
      case K::Ground:
        for (const GITree& p : probes)
          if (p.is_ret()) out.push_back(Payload::ground(p.ground()));
        break;
      case K::Tree:
        for (const GITree& p : probes) out.push_back(Payload::tree(next(p)));
        break;
      default:
        break;
    }
    return out;
  }

  bool ground(const GroundValue& x, const GroundValue& y, std::size_t depth) const {
    auto eq = ground_equal(x, y);
    if (eq) return *eq;
    const PairValue& p = x.pair();
    const PairValue& q = y.pair();
    return trees(p.first, q.first, depth) && trees(p.second, q.second, depth);
  }

  bool payload(const Payload& x, const Payload& y, std::size_t depth) const {
    if (x.value.index() != y.value.index()) return false;
    switch (x.value.index()) {
      case 0:
        return ground(x.as_ground(), y.as_ground(), depth);
      case 1:
        return depth == 0 || trees(x.as_tree().force(), y.as_tree().force(), depth - 1);
      case 2:
        if (depth == 0) return true;
        for (const GITree& p : probes)
          if (!trees(x.as_kfun()(next(p)).force(), y.as_kfun()(next(p)).force(), depth - 1)) return false;
        return true;
      case 3:
        if (depth == 0) return true;
        for (const GITree& p : probes)
          if (!trees(x.as_later_fn().force()(p), y.as_later_fn().force()(p), depth - 1)) return false;
        return true;
      case 4:
        return depth == 0 ||
               trees(x.as_callback()(identity_k()).force(), y.as_callback()(identity_k()).force(), depth - 1);
      case 5:
        if (depth == 0) return true;
        for (const GITree& p : probes) {
          auto [r1, v1] = x.as_atomic().force()(p);
          auto [r2, v2] = y.as_atomic().force()(p);
          if (!trees(r1, r2, depth - 1) || !trees(v1, v2, depth - 1)) return false;
        }
        return true;
      case 6:
        return x.as_exc() == y.as_exc();
      case 7: {
        if (x.items().size() != y.items().size()) return false;
        for (std::size_t i = 0; i < x.items().size(); ++i)
          if (!payload(x.items()[i], y.items()[i], depth)) return false;
        return true;
      }
    }
    return false;
  }

  bool trees(GITree a, GITree b, std::size_t depth) const {
    if (opts.step_insensitive) {
      a = strip(a);
      b = strip(b);
    }
    if (a.head() != b.head()) return false;
    switch (a.head()) {
      case GITree::Head::Ret:
        return ground(a.ground(), b.ground(), depth);
      case GITree::Head::Err:
        return a.error() == b.error();
      case GITree::Head::Fun:
        if (depth == 0) return true;
        for (const GITree& p : probes)
          if (!trees(a.fun().force()(p), b.fun().force()(p), depth - 1)) return false;
        return true;
      case GITree::Head::Tau:
        return depth == 0 || trees(a.rest().force(), b.rest().force(), depth - 1);
      case GITree::Head::Vis: {
        if (a.op() != b.op()) return false;
        if (!payload(a.input(), b.input(), depth)) return false;
        if (depth == 0) return true;
        const Arity* out = output_arity(a.op());
        if (!out) return true;
        for (const Payload& y : output_probes(*out))
          if (!trees(a.cont()(y).force(), b.cont()(y).force(), depth - 1)) return false;
        return true;
      }
    }
    return false;
  }
};

}  // namespace

bool bisim_probe(const GITree& a, const GITree& b, std::size_t depth, const std::vector<GITree>& probes,
                 const BisimOptions& opts) {
  std::vector<GITree> ps = probes;
  if (ps.empty()) ps = {ret_nat(0), ret_nat(1)};
  return Bisim{ps, opts}.trees(a, b, depth);
}

}  // namespace gitree
