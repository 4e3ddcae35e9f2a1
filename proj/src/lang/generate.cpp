#include "gitree/lang/generate.hpp"

#include <algorithm>
#include <random>

namespace gitree::lang {

namespace {

enum class GT { Nat, Fun, Cont, Ref, Bool, Unit, Pair };

struct Binding {
  std::string name;
  GT type;
};
using GEnv = std::vector<Binding>;

GEnv with(GEnv env, std::string name, GT t) {
  env.push_back({std::move(name), t});
  return env;
}

class Gen {
 public:
  Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t pick(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(rng_() % n); }
  bool coin(std::size_t num, std::size_t den) { return pick(den) < num; }

  // Sizes ≥ 1 summing to total.
  std::vector<std::size_t> split(std::size_t total, std::size_t parts) {
    std::vector<std::size_t> out(parts, 1);
    for (std::size_t i = parts; i < total; ++i) ++out[pick(parts)];
    return out;
  }

  std::string fresh(const char* prefix) { return prefix + std::to_string(counter_++); }

  std::vector<std::string> vars_of(const GEnv& env, GT t) {
    std::vector<std::string> out;
    for (const auto& b : env)
      if (b.type == t && std::find_if(env.rbegin(), env.rend(), [&](const Binding& x) { return x.name == b.name; })->type == t)
        out.push_back(b.name);
    return out;
  }

  ExprPtr leaf(const GEnv& env) {
    auto vs = vars_of(env, GT::Nat);
    if (!vs.empty() && coin(1, 2)) return var(vs[pick(vs.size())]);
    return num(pick(10));
  }

  NatOp op() {
    std::size_t r = pick(6);
    return r < 3 ? NatOp::Add : r < 5 ? NatOp::Sub : NatOp::Mul;
  }

  // Terms of type nat. In λ_delim every answer type is nat.
  ExprPtr nat(Lang lang, const GEnv& env, std::size_t b) {
    if (b <= 1) return leaf(env);
    enum Choice { Leaf, Binop, If, AppLam, AppFun, AppFvar, Rec, CallCC, Throw, Try, Raise, Reset, Shift, ContApp,
                  IsPrime, Embed, Deref, AllocBind, AssignSeq };
    std::vector<std::pair<Choice, std::size_t>> opts = {{Leaf, 1}, {Binop, 4}};
    if (b >= 4) opts.push_back({If, 2});
    if (b >= 3) opts.push_back({AppLam, 2});
    if (b >= 5) opts.push_back({AppFun, 1});
    if (b >= 3 && !vars_of(env, GT::Fun).empty()) opts.push_back({AppFvar, 3});
    if (b >= 13 && lang != Lang::Aff) opts.push_back({Rec, 1});
    auto conts = vars_of(env, GT::Cont);
    auto refs = vars_of(env, GT::Ref);
    switch (lang) {
      case Lang::CallCC:
        opts.push_back({CallCC, 4});
        if (b >= 3 && !conts.empty()) opts.push_back({Throw, 5});
        break;
      case Lang::Exc:
        if (b >= 3) opts.push_back({Try, 4});
        if (!handled_.empty()) opts.push_back({Raise, 2});
        break;
      case Lang::Delim:
        opts.push_back({Reset, 3});
        opts.push_back({Shift, 3});
        if (b >= 3 && !conts.empty()) opts.push_back({ContApp, 5});
        if (b >= 3) opts.push_back({IsPrime, 1});
        break;
      case Lang::Embed:
        opts.push_back({Embed, 4});
        if (!refs.empty()) opts.push_back({Deref, 3});
        if (b >= 4) opts.push_back({AllocBind, 3});
        if (b >= 6 && !refs.empty()) opts.push_back({AssignSeq, 3});
        break;
      case Lang::Aff:
        break;
    }
    std::size_t total = 0;
    for (auto& o : opts) total += o.second;
    std::size_t r = pick(total);
    Choice c = Leaf;
    for (auto& o : opts) {
      if (r < o.second) {
        c = o.first;
        break;
      }
      r -= o.second;
    }
    switch (c) {
      case Leaf:
        return leaf(env);
      case Binop: {
        auto s = split(b - 1, 2);
        NatOp o = op();
        ExprPtr l = nat(lang, env, s[0]);
        return binop(o, l, nat(lang, env, s[1]));
      }
      case If: {
        auto s = split(b - 1, 3);
        ExprPtr cnd = nat(lang, env, s[0]);
        ExprPtr t = nat(lang, env, s[1]);
        return if_(cnd, t, nat(lang, env, s[2]));
      }
      case AppLam: {
        auto s = split(b - 2, 2);
        std::string x = fresh("x");
        ExprPtr body = nat(lang, with(env, x, GT::Nat), s[0]);
        return app(lam(x, body), nat(lang, env, s[1]));
      }
      case AppFun: {
        auto s = split(b - 3, 2);
        std::string f = fresh("f"), x = fresh("x");
        ExprPtr body = nat(lang, with(env, f, GT::Fun), s[0]);
        return app(lam(f, body), lam(x, nat(lang, with(env, x, GT::Nat), s[1])));
      }
      case AppFvar: {
        auto fs = vars_of(env, GT::Fun);
        std::string f = fs[pick(fs.size())];
        return app(var(f), nat(lang, env, b - 2));
      }
      case Rec: {
        // (rec f n = if n then E + f (n - 1) else E2) k
        auto s = split(b - 11, 2);
        std::string f = fresh("f"), n = fresh("n");
        GEnv inner = with(env, n, GT::Nat);
        ExprPtr step = binop(NatOp::Add, nat(lang, inner, s[0]), app(var(f), binop(NatOp::Sub, var(n), num(1))));
        ExprPtr body = if_(var(n), step, nat(lang, inner, s[1]));
        return app(rec(f, n, body), num(pick(4)));
      }
      case CallCC: {
        std::string k = fresh("k");
        return callcc(k, nat(lang, with(env, k, GT::Cont), b - 1));
      }
      case Throw:
        return throw_(nat(lang, env, b - 2), var(conts[pick(conts.size())]));
      case Try: {
        auto s = split(b - 1, 2);
        std::string h = fresh("h");
        std::string name = exc_name();
        handled_.push_back(name);
        ExprPtr body = nat(lang, env, s[0]);
        handled_.pop_back();
        return try_(body, name, h, nat(lang, with(env, h, GT::Nat), s[1]));
      }
      case Raise:
        return raise(handled_[pick(handled_.size())], nat(lang, env, b - 1));
      case Reset:
        return reset(nat(lang, env, b - 1));
      case Shift: {
        std::string k = fresh("k");
        return shift(k, nat(lang, with(env, k, GT::Cont), b - 1));
      }
      case ContApp:
        return contapp(var(conts[pick(conts.size())]), nat(lang, env, b - 2));
      case IsPrime:
        return app(isprime(), nat(lang, env, b - 2));
      case Embed:
        // Only a delimited body is pure.
        if (b < 3) return embed(num(pick(10)));
        return embed(reset(nat(Lang::Delim, {}, b - 2)));
      case Deref:
        return deref(var(refs[pick(refs.size())]));
      case AllocBind: {
        auto s = split(b - 3, 2);
        std::string r2 = fresh("r");
        ExprPtr body = nat(lang, with(env, r2, GT::Ref), s[0]);
        return app(lam(r2, body), alloc(nat(lang, env, s[1])));
      }
      case AssignSeq: {
        auto s = split(b - 4, 2);
        ExprPtr body = nat(lang, env, s[0]);
        ExprPtr upd = assign(var(refs[pick(refs.size())]), nat(lang, env, s[1]));
        return app(lam("_", body), upd);
      }
    }
    return leaf(env);
  }

  std::string exc_name() { return coin(1, 2) ? "A" : "B"; }

  // λ_aff: env holds the variables still available; using one removes it.
  ExprPtr take(GEnv& env, GT t) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < env.size(); ++i)
      if (env[i].type == t) idx.push_back(i);
    if (idx.empty()) return nullptr;
    std::size_t i = idx[pick(idx.size())];
    ExprPtr v = var(env[i].name);
    env.erase(env.begin() + static_cast<long>(i));
    return v;
  }

  void drop(GEnv& env, const std::string& name) {
    env.erase(std::remove_if(env.begin(), env.end(), [&](const Binding& x) { return x.name == name; }), env.end());
  }

  GEnv bind(const GEnv& env, const std::string& name, GT t) {
    GEnv out = env;
    drop(out, name);
    out.push_back({name, t});
    return out;
  }

  ExprPtr aff(GT t, GEnv& env, std::size_t b) {
    if (coin(1, 3))
      if (ExprPtr v = take(env, t)) return v;
    switch (t) {
      case GT::Bool:
        return boolean(coin(1, 2));
      case GT::Ref:
        if (ExprPtr v = take(env, t)) return v;
        return alloc(aff(GT::Nat, env, b > 2 ? b - 1 : 1));
      case GT::Pair: {
        if (b < 3) return pair(num(pick(10)), num(pick(10)));
        auto s = split(b - 1, 2);
        ExprPtr a = aff(GT::Nat, env, s[0]);
        return pair(a, aff(GT::Nat, env, s[1]));
      }
      case GT::Unit: {
        std::size_t r = pick(4);
        if (b >= 3 && r == 0) return dealloc(aff(GT::Ref, env, b - 1));
        if (b >= 4 && r == 1) {
          auto s = split(b - 1, 2);
          ExprPtr target = aff(GT::Ref, env, s[0]);
          return assign(target, aff(GT::Nat, env, s[1]));
        }
        if (b >= 4 && r == 2) {
          auto s = split(b - 2, 2);
          std::string x = fresh("x");
          GEnv inner = bind(env, x, GT::Nat);
          ExprPtr body = aff(GT::Unit, inner, s[0]);
          settle(env, inner, x);
          return app(lam(x, body), aff(GT::Nat, env, s[1]));
        }
        return unit();
      }
      default:
        break;
    }
    // nat
    if (b <= 1) {
      if (ExprPtr v = take(env, GT::Nat)) return v;
      return num(pick(10));
    }
    std::size_t r = pick(10);
    if (r < 3 && b >= 3) {
      auto s = split(b - 1, 2);
      NatOp o = op();
      ExprPtr l = aff(GT::Nat, env, s[0]);
      return binop(o, l, aff(GT::Nat, env, s[1]));
    }
    if (r == 3 && b >= 4) {
      auto s = split(b - 1, 3);
      ExprPtr c = aff(GT::Bool, env, s[0]);
      GEnv te = env, fe = env;
      ExprPtr th = aff(GT::Nat, te, s[1]);
      ExprPtr el = aff(GT::Nat, fe, s[2]);
      GEnv keep;
      for (const auto& x : env) {
        auto in = [&](const GEnv& g) {
          return std::any_of(g.begin(), g.end(), [&](const Binding& y) { return y.name == x.name; });
        };
        if (in(te) && in(fe)) keep.push_back(x);
      }
      env = keep;
      return if_(c, th, el);
    }
    if ((r == 4 || r == 5) && b >= 3) {
      static const GT arg_types[] = {GT::Nat, GT::Ref, GT::Pair, GT::Unit, GT::Bool, GT::Nat};
      GT at = arg_types[pick(6)];
      auto s = split(b - 2, 2);
      std::string x = fresh("x");
      GEnv inner = bind(env, x, at);
      ExprPtr body = aff(GT::Nat, inner, s[0]);
      settle(env, inner, x);
      return app(lam(x, body), aff(at, env, s[1]));
    }
    if (r == 6 && b >= 3) {
      auto s = split(b - 1, 2);
      ExprPtr bound = aff(GT::Pair, env, s[0]);
      std::string a = fresh("a"), c = fresh("b");
      GEnv inner = bind(bind(env, a, GT::Nat), c, GT::Nat);
      ExprPtr body = aff(GT::Nat, inner, s[1]);
      drop(inner, a);
      drop(inner, c);
      env = inner;
      return let_pair(a, c, bound, body);
    }
    if (r == 7 && b >= 3) {
      auto s = split(b - 1, 2);
      ExprPtr forked = aff(GT::Unit, env, s[0]);
      return fork(forked, aff(GT::Nat, env, s[1]));
    }
    if (r == 8 && b >= 5) {
      // let (v, r) = replace(ref, nat) in body
      auto s = split(b - 2, 3);
      ExprPtr target = aff(GT::Ref, env, s[0]);
      ExprPtr val = aff(GT::Nat, env, s[1]);
      std::string v = fresh("v"), rr = fresh("r");
      GEnv inner = bind(bind(env, v, GT::Nat), rr, GT::Ref);
      ExprPtr body = aff(GT::Nat, inner, s[2]);
      drop(inner, v);
      drop(inner, rr);
      env = inner;
      return let_pair(v, rr, replace(target, val), body);
    }
    if (ExprPtr v = take(env, GT::Nat)) return v;
    return num(pick(10));
  }

  // After a body that bound x: outer variables it used are gone.
  void settle(GEnv& env, GEnv& inner, const std::string& x) {
    drop(inner, x);
    env = inner;
  }

 private:
  std::mt19937_64 rng_;
  // Exceptions with an enclosing handler.
  std::vector<std::string> handled_;
  std::size_t counter_ = 0;
};

bool contains(const ExprPtr& e, std::initializer_list<ExprKind> kinds) {
  for (ExprKind k : kinds)
    if (e->kind == k) return true;
  for (const auto& c : e->kids)
    if (contains(c, kinds)) return true;
  return false;
}

}  // namespace

ExprPtr gen_program(const GenSpec& spec) {
  if (spec.max_size == 0) throw GenError("size must be positive");
  GT t = GT::Nat;
  if (spec.target == "unit" && spec.lang == Lang::Aff) t = GT::Unit;
  else if (spec.target == "bool" && spec.lang == Lang::Aff) t = GT::Bool;
  else if (spec.target != "nat") throw GenError("unsupported target type " + spec.target + " for " + lang_name(spec.lang));
  // A draw can overshoot the bound by a node or two; redraw from the same stream.
  Gen g(spec.seed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    GEnv env;
    ExprPtr e = spec.lang == Lang::Aff ? g.aff(t, env, spec.max_size) : g.nat(spec.lang, {}, spec.max_size);
    if (size(e) <= spec.max_size) return e;
  }
  throw GenError("no term of size <= " + std::to_string(spec.max_size) + " after 64 attempts");
}

bool has_control(const ExprPtr& e) { return contains(e, {ExprKind::CallCC, ExprKind::Throw}); }

}  // namespace gitree::lang
