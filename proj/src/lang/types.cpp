#include "gitree/lang/types.hpp"

#include <map>
#include <set>

namespace gitree::lang {

TypeError::TypeError(std::string r, const std::string& msg) : std::runtime_error("rule " + r + ": " + msg), rule(std::move(r)) {}

TypePtr resolve(TypePtr t) {
  while (t->kind == TypeKind::Var && t->link) t = t->link;
  return t;
}

namespace {

TypePtr mk(TypeKind k, TypePtr a = nullptr, TypePtr b = nullptr, TypePtr ai = nullptr, TypePtr ao = nullptr) {
  auto t = std::make_shared<Type>();
  t->kind = k;
  t->a = std::move(a);
  t->b = std::move(b);
  t->ans_in = std::move(ai);
  t->ans_out = std::move(ao);
  return t;
}

struct Namer {
  std::map<const Type*, std::string> names;
  std::string name(const Type* t) {
    auto it = names.find(t);
    if (it != names.end()) return it->second;
    std::size_t i = names.size();
    std::string n = "'";
    n += static_cast<char>('a' + i % 26);
    if (i >= 26) n += std::to_string(i / 26);
    names[t] = n;
    return n;
  }
};

std::string show_with(const TypePtr& t0, Namer& nm, bool nested) {
  TypePtr t = resolve(t0);
  auto wrap = [&](const std::string& s) { return nested ? "(" + s + ")" : s; };
  switch (t->kind) {
    case TypeKind::Var:
      return nm.name(t.get());
    case TypeKind::Nat:
      return "nat";
    case TypeKind::Bool:
      return "bool";
    case TypeKind::Unit:
      return "unit";
    case TypeKind::Arrow:
      if (t->ans_in)
        return wrap(show_with(t->a, nm, true) + "/" + show_with(t->ans_in, nm, true) + " -> " +
                    show_with(t->b, nm, true) + "/" + show_with(t->ans_out, nm, true));
      return wrap(show_with(t->a, nm, true) + " -> " + show_with(t->b, nm, false));
    case TypeKind::Lolli:
      return wrap(show_with(t->a, nm, true) + " -o " + show_with(t->b, nm, false));
    case TypeKind::Cont:
      if (t->b) return "cont(" + show_with(t->a, nm, false) + ", " + show_with(t->b, nm, false) + ")";
      return wrap("cont " + show_with(t->a, nm, true));
    case TypeKind::Ref:
      return wrap("ref " + show_with(t->a, nm, true));
    case TypeKind::Tensor:
      return wrap(show_with(t->a, nm, true) + " * " + show_with(t->b, nm, true));
  }
  return "?";
}

}  // namespace

std::string show(const TypePtr& t) {
  Namer nm;
  return show_with(t, nm, false);
}

std::string TypeResult::show() const {
  Namer nm;
  std::string s = show_with(type, nm, false);
  if (ans_in) s = show_with(ans_in, nm, false) + " ; " + s + " ; " + show_with(ans_out, nm, false);
  return s;
}

namespace {

class Checker {
 public:
  explicit Checker(Lang lang) : lang_(lang) {}

  TypePtr fresh() {
    auto t = mk(TypeKind::Var);
    t->id = next_id_++;
    return t;
  }
  TypePtr nat() { return mk(TypeKind::Nat); }

  bool occurs(const Type* v, const TypePtr& t0) {
    TypePtr t = resolve(t0);
    if (t.get() == v) return true;
    for (const TypePtr* p : {&t->a, &t->b, &t->ans_in, &t->ans_out})
      if (*p && occurs(v, *p)) return true;
    return false;
  }

  void unify(const TypePtr& x0, const TypePtr& y0, const std::string& rule) {
    TypePtr x = resolve(x0), y = resolve(y0);
    if (x == y) return;
    if (x->kind == TypeKind::Var) {
      if (occurs(x.get(), y)) throw TypeError(rule, "cyclic type " + show(x) + " = " + show(y));
      x->link = y;
      return;
    }
    if (y->kind == TypeKind::Var) return unify(y, x, rule);
    if (x->kind != y->kind || bool(x->b) != bool(y->b) || bool(x->ans_in) != bool(y->ans_in))
      throw TypeError(rule, "cannot unify " + show(x) + " with " + show(y));
    for (auto p : {&Type::a, &Type::b, &Type::ans_in, &Type::ans_out})
      if ((*x).*p) unify((*x).*p, (*y).*p, rule);
  }

  using Env = std::map<std::string, TypePtr>;

  TypePtr lookup(const Env& g, const std::string& x) {
    auto it = g.find(x);
    if (it == g.end()) throw TypeError("var", "unbound variable " + x);
    return it->second;
  }

  // λ_callcc, λ_exc and λ_embed (outside embed).
  TypePtr simple(const Env& g, const ExprPtr& e) {
    const auto& k = e->kids;
    switch (e->kind) {
      case ExprKind::Num:
        return nat();
      case ExprKind::Unit:
        return mk(TypeKind::Unit);
      case ExprKind::Var:
        return lookup(g, e->name);
      case ExprKind::Lam: {
        TypePtr s = fresh();
        Env g2 = g;
        g2[e->name] = s;
        return mk(TypeKind::Arrow, s, simple(g2, k[0]));
      }
      case ExprKind::Rec: {
        TypePtr s = fresh(), t = fresh();
        Env g2 = g;
        g2[e->name] = mk(TypeKind::Arrow, s, t);
        g2[e->name2] = s;
        unify(simple(g2, k[0]), t, "rec");
        return mk(TypeKind::Arrow, s, t);
      }
      case ExprKind::App: {
        TypePtr f = simple(g, k[0]);
        TypePtr a = simple(g, k[1]);
        TypePtr r = fresh();
        unify(f, mk(TypeKind::Arrow, a, r), "app");
        return r;
      }
      case ExprKind::BinOp:
        unify(simple(g, k[0]), nat(), "natop");
        unify(simple(g, k[1]), nat(), "natop");
        return nat();
      case ExprKind::If: {
        unify(simple(g, k[0]), nat(), "if");
        TypePtr t = simple(g, k[1]);
        unify(simple(g, k[2]), t, "if");
        return t;
      }
      case ExprKind::CallCC: {
        TypePtr t = fresh();
        Env g2 = g;
        g2[e->name] = mk(TypeKind::Cont, t);
        unify(simple(g2, k[0]), t, "callcc");
        return t;
      }
      case ExprKind::Throw: {
        TypePtr t = simple(g, k[0]);
        unify(simple(g, k[1]), mk(TypeKind::Cont, t), "throw");
        return fresh();
      }
      case ExprKind::Try: {
        TypePtr t = simple(g, k[0]);
        Env g2 = g;
        g2[e->name] = nat();
        unify(simple(g2, k[1]), t, "try");
        return t;
      }
      case ExprKind::Raise:
        unify(simple(g, k[0]), nat(), "raise");
        return fresh();
      case ExprKind::Alloc:
        return mk(TypeKind::Ref, simple(g, k[0]));
      case ExprKind::Deref: {
        TypePtr t = fresh();
        unify(simple(g, k[0]), mk(TypeKind::Ref, t), "deref");
        return t;
      }
      case ExprKind::Assign: {
        TypePtr r = simple(g, k[1]);
        unify(simple(g, k[0]), mk(TypeKind::Ref, r), "assign");
        return mk(TypeKind::Unit);
      }
      case ExprKind::Embed: {
        Checker inner(Lang::Delim);
        inner.next_id_ = next_id_;
        TypePtr t = inner.pure({}, k[0], "embed");
        next_id_ = inner.next_id_;
        unify(t, nat(), "embed");
        return t;
      }
      case ExprKind::Reset:
      case ExprKind::Shift:
      case ExprKind::ContApp:
        throw TypeError("embed", "control operators are only typed inside embed");
      default:
        throw TypeError("syntax", "unexpected " + print(e) + " in " + lang_name(lang_));
    }
  }

  struct Judgment {
    TypePtr type, ans_in, ans_out;
  };

  static bool is_pure_form(const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::Num:
      case ExprKind::Var:
      case ExprKind::Lam:
      case ExprKind::Rec:
      case ExprKind::Reset:
      case ExprKind::IsPrime:
        return true;
      default:
        return false;
    }
  }

  // Γ ⊢ₚ e : τ
  TypePtr pure(const Env& g, const ExprPtr& e, const std::string& rule = "pure") {
    const auto& k = e->kids;
    switch (e->kind) {
      case ExprKind::Num:
        return nat();
      case ExprKind::Var:
        return lookup(g, e->name);
      case ExprKind::Reset: {
        Judgment j = impure(g, k[0]);
        unify(j.type, j.ans_in, "reset");
        return j.ans_out;
      }
      case ExprKind::Lam:
      case ExprKind::Rec: {
        TypePtr s = fresh(), a = fresh(), t = fresh(), b = fresh();
        TypePtr arr = mk(TypeKind::Arrow, s, t, a, b);
        Env g2 = g;
        if (e->kind == ExprKind::Rec) g2[e->name] = arr;
        g2[e->kind == ExprKind::Rec ? e->name2 : e->name] = s;
        Judgment j = impure(g2, k[0]);
        unify(j.type, t, "rec");
        unify(j.ans_in, a, "rec");
        unify(j.ans_out, b, "rec");
        return arr;
      }
      case ExprKind::IsPrime: {
        TypePtr b = fresh();
        return mk(TypeKind::Arrow, nat(), nat(), b, b);
      }
      default:
        throw TypeError(rule, print(e) + " is not pure");
    }
  }

  // Γ; α ⊢ e : τ; β
  Judgment impure(const Env& g, const ExprPtr& e) {
    const auto& k = e->kids;
    if (is_pure_form(e)) {
      TypePtr a = fresh();
      return {pure(g, e), a, a};
    }
    switch (e->kind) {
      case ExprKind::Shift: {
        TypePtr t = fresh(), a = fresh();
        Env g2 = g;
        g2[e->name] = mk(TypeKind::Cont, t, a);
        Judgment j = impure(g2, k[0]);
        unify(j.type, j.ans_in, "shift");
        return {t, a, j.ans_out};
      }
      case ExprKind::App: {
        Judgment f = impure(g, k[0]);
        Judgment x = impure(g, k[1]);
        TypePtr s = fresh(), a = fresh(), t = fresh(), b = fresh();
        unify(f.type, mk(TypeKind::Arrow, s, t, a, b), "app");
        unify(x.type, s, "app");
        unify(x.ans_in, b, "app");
        unify(x.ans_out, f.ans_in, "app");
        return {t, a, f.ans_out};
      }
      case ExprKind::If: {
        Judgment c = impure(g, k[0]);
        Judgment t = impure(g, k[1]);
        Judgment f = impure(g, k[2]);
        unify(c.type, nat(), "if");
        unify(t.type, f.type, "if");
        unify(t.ans_in, f.ans_in, "if");
        unify(t.ans_out, f.ans_out, "if");
        unify(t.ans_out, c.ans_in, "if");
        return {t.type, t.ans_in, c.ans_out};
      }
      case ExprKind::BinOp: {
        Judgment l = impure(g, k[0]);
        Judgment r = impure(g, k[1]);
        unify(l.type, nat(), "natop");
        unify(r.type, nat(), "natop");
        unify(l.ans_out, r.ans_in, "natop");
        return {nat(), l.ans_in, r.ans_out};
      }
      case ExprKind::ContApp: {
        Judgment c = impure(g, k[0]);
        Judgment x = impure(g, k[1]);
        TypePtr t = fresh(), a = fresh();
        unify(c.type, mk(TypeKind::Cont, t, a), "contapp");
        unify(x.type, t, "contapp");
        unify(c.ans_out, x.ans_in, "contapp");
        return {a, c.ans_in, x.ans_out};
      }
      default:
        throw TypeError("syntax", "unexpected " + print(e) + " in delim");
    }
  }

  struct Affine {
    TypePtr type;
    std::set<std::string> used;
  };

  Affine join(const std::string& rule, Affine x, const Affine& y) {
    for (const auto& v : y.used)
      if (x.used.count(v)) throw TypeError(rule, "variable " + v + " used more than once");
    x.used.insert(y.used.begin(), y.used.end());
    return x;
  }

  Affine affine(const Env& g, const ExprPtr& e) {
    const auto& k = e->kids;
    switch (e->kind) {
      case ExprKind::Num:
        return {nat(), {}};
      case ExprKind::Bool:
        return {mk(TypeKind::Bool), {}};
      case ExprKind::Unit:
        return {mk(TypeKind::Unit), {}};
      case ExprKind::Var:
        return {lookup(g, e->name), {e->name}};
      case ExprKind::Lam: {
        TypePtr s = fresh();
        Env g2 = g;
        g2[e->name] = s;
        Affine b = affine(g2, k[0]);
        b.used.erase(e->name);
        return {mk(TypeKind::Lolli, s, b.type), b.used};
      }
      case ExprKind::App: {
        Affine f = affine(g, k[0]);
        Affine a = affine(g, k[1]);
        TypePtr r = fresh();
        unify(f.type, mk(TypeKind::Lolli, a.type, r), "app");
        Affine out = join("app", f, a);
        out.type = r;
        return out;
      }
      case ExprKind::Pair: {
        Affine a = affine(g, k[0]);
        Affine b = affine(g, k[1]);
        Affine out = join("pair", a, b);
        out.type = mk(TypeKind::Tensor, a.type, b.type);
        return out;
      }
      case ExprKind::LetPair: {
        Affine bound = affine(g, k[0]);
        TypePtr t1 = fresh(), t2 = fresh();
        unify(bound.type, mk(TypeKind::Tensor, t1, t2), "let-pair");
        Env g2 = g;
        g2[e->name] = t1;
        g2[e->name2] = t2;
        Affine body = affine(g2, k[1]);
        body.used.erase(e->name);
        body.used.erase(e->name2);
        Affine out = join("let-pair", bound, body);
        out.type = body.type;
        return out;
      }
      case ExprKind::Alloc: {
        Affine a = affine(g, k[0]);
        return {mk(TypeKind::Ref, a.type), a.used};
      }
      case ExprKind::Dealloc: {
        Affine a = affine(g, k[0]);
        unify(a.type, mk(TypeKind::Ref, fresh()), "dealloc");
        return {mk(TypeKind::Unit), a.used};
      }
      case ExprKind::Replace: {
        Affine l = affine(g, k[0]);
        Affine v = affine(g, k[1]);
        TypePtr t1 = fresh();
        unify(l.type, mk(TypeKind::Ref, t1), "replace");
        Affine out = join("replace", l, v);
        out.type = mk(TypeKind::Tensor, t1, mk(TypeKind::Ref, v.type));
        return out;
      }
      case ExprKind::Assign: {
        Affine l = affine(g, k[0]);
        Affine v = affine(g, k[1]);
        unify(l.type, mk(TypeKind::Ref, fresh()), "assign");
        Affine out = join("assign", l, v);
        out.type = mk(TypeKind::Unit);
        return out;
      }
      case ExprKind::Fork: {
        Affine a = affine(g, k[0]);
        unify(a.type, mk(TypeKind::Unit), "fork");
        Affine b = affine(g, k[1]);
        Affine out = join("fork", a, b);
        out.type = b.type;
        return out;
      }
      case ExprKind::BinOp: {
        Affine a = affine(g, k[0]);
        Affine b = affine(g, k[1]);
        unify(a.type, nat(), "natop");
        unify(b.type, nat(), "natop");
        Affine out = join("natop", a, b);
        out.type = nat();
        return out;
      }
      case ExprKind::If: {
        Affine c = affine(g, k[0]);
        unify(c.type, mk(TypeKind::Bool), "if");
        Affine t = affine(g, k[1]);
        Affine f = affine(g, k[2]);
        unify(t.type, f.type, "if");
        Affine branches{t.type, t.used};
        branches.used.insert(f.used.begin(), f.used.end());
        Affine out = join("if", c, branches);
        out.type = t.type;
        return out;
      }
      default:
        throw TypeError("syntax", "unexpected " + print(e) + " in aff");
    }
  }

 private:
  Lang lang_;
  int next_id_ = 0;
};

}  // namespace

TypeResult typecheck(const ExprPtr& e, Lang lang) {
  Checker c(lang);
  switch (lang) {
    case Lang::Delim: {
      auto j = c.impure({}, e);
      return {j.type, j.ans_in, j.ans_out};
    }
    case Lang::Aff:
      return {c.affine({}, e).type, nullptr, nullptr};
    default:
      return {c.simple({}, e), nullptr, nullptr};
  }
}

TypePtr typecheck_delim_pure(const ExprPtr& e) {
  Checker c(Lang::Delim);
  return c.pure({}, e);
}

bool is_nat_program(const ExprPtr& e, Lang lang, std::string* why) {
  try {
    TypeResult r = typecheck(e, lang);
    auto is_nat = [](const TypePtr& t) {
      TypePtr x = resolve(t);
      if (x->kind == TypeKind::Var) x->link = std::make_shared<Type>(Type{TypeKind::Nat});
      return resolve(t)->kind == TypeKind::Nat;
    };
    bool ok = is_nat(r.type);
    if (r.ans_in) ok = ok && is_nat(r.ans_in) && is_nat(r.ans_out);
    if (!ok && why) *why = "program type is " + r.show() + ", not nat";
    return ok;
  } catch (const TypeError& err) {
    if (why) *why = err.what();
    return false;
  }
}

}  // namespace gitree::lang
