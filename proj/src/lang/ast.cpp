#include "gitree/lang/ast.hpp"

#include <functional>
#include <sstream>

namespace gitree::lang {

std::string lang_name(Lang l) {
  switch (l) {
    case Lang::CallCC:
      return "cc";
    case Lang::Exc:
      return "exc";
    case Lang::Delim:
      return "delim";
    case Lang::Embed:
      return "embed";
    case Lang::Aff:
      return "aff";
  }
  return "?";
}

std::optional<Lang> parse_lang(std::string_view s) {
  if (s == "cc" || s == "callcc") return Lang::CallCC;
  if (s == "exc") return Lang::Exc;
  if (s == "delim" || s == "dl") return Lang::Delim;
  if (s == "embed" || s == "emb" || s == "ffi") return Lang::Embed;
  if (s == "aff") return Lang::Aff;
  return std::nullopt;
}

std::optional<Lang> lang_from_path(std::string_view path) {
  auto dot = path.rfind('.');
  if (dot == std::string_view::npos) return std::nullopt;
  return parse_lang(path.substr(dot + 1));
}

namespace {

using Mut = std::shared_ptr<Expr>;

Mut node(ExprKind k) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  return e;
}

ExprPtr with_kids(ExprKind k, std::vector<ExprPtr> kids) {
  auto e = node(k);
  e->kids = std::move(kids);
  return e;
}

}  // namespace

ExprPtr num(Nat n) {
  auto e = node(ExprKind::Num);
  e->num = std::move(n);
  return e;
}

ExprPtr boolean(bool b) {
  auto e = node(ExprKind::Bool);
  e->flag = b;
  return e;
}

ExprPtr unit() { return node(ExprKind::Unit); }

ExprPtr var(std::string x) {
  auto e = node(ExprKind::Var);
  e->name = std::move(x);
  return e;
}

ExprPtr lam(std::string x, ExprPtr body) {
  auto e = node(ExprKind::Lam);
  e->name = std::move(x);
  e->kids = {std::move(body)};
  return e;
}

ExprPtr rec(std::string f, std::string x, ExprPtr body) {
  auto e = node(ExprKind::Rec);
  e->name = std::move(f);
  e->name2 = std::move(x);
  e->kids = {std::move(body)};
  return e;
}

ExprPtr app(ExprPtr f, ExprPtr a) { return with_kids(ExprKind::App, {std::move(f), std::move(a)}); }

ExprPtr binop(NatOp op, ExprPtr a, ExprPtr b) {
  auto e = node(ExprKind::BinOp);
  e->op = op;
  e->kids = {std::move(a), std::move(b)};
  return e;
}

ExprPtr if_(ExprPtr c, ExprPtr t, ExprPtr e) {
  return with_kids(ExprKind::If, {std::move(c), std::move(t), std::move(e)});
}

ExprPtr callcc(std::string k, ExprPtr body) {
  auto e = node(ExprKind::CallCC);
  e->name = std::move(k);
  e->kids = {std::move(body)};
  return e;
}

ExprPtr throw_(ExprPtr v, ExprPtr k) { return with_kids(ExprKind::Throw, {std::move(v), std::move(k)}); }

ExprPtr try_(ExprPtr body, std::string exc, std::string h, ExprPtr handler) {
  auto e = node(ExprKind::Try);
  e->exc = std::move(exc);
  e->name = std::move(h);
  e->kids = {std::move(body), std::move(handler)};
  return e;
}

ExprPtr raise(std::string exc, ExprPtr a) {
  auto e = node(ExprKind::Raise);
  e->exc = std::move(exc);
  e->kids = {std::move(a)};
  return e;
}

ExprPtr reset(ExprPtr a) { return with_kids(ExprKind::Reset, {std::move(a)}); }

ExprPtr shift(std::string k, ExprPtr body) {
  auto e = node(ExprKind::Shift);
  e->name = std::move(k);
  e->kids = {std::move(body)};
  return e;
}

ExprPtr contapp(ExprPtr k, ExprPtr a) { return with_kids(ExprKind::ContApp, {std::move(k), std::move(a)}); }
ExprPtr isprime() { return node(ExprKind::IsPrime); }
ExprPtr embed(ExprPtr a) { return with_kids(ExprKind::Embed, {std::move(a)}); }
ExprPtr alloc(ExprPtr a) { return with_kids(ExprKind::Alloc, {std::move(a)}); }
ExprPtr deref(ExprPtr a) { return with_kids(ExprKind::Deref, {std::move(a)}); }
ExprPtr assign(ExprPtr l, ExprPtr r) { return with_kids(ExprKind::Assign, {std::move(l), std::move(r)}); }

ExprPtr loc(Location l) {
  auto e = node(ExprKind::Loc);
  e->loc = l;
  return e;
}

ExprPtr pair(ExprPtr a, ExprPtr b) { return with_kids(ExprKind::Pair, {std::move(a), std::move(b)}); }

ExprPtr let_pair(std::string a, std::string b, ExprPtr bound, ExprPtr body) {
  auto e = node(ExprKind::LetPair);
  e->name = std::move(a);
  e->name2 = std::move(b);
  e->kids = {std::move(bound), std::move(body)};
  return e;
}

ExprPtr replace(ExprPtr l, ExprPtr v) { return with_kids(ExprKind::Replace, {std::move(l), std::move(v)}); }
ExprPtr dealloc(ExprPtr a) { return with_kids(ExprKind::Dealloc, {std::move(a)}); }
ExprPtr fork(ExprPtr forked, ExprPtr rest) { return with_kids(ExprKind::Fork, {std::move(forked), std::move(rest)}); }

ExprPtr cont_val(Frames k) {
  auto e = node(ExprKind::ContVal);
  e->frames = std::make_shared<const Frames>(std::move(k));
  return e;
}

bool is_value(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Num:
    case ExprKind::Bool:
    case ExprKind::Unit:
    case ExprKind::Lam:
    case ExprKind::Rec:
    case ExprKind::IsPrime:
    case ExprKind::Loc:
    case ExprKind::ContVal:
      return true;
    default:
      return false;
  }
}

namespace {

bool frame_equal(const Frame& x, const Frame& y);

}  // namespace

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->num != b->num || a->flag != b->flag || a->name != b->name ||
      a->name2 != b->name2 || a->exc != b->exc || a->op != b->op || a->loc != b->loc ||
      a->kids.size() != b->kids.size())
    return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!equal(a->kids[i], b->kids[i])) return false;
  if (bool(a->frames) != bool(b->frames)) return false;
  return !a->frames || equal(*a->frames, *b->frames);
}

bool equal(const Frames& a, const Frames& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!frame_equal(a[i], b[i])) return false;
  return true;
}

namespace {

bool frame_equal(const Frame& x, const Frame& y) {
  return x.kind == y.kind && x.op == y.op && x.exc == y.exc && x.name == y.name && equal(x.a, y.a) &&
         equal(x.b, y.b);
}

}  // namespace

std::size_t size(const ExprPtr& e) {
  std::size_t n = 1;
  for (const auto& k : e->kids) n += size(k);
  return n;
}

namespace {

// Names bound over kids[i].
std::vector<std::string> binders(const Expr& e, std::size_t i) {
  switch (e.kind) {
    case ExprKind::Lam:
    case ExprKind::CallCC:
    case ExprKind::Shift:
      return {e.name};
    case ExprKind::Rec:
      return {e.name, e.name2};
    case ExprKind::Try:
      return i == 1 ? std::vector<std::string>{e.name} : std::vector<std::string>{};
    case ExprKind::LetPair:
      return i == 1 ? std::vector<std::string>{e.name, e.name2} : std::vector<std::string>{};
    default:
      return {};
  }
}

void collect_fv(const ExprPtr& e, std::set<std::string>& bound, std::set<std::string>& out);

void collect_frames_fv(const Frames& k, std::set<std::string>& bound, std::set<std::string>& out) {
  for (const Frame& f : k) {
    if (f.kind == FrameKind::Catch) {
      bool fresh = bound.insert(f.name).second;
      collect_fv(f.a, bound, out);
      if (fresh) bound.erase(f.name);
      continue;
    }
    if (f.a) collect_fv(f.a, bound, out);
    if (f.b) collect_fv(f.b, bound, out);
  }
}

void collect_fv(const ExprPtr& e, std::set<std::string>& bound, std::set<std::string>& out) {
  if (e->kind == ExprKind::Var) {
    if (!bound.count(e->name)) out.insert(e->name);
    return;
  }
  if (e->frames) collect_frames_fv(*e->frames, bound, out);
  for (std::size_t i = 0; i < e->kids.size(); ++i) {
    std::vector<std::string> added;
    for (const auto& b : binders(*e, i))
      if (bound.insert(b).second) added.push_back(b);
    collect_fv(e->kids[i], bound, out);
    for (const auto& b : added) bound.erase(b);
  }
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  for (std::size_t i = 1;; ++i) {
    std::string c = base + "_" + std::to_string(i);
    if (!avoid.count(c)) return c;
  }
}

Frames subst_frames(const Frames& k, const std::string& x, const ExprPtr& v, const std::set<std::string>& fv_v);

ExprPtr subst_impl(const ExprPtr& e, const std::string& x, const ExprPtr& v, const std::set<std::string>& fv_v) {
  if (e->kind == ExprKind::Var) return e->name == x ? v : e;
  if (e->kids.empty() && !e->frames) return e;
  auto out = std::make_shared<Expr>(*e);
  if (e->frames) out->frames = std::make_shared<const Frames>(subst_frames(*e->frames, x, v, fv_v));
  for (std::size_t i = 0; i < e->kids.size(); ++i) {
    std::vector<std::string> bs = binders(*e, i);
    ExprPtr kid = e->kids[i];
    bool shadowed = false;
    for (const auto& b : bs) shadowed = shadowed || b == x;
    if (shadowed) continue;
    std::set<std::string> kid_fv = free_vars(kid);
    if (!kid_fv.count(x)) continue;
    for (const auto& b : bs) {
      if (!fv_v.count(b)) continue;
      std::set<std::string> avoid = fv_v;
      avoid.insert(kid_fv.begin(), kid_fv.end());
      avoid.insert(x);
      for (const auto& other : bs) avoid.insert(other);
      std::string nb = fresh_name(b, avoid);
      kid = subst_impl(kid, b, var(nb), {nb});
      if (out->name == b) out->name = nb;
      if (out->name2 == b) out->name2 = nb;
    }
    out->kids[i] = subst_impl(kid, x, v, fv_v);
  }
  return out;
}

Frames subst_frames(const Frames& k, const std::string& x, const ExprPtr& v, const std::set<std::string>& fv_v) {
  Frames out = k;
  for (Frame& f : out) {
    if (f.kind == FrameKind::Catch) {
      if (f.name == x) continue;
      if (fv_v.count(f.name) && free_vars(f.a).count(x)) {
        std::set<std::string> avoid = fv_v;
        auto fa = free_vars(f.a);
        avoid.insert(fa.begin(), fa.end());
        avoid.insert(x);
        std::string nb = fresh_name(f.name, avoid);
        f.a = subst_impl(f.a, f.name, var(nb), {nb});
        f.name = nb;
      }
      f.a = subst_impl(f.a, x, v, fv_v);
      continue;
    }
    if (f.a) f.a = subst_impl(f.a, x, v, fv_v);
    if (f.b) f.b = subst_impl(f.b, x, v, fv_v);
  }
  return out;
}

}  // namespace

std::set<std::string> free_vars(const ExprPtr& e) {
  std::set<std::string> bound, out;
  collect_fv(e, bound, out);
  return out;
}

ExprPtr subst(const ExprPtr& e, const std::string& x, const ExprPtr& v) {
  return subst_impl(e, x, v, free_vars(v));
}

ExprPtr plug_frame(const Frame& f, ExprPtr e) {
  switch (f.kind) {
    case FrameKind::AppArg:
      return app(f.a, std::move(e));
    case FrameKind::AppFun:
      return app(std::move(e), f.a);
    case FrameKind::OpRight:
      return binop(f.op, f.a, std::move(e));
    case FrameKind::OpLeft:
      return binop(f.op, std::move(e), f.a);
    case FrameKind::If:
      return if_(std::move(e), f.a, f.b);
    case FrameKind::ThrowVal:
      return throw_(std::move(e), f.a);
    case FrameKind::ThrowTo:
      return throw_(f.a, std::move(e));
    case FrameKind::Catch:
      return try_(std::move(e), f.exc, f.name, f.a);
    case FrameKind::Raise:
      return raise(f.exc, std::move(e));
    case FrameKind::ContArg:
      return contapp(f.a, std::move(e));
    case FrameKind::ContFun:
      return contapp(std::move(e), f.a);
  }
  return e;
}

ExprPtr plug(const Frames& k, ExprPtr e) {
  for (auto it = k.rbegin(); it != k.rend(); ++it) e = plug_frame(*it, std::move(e));
  return e;
}

namespace {

bool atomic(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Num:
    case ExprKind::Bool:
    case ExprKind::Unit:
    case ExprKind::Var:
    case ExprKind::IsPrime:
    case ExprKind::Reset:
    case ExprKind::Embed:
    case ExprKind::Loc:
    case ExprKind::Pair:
    case ExprKind::Replace:
    case ExprKind::ContVal:
      return true;
    default:
      return false;
  }
}

void print_to(std::ostream& os, const ExprPtr& e);

void child(std::ostream& os, const ExprPtr& e) {
  if (atomic(e)) {
    print_to(os, e);
  } else {
    os << '(';
    print_to(os, e);
    os << ')';
  }
}

void print_to(std::ostream& os, const ExprPtr& e) {
  const auto& k = e->kids;
  switch (e->kind) {
    case ExprKind::Num:
      os << e->num;
      return;
    case ExprKind::Bool:
      os << (e->flag ? "true" : "false");
      return;
    case ExprKind::Unit:
      os << "()";
      return;
    case ExprKind::Var:
      os << e->name;
      return;
    case ExprKind::Lam:
      os << "fun " << e->name << " -> ";
      print_to(os, k[0]);
      return;
    case ExprKind::Rec:
      os << "rec " << e->name << ' ' << e->name2 << " = ";
      print_to(os, k[0]);
      return;
    case ExprKind::App:
      child(os, k[0]);
      os << ' ';
      child(os, k[1]);
      return;
    case ExprKind::BinOp:
      child(os, k[0]);
      os << ' ' << natop_symbol(e->op) << ' ';
      child(os, k[1]);
      return;
    case ExprKind::If:
      os << "if ";
      child(os, k[0]);
      os << " then ";
      child(os, k[1]);
      os << " else ";
      print_to(os, k[2]);
      return;
    case ExprKind::CallCC:
      os << "callcc " << e->name << ". ";
      print_to(os, k[0]);
      return;
    case ExprKind::Throw:
      os << "throw ";
      child(os, k[0]);
      os << " to ";
      print_to(os, k[1]);
      return;
    case ExprKind::Try:
      os << "try ";
      child(os, k[0]);
      os << " catch " << e->exc << " with " << e->name << ". ";
      print_to(os, k[1]);
      return;
    case ExprKind::Raise:
      os << "raise " << e->exc << ' ';
      print_to(os, k[0]);
      return;
    case ExprKind::Reset:
      os << "<";
      print_to(os, k[0]);
      os << ">";
      return;
    case ExprKind::Shift:
      os << "shift " << e->name << ". ";
      print_to(os, k[0]);
      return;
    case ExprKind::ContApp:
      child(os, k[0]);
      os << " @ ";
      child(os, k[1]);
      return;
    case ExprKind::IsPrime:
      os << "isprime";
      return;
    case ExprKind::Embed:
      os << "embed { ";
      print_to(os, k[0]);
      os << " }";
      return;
    case ExprKind::Alloc:
      os << "alloc ";
      child(os, k[0]);
      return;
    case ExprKind::Deref:
      os << '!';
      child(os, k[0]);
      return;
    case ExprKind::Assign:
      child(os, k[0]);
      os << " := ";
      child(os, k[1]);
      return;
    case ExprKind::Loc:
      os << "<loc " << e->loc.index << ">";
      return;
    case ExprKind::Pair:
      os << '(';
      print_to(os, k[0]);
      os << ", ";
      print_to(os, k[1]);
      os << ')';
      return;
    case ExprKind::LetPair:
      os << "let (" << e->name << ", " << e->name2 << ") = ";
      child(os, k[0]);
      os << " in ";
      print_to(os, k[1]);
      return;
    case ExprKind::Replace:
      os << "replace(";
      print_to(os, k[0]);
      os << ", ";
      print_to(os, k[1]);
      os << ')';
      return;
    case ExprKind::Dealloc:
      os << "dealloc ";
      child(os, k[0]);
      return;
    case ExprKind::Fork:
      os << "fork { ";
      print_to(os, k[0]);
      os << " }; ";
      print_to(os, k[1]);
      return;
    case ExprKind::ContVal:
      os << "cont[" << print(*e->frames) << "]";
      return;
  }
}

}  // namespace

std::string print(const ExprPtr& e) {
  std::ostringstream os;
  print_to(os, e);
  return os.str();
}

std::string print(const Frames& k) { return print(plug(k, var("[]"))); }

}  // namespace gitree::lang
