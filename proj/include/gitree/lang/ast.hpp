#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gitree/core.hpp"

namespace gitree::lang {

enum class Lang { CallCC, Exc, Delim, Embed, Aff };

std::string lang_name(Lang l);
std::optional<Lang> parse_lang(std::string_view s);
// ".cc", ".exc", ".dl", ".emb", ".aff"
std::optional<Lang> lang_from_path(std::string_view path);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;
struct Frame;
// Evaluation context as a frame list, outermost first.
using Frames = std::vector<Frame>;

enum class ExprKind {
  Num,
  Bool,
  Unit,
  Var,
  Lam,      // fun name -> kids[0]
  Rec,      // rec name name2 = kids[0]
  App,      // kids[0] kids[1]
  BinOp,    // kids[0] op kids[1]
  If,       // if kids[0] then kids[1] else kids[2]
  CallCC,   // callcc name. kids[0]
  Throw,    // throw kids[0] to kids[1]
  Try,      // try kids[0] catch exc with name. kids[1]
  Raise,    // raise exc kids[0]
  Reset,    // reset kids[0]
  Shift,    // shift name. kids[0]
  ContApp,  // kids[0] @ kids[1]
  IsPrime,
  Embed,    // embed { kids[0] }
  Alloc,
  Deref,
  Assign,   // kids[0] := kids[1]
  Loc,
  Pair,
  LetPair,  // let (name, name2) = kids[0] in kids[1]
  Replace,
  Dealloc,
  Fork,     // fork { kids[0] }; kids[1]
  ContVal,  // cont K; produced by the machines only
};

struct Expr {
  ExprKind kind = ExprKind::Num;
  Nat num;
  bool flag = false;
  std::string name, name2, exc;
  NatOp op = NatOp::Add;
  std::vector<ExprPtr> kids;
  std::shared_ptr<const Frames> frames;
  Location loc;
};

enum class FrameKind {
  AppArg,    // a □
  AppFun,    // □ a   (a is a value)
  OpRight,   // a ⊕ □
  OpLeft,    // □ ⊕ a (a is a value)
  If,        // if □ then a else b
  ThrowVal,  // throw □ to a
  ThrowTo,   // throw a to □ (a is a value)
  Catch,     // try □ catch exc with name. a
  Raise,     // raise exc □
  ContArg,   // a @ □
  ContFun,   // □ @ a (a is a value)
};

struct Frame {
  FrameKind kind;
  NatOp op = NatOp::Add;
  std::string exc, name;
  ExprPtr a, b;
};

// Construction.
ExprPtr num(Nat n);
ExprPtr boolean(bool b);
ExprPtr unit();
ExprPtr var(std::string x);
ExprPtr lam(std::string x, ExprPtr body);
ExprPtr rec(std::string f, std::string x, ExprPtr body);
ExprPtr app(ExprPtr f, ExprPtr a);
ExprPtr binop(NatOp op, ExprPtr a, ExprPtr b);
ExprPtr if_(ExprPtr c, ExprPtr t, ExprPtr e);
ExprPtr callcc(std::string k, ExprPtr body);
ExprPtr throw_(ExprPtr v, ExprPtr k);
ExprPtr try_(ExprPtr body, std::string exc, std::string h, ExprPtr handler);
ExprPtr raise(std::string exc, ExprPtr e);
ExprPtr reset(ExprPtr e);
ExprPtr shift(std::string k, ExprPtr body);
ExprPtr contapp(ExprPtr k, ExprPtr a);
ExprPtr isprime();
ExprPtr embed(ExprPtr e);
ExprPtr alloc(ExprPtr e);
ExprPtr deref(ExprPtr e);
ExprPtr assign(ExprPtr l, ExprPtr r);
ExprPtr loc(Location l);
ExprPtr pair(ExprPtr a, ExprPtr b);
ExprPtr let_pair(std::string a, std::string b, ExprPtr bound, ExprPtr body);
ExprPtr replace(ExprPtr l, ExprPtr v);
ExprPtr dealloc(ExprPtr e);
ExprPtr fork(ExprPtr forked, ExprPtr rest);
ExprPtr cont_val(Frames k);

bool is_value(const ExprPtr& e);
bool equal(const ExprPtr& a, const ExprPtr& b);
bool equal(const Frames& a, const Frames& b);
std::size_t size(const ExprPtr& e);
std::set<std::string> free_vars(const ExprPtr& e);

// Capture-avoiding e[x := v].
ExprPtr subst(const ExprPtr& e, const std::string& x, const ExprPtr& v);
// K[e]
ExprPtr plug(const Frames& k, ExprPtr e);
ExprPtr plug_frame(const Frame& f, ExprPtr e);

std::string print(const ExprPtr& e);
std::string print(const Frames& k);

}  // namespace gitree::lang
