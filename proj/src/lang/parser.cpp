#include "gitree/lang/parser.hpp"

#include <cctype>
#include <set>

namespace gitree::lang {

ParseError::ParseError(const std::string& msg, std::size_t l, std::size_t c)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c) {}

namespace {

enum class Tok { Int, Ident, Keyword, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, col;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {"fun",  "rec",   "if",      "then",    "else",  "callcc", "throw",
                                          "to",   "try",   "catch",   "with",    "raise", "reset",  "shift",
                                          "embed", "alloc", "dealloc", "let",    "in",    "fork",   "replace",
                                          "true", "false", "isprime"};
  return k;
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto adv = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') adv(1);
      continue;
    }
    std::size_t l = line, cl = col;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Int, std::string(s.substr(i, j - i)), l, cl});
      adv(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\'')) ++j;
      std::string w(s.substr(i, j - i));
      out.push_back({keywords().count(w) ? Tok::Keyword : Tok::Ident, w, l, cl});
      adv(j - i);
      continue;
    }
    static const char* two[] = {"->", ":=", "<-"};
    bool matched = false;
    for (const char* t : two) {
      if (s.substr(i, 2) == t) {
        out.push_back({Tok::Sym, t, l, cl});
        adv(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("(){}<>,.+-*@!=;").find(c) != std::string_view::npos) {
      out.push_back({Tok::Sym, std::string(1, c), l, cl});
      adv(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool allowed(Lang lang, const std::string& feature) {
  static const std::set<std::string> cc = {"callcc", "throw"};
  static const std::set<std::string> exc = {"try", "raise"};
  static const std::set<std::string> delim = {"reset", "shift", "@", "<", "isprime"};
  static const std::set<std::string> embed = {"embed", "alloc", "!", ":=", "()", "reset", "shift", "@", "<"};
  static const std::set<std::string> aff = {"alloc", "dealloc", "replace", "fork", "let", "pair", "true",
                                            "false", "()",    ":=",      "<-"};
  static const std::set<std::string> common = {"fun", "if", "+", "-", "*"};
  if (common.count(feature)) return true;
  if (feature == "rec") return lang != Lang::Aff;
  switch (lang) {
    case Lang::CallCC:
      return cc.count(feature) > 0;
    case Lang::Exc:
      return exc.count(feature) > 0;
    case Lang::Delim:
      return delim.count(feature) > 0;
    case Lang::Embed:
      return embed.count(feature) > 0;
    case Lang::Aff:
      return aff.count(feature) > 0;
  }
  return false;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, Lang lang) : toks_(std::move(toks)), lang_(lang) {}

  ExprPtr program() {
    ExprPtr e = expr();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Lang lang_;

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at(const std::string& s) const {
    const Token& t = peek();
    return (t.kind == Tok::Sym || t.kind == Tok::Keyword) && t.text == s;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().col); }
  void expect(const std::string& s) {
    if (!at(s)) fail("expected '" + s + "'" + (peek().kind == Tok::End ? " at end of input" : ", found '" + peek().text + "'"));
    ++pos_;
  }
  void gate(const std::string& feature) const {
    if (!allowed(lang_, feature)) fail("'" + feature + "' is not part of " + lang_name(lang_));
  }
  std::string ident() {
    if (peek().kind != Tok::Ident) fail("expected identifier, found '" + peek().text + "'");
    return toks_[pos_++].text;
  }
  std::string binder() {
    if (at("_")) {
      ++pos_;
      return "_";
    }
    return ident();
  }

  bool starts_keyword_form() const {
    if (peek().kind != Tok::Keyword) return false;
    static const std::set<std::string> forms = {"fun",   "rec",   "if",    "callcc", "throw", "try",
                                                "raise", "reset", "shift", "let"};
    if (forms.count(peek().text)) return true;
    return peek().text == "fork" && peek(1).text == "{";
  }

  bool starts_atom() const {
    const Token& t = peek();
    if (t.kind == Tok::Int || t.kind == Tok::Ident) return true;
    if (t.kind == Tok::Keyword)
      return t.text == "true" || t.text == "false" || t.text == "isprime" || t.text == "embed" ||
             t.text == "replace" || t.text == "alloc" || t.text == "dealloc" ||
             (t.text == "fork" && peek(1).text == "(");
    return t.kind == Tok::Sym && (t.text == "(" || t.text == "<" || t.text == "!");
  }

  ExprPtr expr() {
    if (starts_keyword_form()) return keyword_form();
    return assign();
  }

  ExprPtr keyword_form() {
    std::string kw = toks_[pos_].text;
    gate(kw == "let" ? "let" : kw);
    ++pos_;
    if (kw == "fun") {
      std::string x = binder();
      expect("->");
      return lam(x, expr());
    }
    if (kw == "rec") {
      std::string f = ident();
      std::string x = binder();
      expect("=");
      return rec(f, x, expr());
    }
    if (kw == "if") {
      ExprPtr c = expr();
      expect("then");
      ExprPtr t = expr();
      expect("else");
      return if_(c, t, expr());
    }
    if (kw == "callcc") {
      std::string k = ident();
      expect(".");
      return callcc(k, expr());
    }
    if (kw == "throw") {
      ExprPtr v = expr();
      expect("to");
      return throw_(v, expr());
    }
    if (kw == "try") {
      ExprPtr body = expr();
      expect("catch");
      std::string e = ident();
      expect("with");
      std::string h = binder();
      expect(".");
      return try_(body, e, h, expr());
    }
    if (kw == "raise") {
      std::string e = ident();
      return raise(e, expr());
    }
    if (kw == "reset") return reset(expr());
    if (kw == "shift") {
      std::string k = ident();
      expect(".");
      return shift(k, expr());
    }
    if (kw == "let") {
      expect("(");
      std::string a = binder();
      expect(",");
      std::string b = binder();
      expect(")");
      expect("=");
      ExprPtr bound = expr();
      expect("in");
      return let_pair(a, b, bound, expr());
    }
    // fork { e1 } ; e2
    expect("{");
    ExprPtr forked = expr();
    expect("}");
    expect(";");
    return fork(forked, expr());
  }

  ExprPtr assign() {
    ExprPtr l = contapp();
    if (at(":=") || at("<-")) {
      gate(peek().text);
      ++pos_;
      ExprPtr r = starts_keyword_form() ? keyword_form() : assign();
      return lang::assign(l, r);
    }
    return l;
  }

  ExprPtr contapp() {
    ExprPtr l = additive();
    if (at("@")) {
      gate("@");
      ++pos_;
      ExprPtr r = starts_keyword_form() ? keyword_form() : contapp();
      return lang::contapp(l, r);
    }
    return l;
  }

  ExprPtr additive() {
    ExprPtr l = multiplicative();
    while (at("+") || at("-")) {
      NatOp op = at("+") ? NatOp::Add : NatOp::Sub;
      ++pos_;
      if (starts_keyword_form()) return binop(op, l, keyword_form());
      l = binop(op, l, multiplicative());
    }
    return l;
  }

  ExprPtr multiplicative() {
    ExprPtr l = application();
    while (at("*")) {
      ++pos_;
      if (starts_keyword_form()) return binop(NatOp::Mul, l, keyword_form());
      l = binop(NatOp::Mul, l, application());
    }
    return l;
  }

  ExprPtr application() {
    if (!starts_atom()) fail(peek().kind == Tok::End ? "unexpected end of input" : "unexpected '" + peek().text + "'");
    ExprPtr f = unary();
    while (true) {
      if (starts_keyword_form()) return app(f, keyword_form());
      if (!starts_atom()) return f;
      f = app(f, unary());
    }
  }

  ExprPtr unary() {
    if (at("!")) {
      gate("!");
      ++pos_;
      return deref(unary());
    }
    if (at("alloc")) {
      gate("alloc");
      ++pos_;
      return alloc(unary());
    }
    if (at("dealloc")) {
      gate("dealloc");
      ++pos_;
      return dealloc(unary());
    }
    return atom();
  }

  ExprPtr atom() {
    const Token t = peek();
    if (t.kind == Tok::Int) {
      ++pos_;
      return num(Nat(t.text));
    }
    if (t.kind == Tok::Ident) {
      ++pos_;
      return var(t.text);
    }
    if (t.kind == Tok::Keyword) {
      gate(t.text);
      ++pos_;
      if (t.text == "true") return boolean(true);
      if (t.text == "false") return boolean(false);
      if (t.text == "isprime") return isprime();
      if (t.text == "embed") {
        expect("{");
        Lang saved = lang_;
        lang_ = Lang::Delim;
        ExprPtr body = expr();
        lang_ = saved;
        expect("}");
        return embed(body);
      }
      if (t.text == "replace" || t.text == "fork") {
        expect("(");
        ExprPtr a = expr();
        expect(",");
        ExprPtr b = expr();
        expect(")");
        return t.text == "replace" ? replace(a, b) : fork(a, b);
      }
      --pos_;
      fail("unexpected '" + t.text + "'");
    }
    if (at("(")) {
      ++pos_;
      if (at(")")) {
        gate("()");
        ++pos_;
        return unit();
      }
      ExprPtr a = expr();
      if (at(",")) {
        gate("pair");
        ++pos_;
        ExprPtr b = expr();
        expect(")");
        return pair(a, b);
      }
      expect(")");
      return a;
    }
    if (at("<")) {
      gate("<");
      ++pos_;
      ExprPtr a = expr();
      expect(">");
      return reset(a);
    }
    fail("unexpected '" + t.text + "'");
  }
};

ExprPtr resolve_conts(const ExprPtr& e, const std::set<std::string>& conts) {
  if (e->kind == ExprKind::Embed) return e;
  auto out = std::make_shared<Expr>(*e);
  for (std::size_t i = 0; i < e->kids.size(); ++i) {
    std::set<std::string> inner = conts;
    switch (e->kind) {
      case ExprKind::Shift:
        inner.insert(e->name);
        break;
      case ExprKind::Lam:
      case ExprKind::CallCC:
        inner.erase(e->name);
        break;
      case ExprKind::Rec:
        inner.erase(e->name);
        inner.erase(e->name2);
        break;
      case ExprKind::Try:
        if (i == 1) inner.erase(e->name);
        break;
      case ExprKind::LetPair:
        if (i == 1) {
          inner.erase(e->name);
          inner.erase(e->name2);
        }
        break;
      default:
        break;
    }
    out->kids[i] = resolve_conts(e->kids[i], inner);
  }
  if (out->kind == ExprKind::App && out->kids[0]->kind == ExprKind::Var && conts.count(out->kids[0]->name))
    out->kind = ExprKind::ContApp;
  return out;
}

ExprPtr resolve_embeds(const ExprPtr& e) {
  if (e->kind == ExprKind::Embed) return embed(resolve_conts(e->kids[0], {}));
  auto out = std::make_shared<Expr>(*e);
  for (auto& k : out->kids) k = resolve_embeds(k);
  return out;
}

}  // namespace

ExprPtr parse(std::string_view text, Lang lang) {
  ExprPtr e = Parser(lex(text), lang).program();
  if (lang == Lang::Delim || lang == Lang::Embed) e = resolve_conts(e, {});
  if (lang == Lang::Embed) e = resolve_embeds(e);
  return e;
}

}  // namespace gitree::lang
