#include "gitree/lang/denote.hpp"

#include <stdexcept>

#include "gitree/effects.hpp"

namespace gitree::lang {

EffectSystem effects_for(Lang lang) {
  switch (lang) {
    case Lang::CallCC:
      return EffectSystem::combine({callcc::reifier()});
    case Lang::Exc:
      return EffectSystem::combine({exc::reifier()});
    case Lang::Delim:
      return EffectSystem::combine({delim::reifier()});
    case Lang::Embed:
      return EffectSystem::combine({delim::reifier(), store::reifier()});
    case Lang::Aff:
      return EffectSystem::combine({store::reifier(), fork::reifier()});
  }
  throw std::logic_error("unknown language");
}

namespace {

bool is_prime(const Nat& n) {
  if (n < 2) return false;
  for (Nat d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

GITree with_loc(const GITree& a, std::function<GITree(Location)> f) {
  return get_ret(a, [f = std::move(f)](const GroundValue& g) {
    if (!g.is_loc()) return err(ErrorKind::runtime());
    return f(g.loc());
  });
}

GITree proj(const GITree& a, int i) {
  return get_ret(a, [i](const GroundValue& g) {
    if (!g.is_pair()) return err(ErrorKind::runtime());
    return i == 0 ? g.pair().first : g.pair().second;
  });
}

// APPCONT(Next x, k) for a continuation value k = Fun(…).
GITree appcont_value(const GITree& arg, const GITree& k) {
  return get_fun(k, [arg](const LaterFn& f) { return delim::appcont(next(arg), f); });
}

class Denoter {
 public:
  Denoter(Lang lang, const DenoteHooks* hooks) : lang_(lang), hooks_(hooks) {}

  GITree go(const ExprPtr& e, const Env& env) const {
    const auto& k = e->kids;
    switch (e->kind) {
      case ExprKind::Num:
        return ret_nat(e->num);
      case ExprKind::Bool:
        return ret_nat(e->flag ? 1 : 0);
      case ExprKind::Unit:
        return ret_unit();
      case ExprKind::Loc:
        return ret_loc(e->loc);
      case ExprKind::Var: {
        auto it = env.find(e->name);
        if (it == env.end()) throw std::invalid_argument("unbound variable " + e->name);
        return lang_ == Lang::Aff ? force(it->second) : it->second;
      }
      case ExprKind::Lam: {
        Denoter self = *this;
        ExprPtr body = k[0];
        std::string x = e->name;
        return fun_now([self, body, x, env](const GITree& a) {
          self.bound(x, a);
          Env inner = env;
          inner.insert_or_assign(x, a);
          return self.go(body, inner);
        });
      }
      case ExprKind::Rec: {
        Denoter self = *this;
        ExprPtr body = k[0];
        std::string f = e->name, x = e->name2;
        return guarded_fix([self, body, f, x, env](const LaterTree& me) {
          return fun(me.map([self, body, f, x, env](const GITree& rec_value) -> ValueFn {
            return [self, body, f, x, env, rec_value](const GITree& a) {
              self.bound(x, a);
              Env inner = env;
              inner.insert_or_assign(f, rec_value);
              inner.insert_or_assign(x, a);
              return self.go(body, inner);
            };
          }));
        });
      }
      case ExprKind::App: {
        if (lang_ == Lang::Aff) {
          GITree f = go(k[0], env);
          return get_val(go(k[1], env), [f](const GITree& x) { return app(f, thunk(x)); });
        }
        return app(go(k[0], env), go(k[1], env));
      }
      case ExprKind::BinOp:
        return natop(e->op, go(k[0], env), go(k[1], env));
      case ExprKind::If:
        return if_then_else(go(k[0], env), go(k[1], env), go(k[2], env));
      case ExprKind::CallCC: {
        Denoter self = *this;
        ExprPtr body = k[0];
        std::string name = e->name;
        return callcc::callcc_gt([self, body, name, env](const KFun& kappa) {
          Env inner = env;
          inner.insert_or_assign(name, cont_value(kappa));
          return next(self.go(body, inner));
        });
      }
      case ExprKind::Throw: {
        GITree target = go(k[1], env);
        return get_val(go(k[0], env), [target](const GITree& x) {
          return get_fun(target, [x](const LaterFn& f) { return callcc::throw_gt(next(x), f); });
        });
      }
      case ExprKind::Try: {
        Denoter self = *this;
        ExprPtr handler = k[1];
        std::string h = e->name;
        KFun hk = lift([self, handler, h, env](const GITree& v) {
          Env inner = env;
          inner.insert_or_assign(h, v);
          return self.go(handler, inner);
        });
        return exc::catch_(ExcName{e->exc}, hk, go(k[0], env));
      }
      case ExprKind::Raise:
        return exc::raise(ExcName{e->exc}, go(k[0], env));
      case ExprKind::Reset:
        return delim::reset(next(delim::pop_prime(go(k[0], env))));
      case ExprKind::Shift: {
        Denoter self = *this;
        ExprPtr body = k[0];
        std::string name = e->name;
        return delim::shift([self, body, name, env](const KFun& kappa) {
          Env inner = env;
          inner.insert_or_assign(name, cont_value(kappa));
          return next(delim::pop_prime(self.go(body, inner)));
        });
      }
      case ExprKind::ContApp: {
        GITree kont = go(k[0], env);
        return get_val(go(k[1], env), [kont](const GITree& x) { return appcont_value(x, kont); });
      }
      case ExprKind::IsPrime:
        return fun_now([](const GITree& a) {
          return get_nat(a, [](const Nat& n) { return ret_nat(is_prime(n) ? 1 : 0); });
        });
      case ExprKind::Embed:
        return delim::reset(next(delim::pop_prime(Denoter(Lang::Delim, hooks_).go(k[0], {}))));
      case ExprKind::Alloc:
        return get_val(go(k[0], env), [](const GITree& x) { return store::alloc(x, ret_loc); });
      case ExprKind::Deref:
        return with_loc(go(k[0], env), [](Location l) { return store::read(l); });
      case ExprKind::Assign: {
        if (lang_ == Lang::Aff) return seq(replace_tree(go(k[0], env), go(k[1], env)), ret_unit());
        GITree target = go(k[0], env);
        return get_val(go(k[1], env), [target](const GITree& x) {
          return with_loc(target, [x](Location l) { return store::write(l, x); });
        });
      }
      case ExprKind::Pair: {
        GITree first = go(k[0], env);
        return get_val(go(k[1], env), [first](const GITree& b) {
          return get_val(first, [b](const GITree& a) { return ret(GroundValue::pair(a, b)); });
        });
      }
      case ExprKind::LetPair: {
        Denoter self = *this;
        ExprPtr body = k[1];
        std::string a = e->name, b = e->name2;
        return get_val(go(k[0], env), [self, body, a, b, env](const GITree& x) {
          return get_val(thunk(proj(x, 0)), [self, body, a, b, env, x](const GITree& y) {
            return get_val(thunk(proj(x, 1)), [self, body, a, b, env, y](const GITree& z) {
              Env inner = env;
              inner.insert_or_assign(a, y);
              inner.insert_or_assign(b, z);
              return self.go(body, inner);
            });
          });
        });
      }
      case ExprKind::Replace:
        return replace_tree(go(k[0], env), go(k[1], env));
      case ExprKind::Dealloc:
        return with_loc(go(k[0], env), [](Location l) { return store::dealloc(l); });
      case ExprKind::Fork:
        return seq(fork::fork(go(k[0], env)), go(k[1], env));
      case ExprKind::ContVal:
        if (lang_ == Lang::Delim) return denote_delim_cont(*e->frames);
        return cont_value(denote_context(*e->frames, lang_).lifted());
    }
    throw std::logic_error("bad expression");
  }

 private:
  Lang lang_;
  const DenoteHooks* hooks_;

  void bound(const std::string& x, const GITree& a) const {
    if (hooks_ && hooks_->on_bind) hooks_->on_bind(x, a);
  }

  static GITree replace_tree(const GITree& target, const GITree& value) {
    return get_val(value, [target](const GITree& y) {
      return with_loc(target, [y](Location l) {
        return get_val(store::xchg(l, y), [l](const GITree& x) { return ret(GroundValue::pair(x, ret_loc(l))); });
      });
    });
  }
};

HomCtx frame_hom(const Frame& f, Lang lang) {
  auto d = [lang](const ExprPtr& e) { return denote(e, lang); };
  switch (f.kind) {
    case FrameKind::AppArg:
      return HomCtx::app_right(d(f.a));
    case FrameKind::AppFun:
      return HomCtx::app_left(d(f.a));
    case FrameKind::OpRight:
      return HomCtx::natop_right(f.op, d(f.a));
    case FrameKind::OpLeft:
      return HomCtx::natop_left(f.op, d(f.a));
    case FrameKind::If: {
      GITree t = d(f.a), e = d(f.b);
      return HomCtx::get_ret("if", [t, e](const GroundValue& g) {
        if (!g.is_nat()) return err(ErrorKind::runtime());
        return g.nat() != 0 ? t : e;
      });
    }
    case FrameKind::ThrowVal: {
      GITree target = d(f.a);
      return HomCtx::get_val("throw-value", [target](const GITree& x) {
        return get_fun(target, [x](const LaterFn& k) { return callcc::throw_gt(next(x), k); });
      });
    }
    case FrameKind::ThrowTo: {
      GITree v = d(f.a);
      return HomCtx::get_fun("throw-to", [v](const LaterFn& k) { return callcc::throw_gt(next(v), k); });
    }
    case FrameKind::Raise: {
      ExcName name{f.exc};
      return HomCtx::get_val("raise " + f.exc, [name](const GITree& x) { return exc::raise(name, x); });
    }
    case FrameKind::ContArg: {
      GITree kont = d(f.a);
      return HomCtx::get_val("appcont-arg", [kont](const GITree& x) { return appcont_value(x, kont); });
    }
    case FrameKind::ContFun: {
      GITree v = d(f.a);
      return HomCtx::get_fun("appcont-fun", [v](const LaterFn& k) { return delim::appcont(next(v), k); });
    }
    case FrameKind::Catch:
      break;
  }
  throw std::invalid_argument("catch frames are denoted by denote_exc_context");
}

}  // namespace

GITree denote(const ExprPtr& e, Lang lang, const Env& env, const DenoteHooks* hooks) {
  return Denoter(lang, hooks).go(e, env);
}

GITree denote_program(const ExprPtr& e, Lang lang, const DenoteHooks* hooks) {
  GITree t = denote(e, lang, {}, hooks);
  return lang == Lang::Delim ? delim::pop_prime(t) : t;
}

HomCtx denote_context(const Frames& k, Lang lang) {
  HomCtx h = HomCtx::identity();
  for (const Frame& f : k) h = HomCtx::compose(h, frame_hom(f, lang));
  return h;
}

ExcContext denote_exc_context(const Frames& k) {
  ExcContext out{HomCtx::identity(), {}};
  for (const Frame& f : k) {
    if (f.kind != FrameKind::Catch) {
      out.hom = HomCtx::compose(out.hom, frame_hom(f, Lang::Exc));
      continue;
    }
    ExprPtr handler = f.a;
    std::string h = f.name;
    KFun hk = lift([handler, h](const GITree& v) { return denote(handler, Lang::Exc, {{h, v}}); });
    out.stack.insert(out.stack.begin(), HandlerEntry{ExcName{f.exc}, hk, out.hom.lifted()});
    ExcName name{f.exc};
    out.hom = HomCtx::get_val("pop " + f.exc, [name](const GITree& y) { return exc::pop_wrap(name, y); });
  }
  return out;
}

GITree denote_delim_cont(const Frames& k) {
  HomCtx h = HomCtx::compose(HomCtx::pop_prime(), denote_context(k, Lang::Delim));
  return fun(LaterFn::now([h](const GITree& x) { return tick(h(x)); }));
}

ContStack denote_mcont(const std::vector<Frames>& mk) {
  ContStack out;
  for (const Frames& k : mk) out.push_back(HomCtx::compose(HomCtx::pop_prime(), denote_context(k, Lang::Delim)).lifted());
  return out;
}

GITree thunk(const GITree& a) {
  return store::alloc(ret_nat(0), [a](Location l) {
    return fun_now([l, a](const GITree&) { return if_then_else(store::xchg(l, ret_nat(1)), err(ErrorKind::lin()), a); });
  });
}

GITree force(const GITree& a) { return app(a, ret_nat(0)); }

namespace {

GITree appcont_prime(const GITree& x, const KFun& k) {
  return delim::appcont(next(x), LaterFn::now([k](const GITree& v) { return tau(k(next(v))); }));
}

}  // namespace

GITree ffi_prog() {
  return fun_now([](const GITree& y) {
    return store::alloc(ret_nat(1), [y](Location x) {
      GITree shifted = delim::shift([x](const KFun& k) {
        GITree incr = get_val(natop(NatOp::Add, store::read(x), ret_nat(1)),
                              [x](const GITree& m) { return store::write(x, m); });
        GITree body = seq(appcont_prime(store::read(x), k), seq(incr, appcont_prime(store::read(x), k)));
        return next(delim::pop_prime(body));
      });
      return get_val(shifted, [y](const GITree& n) {
        return with_loc(y, [n](Location l) {
          return get_val(natop(NatOp::Add, store::read(l), n), [l](const GITree& p) { return store::write(l, p); });
        });
      });
    });
  });
}

GITree ffi_prog_applied(Location y) {
  return delim::reset(next(delim::pop_prime(app(ffi_prog(), ret_loc(y)))));
}

}  // namespace gitree::lang
