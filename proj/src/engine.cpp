#include "gitree/engine.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace gitree {

void CompositeState::add(std::string family, SubStatePtr s) {
  if (has(family)) throw RegistrationError("duplicate family " + family);
  slots_.emplace_back(std::move(family), std::move(s));
}

bool CompositeState::has(std::string_view family) const {
  return std::any_of(slots_.begin(), slots_.end(), [&](const auto& e) { return e.first == family; });
}

const SubStatePtr& CompositeState::slot(std::string_view family) const {
  for (const auto& e : slots_)
    if (e.first == family) return e.second;
  throw std::out_of_range("no state for family " + std::string(family));
}

CompositeState CompositeState::with(std::string_view family, SubStatePtr s) const {
  CompositeState out = *this;
  for (auto& e : out.slots_)
    if (e.first == family) {
      e.second = std::move(s);
      return out;
    }
  throw std::out_of_range("no state for family " + std::string(family));
}

bool CompositeState::frame_equal_except(const CompositeState& other, std::string_view family) const {
  if (slots_.size() != other.slots_.size()) return false;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].first != other.slots_[i].first) return false;
    if (slots_[i].first == family) continue;
    if (slots_[i].second.get() != other.slots_[i].second.get()) return false;
  }
  return true;
}

std::vector<std::string> CompositeState::families() const {
  std::vector<std::string> out;
  for (const auto& e : slots_) out.push_back(e.first);
  return out;
}

EffectSystem EffectSystem::combine(std::vector<Reifier> rs) {
  EffectSystem sys;
  std::vector<std::string> seen;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const Reifier& r = rs[i];
    if (std::find(seen.begin(), seen.end(), r.family) != seen.end())
      throw RegistrationError("duplicate family " + r.family);
    seen.push_back(r.family);
    for (const OpDecl& d : r.ops) {
      if (d.id.family != r.family)
        throw RegistrationError("op " + d.id.str() + " declared outside its family " + r.family);
      if (sys.dispatch_.count(d.id)) throw RegistrationError("duplicate op " + d.id.str());
      sys.dispatch_[d.id] = i;
      sys.signature_.push_back(d);
    }
  }
  sys.reifiers_ = std::move(rs);
  return sys;
}

CompositeState EffectSystem::initial_state() const {
  CompositeState s;
  for (const Reifier& r : reifiers_) s.add(r.family, r.initial);
  return s;
}

const Reifier* EffectSystem::find(const OpId& id) const {
  auto it = dispatch_.find(id);
  return it == dispatch_.end() ? nullptr : &reifiers_[it->second];
}

const OpDecl* EffectSystem::decl(const OpId& id) const {
  for (const OpDecl& d : signature_)
    if (d.id == id) return &d;
  return nullptr;
}

nlohmann::json render_payload(const Payload& p) {
  switch (p.value.index()) {
    case 0: {
      const GroundValue& g = p.as_ground();
      if (g.is_nat()) {
        if (g.nat() <= std::numeric_limits<std::int64_t>::max()) return static_cast<std::int64_t>(g.nat());
        return g.nat().str();
      }
      return g.render();
    }
    case 6:
      return p.as_exc().name;
    case 7: {
      nlohmann::json arr = nlohmann::json::array();
      for (const Payload& x : p.items()) arr.push_back(render_payload(x));
      return arr;
    }
    default:
      return nullptr;
  }
}

nlohmann::json Event::to_json() const {
  nlohmann::json j;
  j["step"] = step;
  j["thread"] = thread;
  switch (kind) {
    case Kind::Tau:
      j["kind"] = "tau";
      break;
    case Kind::Effect:
      j["kind"] = "effect";
      j["op"] = op.str();
      j["input"] = input;
      if (depth) j["depth"] = *depth;
      break;
    case Kind::Spawn:
      j["kind"] = "spawn";
      j["op"] = op.str();
      j["count"] = count;
      break;
  }
  return j;
}

ReifyStep reify(const GITree& a, const CompositeState& s, const EffectSystem& sys) {
  const Reifier* r = sys.find(a.op());
  if (!r) throw std::invalid_argument("reify: unknown op " + a.op().str());
  const OpDecl* d = sys.decl(a.op());
  if (!conforms(a.input(), d->input))
    return {err(ErrorKind::runtime()), s, {}, "ill-formed input for " + a.op().str()};
  ReifyResult res = r->step(a.op(), a.input(), s.slot(r->family), a.cont());
  if (auto* fail = std::get_if<ReifyFailure>(&res)) return {err(ErrorKind::runtime()), s, {}, fail->reason};
  auto& ok = std::get<ReifySuccess>(res);
  ReifyStep out{tau(ok.next), s.with(r->family, ok.state), {}, {}};
  for (const LaterTree& t : ok.spawned) out.spawned.push_back(t.force());
  return out;
}

StepResult istep(const GITree& a, const CompositeState& s, const EffectSystem& sys) {
  switch (a.head()) {
    case GITree::Head::Ret:
    case GITree::Head::Fun:
      return ValueResult{a};
    case GITree::Head::Err:
      return StuckResult{"error " + a.error().name()};
    case GITree::Head::Tau:
      return Stepped{a.rest().force(), s, {}, {}};
    case GITree::Head::Vis: {
      if (!sys.find(a.op())) return StuckResult{"unknown op " + a.op().str()};
      ReifyStep r = reify(a, s, sys);
      // Reification yields Tau(β); the step exposes β.
      GITree next = r.tree.is_tau() ? r.tree.rest().force() : r.tree;
      return Stepped{std::move(next), std::move(r.state), std::move(r.spawned), std::move(r.diagnostic)};
    }
  }
  return StuckResult{"bad head"};
}

namespace {

std::optional<std::size_t> stack_depth(const SubState& s) {
  if (auto* h = std::get_if<HandlerStack>(&s)) return h->size();
  if (auto* c = std::get_if<ContStack>(&s)) return c->size();
  return std::nullopt;
}

}  // namespace

TpStep tp_step(const std::vector<GITree>& pool, const CompositeState& s, std::size_t choice,
               const EffectSystem& sys, std::size_t step_index) {
  TpStep out;
  if (choice >= pool.size()) return out;
  const GITree& t = pool[choice];
  StepResult r = istep(t, s, sys);
  auto* st = std::get_if<Stepped>(&r);
  if (!st) {
    if (auto* stuck = std::get_if<StuckResult>(&r)) out.diagnostic = stuck->reason;
    return out;
  }
  out.ok = true;
  out.pool = pool;
  out.pool[choice] = st->next;
  for (const GITree& sp : st->spawned) out.pool.push_back(sp);
  out.state = st->state;
  out.diagnostic = st->diagnostic;
  Event e;
  e.step = step_index;
  e.thread = choice;
  if (t.is_tau()) {
    e.kind = Event::Kind::Tau;
    out.events.push_back(e);
    return out;
  }
  const std::string& family = t.op().family;
  if (!out.state.frame_equal_except(s, family))
    throw std::logic_error("frame property violated by " + t.op().str());
  e.kind = Event::Kind::Effect;
  e.op = t.op();
  e.input = render_payload(t.input());
  e.depth = stack_depth(*out.state.slot(family));
  out.events.push_back(e);
  if (!st->spawned.empty()) {
    Event sp = e;
    sp.kind = Event::Kind::Spawn;
    sp.count = st->spawned.size();
    sp.depth.reset();
    out.events.push_back(sp);
  }
  return out;
}

std::size_t RoundRobinScheduler::choose(std::span<const std::size_t> runnable, std::size_t) {
  for (std::size_t i : runnable)
    if (i >= cursor_) {
      cursor_ = i + 1;
      return i;
    }
  cursor_ = runnable.front() + 1;
  return runnable.front();
}

RandomScheduler::RandomScheduler(std::uint64_t seed) : state_(seed) {}

std::size_t RandomScheduler::choose(std::span<const std::size_t> runnable, std::size_t) {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return runnable[z % runnable.size()];
}

std::size_t ExhaustiveScheduler::choose(std::span<const std::size_t> runnable, std::size_t) {
  if (pos_ < path_.size()) {
    const Branch& b = path_[pos_++];
    if (b.width != runnable.size()) throw std::logic_error("exhaustive replay diverged");
    return runnable[b.taken];
  }
  path_.push_back({0, runnable.size()});
  ++pos_;
  return runnable[0];
}

bool ExhaustiveScheduler::advance() {
  pos_ = 0;
  while (!path_.empty() && path_.back().taken + 1 >= path_.back().width) path_.pop_back();
  if (path_.empty()) return false;
  ++path_.back().taken;
  return true;
}

std::unique_ptr<Scheduler> make_scheduler(const SchedulerPolicy& p) {
  if (auto* r = std::get_if<RandomPolicy>(&p)) return std::make_unique<RandomScheduler>(r->seed);
  if (std::holds_alternative<Exhaustive>(p)) return std::make_unique<ExhaustiveScheduler>();
  return std::make_unique<RoundRobinScheduler>();
}

std::string Outcome::summary() const {
  switch (kind) {
    case Kind::FinalValue:
      if (value->is_ret()) return "VALUE " + value->ground().render();
      return "VALUE <fun>";
    case Kind::Error:
      return "ERROR " + error.name();
    case Kind::Timeout:
      return "TIMEOUT";
    case Kind::Stuck:
      return "STUCK";
  }
  return "STUCK";
}

std::string Outcome::trace_jsonl() const {
  std::string out;
  for (const Event& e : trace) out += e.to_json().dump() + "\n";
  return out;
}

Outcome run_pool(std::vector<GITree> pool, const EffectSystem& sys, CompositeState state, std::size_t fuel,
                 Scheduler& sched, std::size_t max_threads) {
  Outcome out;
  std::size_t step = 0;
  std::string diagnostic;
  auto finish = [&](Outcome::Kind k) {
    out.kind = k;
    out.state = state;
    out.pool = pool;
    out.steps = step;
    out.diagnostic = diagnostic;
    return out;
  };
  while (true) {
    for (const GITree& t : pool)
      if (t.is_err()) {
        out.error = t.error();
        return finish(Outcome::Kind::Error);
      }
    std::vector<std::size_t> runnable;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (!pool[i].is_value()) runnable.push_back(i);
    if (runnable.empty()) {
      out.value = pool[0];
      return finish(Outcome::Kind::FinalValue);
    }
    if (fuel == 0) return finish(Outcome::Kind::Timeout);
    if (max_threads && pool.size() > max_threads) {
      diagnostic = "thread bound exceeded";
      return finish(Outcome::Kind::Stuck);
    }
    std::size_t c = sched.choose(runnable, step);
    TpStep ts = tp_step(pool, state, c, sys, step);
    if (!ts.ok) {
      diagnostic = ts.diagnostic;
      return finish(Outcome::Kind::Stuck);
    }
    if (!ts.diagnostic.empty()) diagnostic = ts.diagnostic;
    for (Event& e : ts.events) out.trace.push_back(std::move(e));
    pool = std::move(ts.pool);
    state = std::move(ts.state);
    --fuel;
    ++step;
  }
}

Outcome run(const GITree& a, const EffectSystem& sys, const RunOptions& opts) {
  auto sched = make_scheduler(opts.policy);
  std::size_t max_threads = opts.max_threads;
  if (auto* ex = std::get_if<Exhaustive>(&opts.policy)) max_threads = ex->max_threads;
  return run_pool({a}, sys, opts.initial_state ? *opts.initial_state : sys.initial_state(), opts.fuel, *sched,
                  max_threads);
}

std::vector<Outcome> explore_all(std::vector<GITree> pool, const EffectSystem& sys, CompositeState state,
                                 std::size_t fuel, Exhaustive bounds) {
  if (fuel > bounds.max_fuel) throw std::invalid_argument("exhaustive exploration needs fuel <= max_fuel");
  if (bounds.max_threads > 3) throw std::invalid_argument("exhaustive exploration is limited to 3 threads");
  std::vector<Outcome> outs;
  ExhaustiveScheduler sched;
  do {
    outs.push_back(run_pool(pool, sys, state, fuel, sched, bounds.max_threads));
  } while (sched.advance());
  return outs;
}

}  // namespace gitree
