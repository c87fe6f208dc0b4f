#include "colkit/arena.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace colkit {

namespace {

class SilentSession : public StrategySession {
 public:
  std::vector<std::string> step(const std::vector<std::string>&) override { return {}; }
};

class ScriptSession : public StrategySession {
 public:
  explicit ScriptSession(std::vector<std::vector<std::string>> batches)
      : batches_(std::move(batches)) {}
  std::vector<std::string> step(const std::vector<std::string>&) override {
    if (at_ >= batches_.size()) return {};
    return batches_[at_++];
  }

 private:
  std::vector<std::vector<std::string>> batches_;
  std::size_t at_ = 0;
};

class CopycatSession : public StrategySession {
 public:
  CopycatSession(std::string a, std::string b) : a_(std::move(a)), b_(std::move(b)) {}
  std::vector<std::string> step(const std::vector<std::string>& obs) override {
    std::vector<std::string> out;
    for (const auto& m : obs) {
      if (m.compare(0, a_.size(), a_) == 0 && m.size() > a_.size())
        out.push_back(b_ + m.substr(a_.size()));
      else if (m.compare(0, b_.size(), b_) == 0 && m.size() > b_.size())
        out.push_back(a_ + m.substr(b_.size()));
    }
    return out;
  }

 private:
  std::string a_, b_;
};

}  // namespace

Strategy silent_strategy() {
  return {"silent", [] { return std::make_unique<SilentSession>(); }};
}

Strategy script_strategy(std::vector<std::vector<std::string>> batches) {
  return {"script", [batches] { return std::make_unique<ScriptSession>(batches); }};
}

Strategy copycat(const std::string& prefix_a, const std::string& prefix_b) {
  if (prefix_a == prefix_b) throw std::invalid_argument("copycat needs two distinct prefixes");
  return {"copycat", [prefix_a, prefix_b] {
            return std::make_unique<CopycatSession>(prefix_a, prefix_b);
          }};
}

PlayReport play(const ConstantGame& g, const Strategy& s, const EnvPolicy& env, int max_ticks) {
  PlayReport rep;
  auto session = s.session();

  const ScriptEnv* script = std::get_if<ScriptEnv>(&env);
  std::mt19937_64 rng;
  bool random_done = false;
  int random_moves = 0;
  if (const RandomEnv* r = std::get_if<RandomEnv>(&env)) rng.seed(r->seed);
  std::size_t script_at = 0;

  std::size_t background = 0;
  int last_env_tick = -1;

  for (int tick = 0; tick < max_ticks; ++tick) {
    std::vector<std::string> delta;
    bool env_exhausted = false;
    if (script) {
      while (script_at < script->moves.size() && script->moves[script_at].first == tick)
        delta.push_back(script->moves[script_at++].second);
      env_exhausted = script_at == script->moves.size();
    } else {
      const RandomEnv& r = std::get<RandomEnv>(env);
      if (!random_done) {
        if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < r.stop_prob) {
          random_done = true;
        } else {
          std::vector<std::string> options;
          for (const auto& m : g.moves(rep.run))
            if (m.by == Player::Environment) options.push_back(m.move);
          if (options.empty()) {
            random_done = true;
          } else {
            std::sort(options.begin(), options.end());
            delta.push_back(
                options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)]);
            if (++random_moves >= r.max_moves) random_done = true;
          }
        }
      }
      env_exhausted = random_done;
    }

    for (const auto& m : delta) {
      rep.run.push_back({Player::Environment, m});
      rep.ticks.push_back(tick);
      background = std::max(background, m.size());
      last_env_tick = tick;
    }
    auto emitted = session->step(delta);
    for (const auto& m : emitted) {
      rep.run.push_back({Player::Machine, m});
      rep.ticks.push_back(tick);
      rep.machine_metrics.push_back(
          {m, tick, m.size(), background, last_env_tick >= 0 ? tick - last_env_tick : 0});
    }
    if (env_exhausted && delta.empty() && emitted.empty()) {
      rep.quiescent = true;
      break;
    }
  }
  rep.verdict = adjudicate(g, rep.run);
  return rep;
}

std::string print_play_report(const PlayReport& r) {
  std::ostringstream os;
  for (std::size_t i = 0; i < r.run.size(); ++i)
    os << r.ticks[i] << " " << player_mark(r.run[i].by) << " " << r.run[i].move << "\n";
  os << "verdict " << player_mark(r.verdict.winner);
  if (r.verdict.offender) os << " offender " << player_mark(*r.verdict.offender);
  os << "\n";
  for (const auto& m : r.machine_metrics)
    os << "metric " << m.move << " size " << m.size << " background " << m.background
       << " timecost " << m.timecost << "\n";
  return os.str();
}

namespace {

struct Verifier {
  const ConstantGame& g;
  const Strategy& s;
  VerifyBudget budget;
  VerifyReport rep;
  std::size_t behavior_cap = 20000;

  // Replays one behavior (a sequence of environment injections, each played
  // once the machine has gone quiet). Returns false if the tick budget ran
  // out with the machine still talking.
  bool simulate(const std::vector<std::string>& events, Run& run) {
    auto session = s.session();
    int tick = 0;
    auto settle = [&]() {
      while (tick < budget.max_ticks) {
        auto ms = session->step({});
        ++tick;
        for (const auto& m : ms) run.push_back({Player::Machine, m});
        if (ms.empty()) return true;
      }
      return false;
    };
    if (!settle()) return false;
    for (const auto& e : events) {
      run.push_back({Player::Environment, e});
      auto ms = session->step({e});
      ++tick;
      for (const auto& m : ms) run.push_back({Player::Machine, m});
      if (!settle()) return false;
    }
    return true;
  }

  // Depth-first over behaviors; false aborts the walk.
  bool explore(std::vector<std::string>& events) {
    if (++rep.behaviors > behavior_cap) {
      rep.conclusive = false;
      return false;
    }
    Run run;
    if (!simulate(events, run)) {
      rep.conclusive = false;
      return false;
    }
    Verdict v = adjudicate(g, run);
    if (v.winner != Player::Machine) {
      rep.ok = false;
      rep.counterexample = run;
      return false;
    }
    // An illegal run is settled for good: the offender has lost and the move
    // oracle is undefined past this point, so the branch ends here.
    if (v.offender) return true;
    if (static_cast<int>(events.size()) >= budget.max_env_moves) return true;

    std::vector<std::string> candidates;
    for (const auto& m : g.moves(run))
      if (m.by == Player::Environment) candidates.push_back(m.move);
    std::sort(candidates.begin(), candidates.end());
    std::string illegal = "!?";
    while (std::find(candidates.begin(), candidates.end(), illegal) != candidates.end())
      illegal += "!";
    candidates.push_back(illegal);

    for (const auto& c : candidates) {
      events.push_back(c);
      bool go = explore(events);
      events.pop_back();
      if (!go) return false;
    }
    return true;
  }
};

}  // namespace

VerifyReport verify_strategy(const ConstantGame& g, const Strategy& s, const VerifyBudget& budget) {
  Verifier v{g, s, budget, {}, 20000};
  std::vector<std::string> events;
  v.explore(events);
  return v.rep;
}

}  // namespace colkit
