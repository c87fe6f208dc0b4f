#pragma once

// Plays a machine strategy against an environment policy over a constant
// game, measures amplitude and timecost, and verifies strategies by
// enumerating environment behaviors at bounded scale.

#include <cstdint>
#include <memory>
#include <variant>

#include "colkit/gamecore.hpp"

namespace colkit {

// A strategy session observes environment moves and emits machine moves. The
// play loop calls step once per tick with the environment moves that arrived
// since the previous call (possibly none); the session returns the moves to
// emit this tick. Sessions never see tick numbers, which keeps strategies
// timing-blind; determinism is the author's obligation.
class StrategySession {
 public:
  virtual ~StrategySession() = default;
  virtual std::vector<std::string> step(const std::vector<std::string>& observed) = 0;
};

struct Strategy {
  std::string name;
  std::function<std::unique_ptr<StrategySession>()> session;
};

// Never moves.
Strategy silent_strategy();
// Emits the given batches on successive ticks, regardless of observations.
Strategy script_strategy(std::vector<std::vector<std::string>> batches);
// Mirrors moves across two parallel-branch prefixes: an observed environment
// move prefix_a+m is answered with prefix_b+m and vice versa, in arrival
// order. Other observations are ignored.
Strategy copycat(const std::string& prefix_a, const std::string& prefix_b);

// Environment behaviors for play(): a fixed script of (tick, move) pairs with
// strictly increasing ticks, or seeded random play over the legal moves.
// Exhaustive enumeration is not a playable policy; verify_strategy owns it.
struct ScriptEnv {
  std::vector<std::pair<int, std::string>> moves;
};
struct RandomEnv {
  std::uint64_t seed = 0;
  double stop_prob = 0.25;  // chance per tick of going permanently silent
  int max_moves = 8;
};
using EnvPolicy = std::variant<ScriptEnv, RandomEnv>;

struct MoveMetrics {
  std::string move;
  int tick = 0;
  std::size_t size = 0;        // length of the move string
  std::size_t background = 0;  // greatest size of any earlier environment move
  int timecost = 0;            // tick minus the last environment-move tick, 0 if none
};

struct PlayReport {
  Run run;
  std::vector<int> ticks;  // tick of each run entry
  Verdict verdict{Player::Machine, std::nullopt};
  std::vector<MoveMetrics> machine_metrics;
  bool quiescent = false;  // ended by mutual silence rather than the tick cap
};

// Discrete tick loop: each tick appends the policy's due environment moves,
// feeds them to the strategy, and appends its emissions. Ends at max_ticks or
// when the policy is exhausted and a full tick passes with no move on either
// side. Illegal moves are adjudicated, never rejected.
PlayReport play(const ConstantGame& g, const Strategy& s, const EnvPolicy& env, int max_ticks);

// Run log: one "tick player move" line per move, then a verdict line, then
// one metrics line per machine move.
std::string print_play_report(const PlayReport& r);

struct VerifyBudget {
  int max_env_moves = 3;
  int max_ticks = 64;
};

struct VerifyReport {
  bool ok = true;
  bool conclusive = true;  // false when a budget stopped the enumeration
  Run counterexample;      // first losing run when !ok
  std::size_t behaviors = 0;
};

// Enumerates environment behaviors up to the budget: between machine bursts
// the environment may stay silent for good, play any legal move, or play one
// representative illegal move. Every resulting run must be won by Machine.
VerifyReport verify_strategy(const ConstantGame& g, const Strategy& s, const VerifyBudget& budget);

}  // namespace colkit
