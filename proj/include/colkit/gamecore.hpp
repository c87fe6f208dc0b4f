#pragma once

// Runs, constant games, and the game operations at bounded scale. Games are
// oracles: a legality predicate, a winner function total on legal runs, and an
// enumerator of legal one-step extensions. All values are immutable and the
// operations are pure, so concurrent querying is safe.

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace colkit {

enum class Player { Machine, Environment };  // ⊤ / ⊥

Player opponent(Player p);
std::string player_mark(Player p);  // "T" for Machine, "B" for Environment

struct ColoredMove {
  Player by;
  std::string move;  // nonempty, printable
  bool operator==(const ColoredMove&) const = default;
};

// A position is a finite run; Run is used for both.
using Run = std::vector<ColoredMove>;
using Position = Run;

// Run literals: whitespace-separated "T:<move>" / "B:<move>" tokens.
Run parse_run(const std::string& text);
std::string print_run(const Run& r);

Run negate_run(Run r);  // flips every move's color

struct Verdict {
  Player winner;
  std::optional<Player> offender;  // set iff the run was illegal
};

struct ConstantGame {
  std::function<bool(const Run&)> legal;                       // prefix-closed
  std::function<Player(const Run&)> winner;                    // total on legal runs
  std::function<std::vector<ColoredMove>(const Position&)> moves;  // exactly the legal extensions
  // Exploration horizon: winner is total on legal runs up to this length, and
  // enumeration-based checks stop here. For most operators no legal run is
  // longer; toggling forms exceed it through repeatable switch moves.
  int depth_bound = 0;
};

ConstantGame moveless(Player w);

// Winner of a legal run; an illegal run is lost by the offender, the player
// of the first illegal move.
Verdict adjudicate(const ConstantGame& g, const Run& run);

// The game "g after pos". Throws std::invalid_argument if pos is illegal.
ConstantGame prefixation(const ConstantGame& g, const Position& pos);

ConstantGame op_not(ConstantGame g);

// Choice conjunction/disjunction. The first move picks a branch by its label:
// it is Environment's move under Conj and Machine's under Disj. An unresolved
// choice is lost by the chooser. Labels are "0"/"1" for the binary connectives
// and decimal constants for the quantifier and recurrence forms.
enum class ChoiceKind { Conj, Disj };
ConstantGame op_choice(ChoiceKind kind, std::vector<std::string> labels,
                       std::vector<ConstantGame> branches);

// Moves of the form prefix+beta, prefix stripped, colors and order kept.
// The prefix includes its dot, e.g. project(r, "1.").
Run project(const Run& r, const std::string& prefix);

// Parallel conjunction/disjunction. Every move is "<label>.<move>"; either
// player may move in any branch at any time. Conj is won when every branch
// projection is won, Disj when at least one is.
enum class ParallelKind { Conj, Disj };
ConstantGame op_parallel(ParallelKind kind, std::vector<std::string> labels,
                         std::vector<ConstantGame> branches);

// Blind quantifiers. All instances must share one gamestructure; the shared
// legality is checked by enumeration up to depth_bound and a violation throws
// std::invalid_argument naming a witness position. All wins when every
// instance wins, Ex loses only when every instance loses.
enum class BlindKind { All, Ex };
ConstantGame op_blind(BlindKind kind, const std::vector<ConstantGame>& instances);

// Sequential combination of n components. Component moves are "<i>.<move>";
// the bare numerals "1","2",... are switch moves and must arrive in exactly
// that order, each at most once, topping out at component n-1. The winner is
// the component last switched to, component 0 by default. Switch moves belong
// to Environment in Conj (Δ) forms and to Machine in CoConj (∇) forms; a
// switch by the other player is illegal.
enum class SeqKind { Conj, CoConj };
ConstantGame op_sequential(SeqKind kind, std::vector<ConstantGame> branches);

// Toggling combination. Switch moves are bare component indices "0".."n-1",
// repeatable in any order; the winner is the component named by the last
// switch, component 0 by default. Switches belong to Environment in Conj (⩘)
// forms and to Machine in CoConj (⩛) forms. The losing clause for infinitely
// many switches is unreachable at finite scale.
enum class ToggleKind { Conj, CoConj };
ConstantGame op_toggling(ToggleKind kind, std::vector<ConstantGame> branches);

// Thread projection for branching recurrences: keeps moves "u.<move>" whose
// bitstring u is an initial segment of w, stripped of the prefix. The empty
// bitstring is written "e", so "e.<move>" applies to every thread.
Run project_thread(const Run& r, const std::string& w);

// Branching recurrence over 2^thread_depth threads. Moves are "u.<move>" with
// u a bitstring of length <= thread_depth or "e"; a move applies to every
// thread extending u. Rec (⫰) is won when every thread is won, CoRec (⫯) when
// at least one is.
enum class BranchKind { Rec, CoRec };
ConstantGame op_branching(BranchKind kind, ConstantGame g, int thread_depth);

// Materialized finite game tree, the debugging and scripting counterpart of
// the oracle form. Text shape: "win T" and "win B" are moveless leaves;
// "( T <entries> )" is a node whose empty-continuation winner is T, with
// entries like "B:alpha => <tree>" for each legal move. Tokens are
// whitespace-separated.
struct GameTree {
  Player deflt = Player::Machine;
  std::vector<std::pair<ColoredMove, GameTree>> kids;
};

GameTree parse_game_tree(const std::string& text);
std::string print_game_tree(const GameTree& t);
ConstantGame tree_game(GameTree t);

// True iff delta is a color-delay of gamma: both color subsequences agree,
// and no move of the opposite color is later in delta relative to the moves
// of the given color (the color player's moves may only be postponed).
bool is_delay(const Run& gamma, const Run& delta, Player color);

struct StaticReport {
  bool ok = true;
  bool conclusive = true;  // false when the budget ran out first
  // On failure: the player whose delay broke, the original legal run, and
  // the delayed run that flipped the verdict against that player.
  Player player = Player::Machine;
  Run original;
  Run delayed;
};

// Checks the static property by enumeration: for each legal run, each player,
// and each delay of that run (legal or not), a win must stay a win and a
// non-offender must stay a non-offender. The budget caps the number of
// (run, delay) pairs examined.
StaticReport is_static(const ConstantGame& g, std::size_t budget);

// Extensional comparison to depth min(depth bounds): equal legality at every
// position and equal winner at every legal position. nullopt when the budget
// (a cap on visited positions) ran out before a verdict.
std::optional<bool> game_equal(const ConstantGame& a, const ConstantGame& b,
                               std::size_t budget);

}  // namespace colkit
