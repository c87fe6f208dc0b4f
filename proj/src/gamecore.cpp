#include "colkit/gamecore.hpp"

#include <algorithm>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace colkit {

Player opponent(Player p) {
  return p == Player::Machine ? Player::Environment : Player::Machine;
}

std::string player_mark(Player p) { return p == Player::Machine ? "T" : "B"; }

Run parse_run(const std::string& text) {
  Run out;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    if (tok.size() < 3 || tok[1] != ':' || (tok[0] != 'T' && tok[0] != 'B'))
      throw std::invalid_argument("bad run token: " + tok);
    out.push_back({tok[0] == 'T' ? Player::Machine : Player::Environment, tok.substr(2)});
  }
  return out;
}

std::string print_run(const Run& r) {
  std::string out;
  for (const auto& m : r) {
    if (!out.empty()) out += ' ';
    out += player_mark(m.by) + ":" + m.move;
  }
  return out;
}

Run negate_run(Run r) {
  for (auto& m : r) m.by = opponent(m.by);
  return r;
}

ConstantGame moveless(Player w) {
  ConstantGame g;
  g.legal = [](const Run& r) { return r.empty(); };
  g.winner = [w](const Run&) { return w; };
  g.moves = [](const Position&) { return std::vector<ColoredMove>{}; };
  g.depth_bound = 0;
  return g;
}

Verdict adjudicate(const ConstantGame& g, const Run& run) {
  Run prefix;
  prefix.reserve(run.size());
  for (const auto& m : run) {
    prefix.push_back(m);
    if (!g.legal(prefix)) return {opponent(m.by), m.by};
  }
  return {g.winner(run), std::nullopt};
}

ConstantGame prefixation(const ConstantGame& g, const Position& pos) {
  if (!g.legal(pos))
    throw std::invalid_argument("prefixation over an illegal position: " + print_run(pos));
  ConstantGame out;
  out.legal = [g, pos](const Run& r) {
    Run whole = pos;
    whole.insert(whole.end(), r.begin(), r.end());
    return g.legal(whole);
  };
  out.winner = [g, pos](const Run& r) {
    Run whole = pos;
    whole.insert(whole.end(), r.begin(), r.end());
    return g.winner(whole);
  };
  out.moves = [g, pos](const Position& r) {
    Run whole = pos;
    whole.insert(whole.end(), r.begin(), r.end());
    return g.moves(whole);
  };
  out.depth_bound = std::max(0, g.depth_bound - static_cast<int>(pos.size()));
  return out;
}

ConstantGame op_not(ConstantGame g) {
  ConstantGame out;
  out.legal = [g](const Run& r) { return g.legal(negate_run(r)); };
  out.winner = [g](const Run& r) { return opponent(g.winner(negate_run(r))); };
  out.moves = [g](const Position& r) {
    auto ms = g.moves(negate_run(r));
    for (auto& m : ms) m.by = opponent(m.by);
    return ms;
  };
  out.depth_bound = g.depth_bound;
  return out;
}

ConstantGame op_choice(ChoiceKind kind, std::vector<std::string> labels,
                       std::vector<ConstantGame> branches) {
  if (branches.empty()) throw std::invalid_argument("choice over an empty family");
  if (labels.size() != branches.size())
    throw std::invalid_argument("choice labels and branches differ in number");
  auto br = std::make_shared<const std::vector<ConstantGame>>(std::move(branches));
  auto lb = std::make_shared<const std::vector<std::string>>(std::move(labels));
  Player owner = kind == ChoiceKind::Conj ? Player::Environment : Player::Machine;
  Player unresolved = kind == ChoiceKind::Conj ? Player::Machine : Player::Environment;

  auto pick = [lb](const Run& r) -> int {
    for (std::size_t i = 0; i < lb->size(); ++i)
      if ((*lb)[i] == r.front().move) return static_cast<int>(i);
    return -1;
  };
  ConstantGame out;
  out.legal = [br, pick, owner](const Run& r) {
    if (r.empty()) return true;
    if (r.front().by != owner) return false;
    int i = pick(r);
    if (i < 0) return false;
    return (*br)[i].legal(Run(r.begin() + 1, r.end()));
  };
  out.winner = [br, pick, unresolved](const Run& r) {
    if (r.empty()) return unresolved;
    return (*br)[pick(r)].winner(Run(r.begin() + 1, r.end()));
  };
  out.moves = [br, lb, pick, owner](const Position& r) {
    std::vector<ColoredMove> ms;
    if (r.empty()) {
      for (const auto& l : *lb) ms.push_back({owner, l});
      return ms;
    }
    return (*br)[pick(r)].moves(Run(r.begin() + 1, r.end()));
  };
  int d = 0;
  for (const auto& b : *br) d = std::max(d, b.depth_bound);
  out.depth_bound = 1 + d;
  return out;
}

Run project(const Run& r, const std::string& prefix) {
  Run out;
  for (const auto& m : r)
    if (m.move.size() > prefix.size() && m.move.compare(0, prefix.size(), prefix) == 0)
      out.push_back({m.by, m.move.substr(prefix.size())});
  return out;
}

namespace {

// Splits "label.rest" against an explicit label list; -1 when no label fits.
int split_label(const std::vector<std::string>& labels, const std::string& move,
                std::string& rest) {
  auto dot = move.find('.');
  if (dot == std::string::npos || dot + 1 >= move.size()) return -1;
  std::string head = move.substr(0, dot);
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == head) {
      rest = move.substr(dot + 1);
      return static_cast<int>(i);
    }
  return -1;
}

bool is_numeral(const std::string& s) {
  if (s.empty()) return false;
  if (s.size() > 1 && s[0] == '0') return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Component index named by a bare numeral, or -1.
int numeral_index(const std::string& s, std::size_t n) {
  if (!is_numeral(s) || s.size() > 6) return -1;
  long v = std::stol(s);
  return v < static_cast<long>(n) ? static_cast<int>(v) : -1;
}

std::vector<std::string> index_labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

}  // namespace

ConstantGame op_parallel(ParallelKind kind, std::vector<std::string> labels,
                         std::vector<ConstantGame> branches) {
  if (branches.empty()) throw std::invalid_argument("parallel over an empty family");
  if (labels.size() != branches.size())
    throw std::invalid_argument("parallel labels and branches differ in number");
  auto br = std::make_shared<const std::vector<ConstantGame>>(std::move(branches));
  auto lb = std::make_shared<const std::vector<std::string>>(std::move(labels));

  ConstantGame out;
  out.legal = [br, lb](const Run& r) {
    for (const auto& m : r) {
      std::string rest;
      if (split_label(*lb, m.move, rest) < 0) return false;
    }
    for (std::size_t i = 0; i < br->size(); ++i)
      if (!(*br)[i].legal(project(r, (*lb)[i] + "."))) return false;
    return true;
  };
  out.winner = [br, lb, kind](const Run& r) {
    bool all = true, any = false;
    for (std::size_t i = 0; i < br->size(); ++i) {
      Player w = (*br)[i].winner(project(r, (*lb)[i] + "."));
      if (w == Player::Machine) any = true;
      else all = false;
    }
    bool won = kind == ParallelKind::Conj ? all : any;
    return won ? Player::Machine : Player::Environment;
  };
  out.moves = [br, lb](const Position& r) {
    std::vector<ColoredMove> ms;
    for (std::size_t i = 0; i < br->size(); ++i)
      for (const auto& m : (*br)[i].moves(project(r, (*lb)[i] + ".")))
        ms.push_back({m.by, (*lb)[i] + "." + m.move});
    return ms;
  };
  int d = 0;
  for (const auto& b : *br) d += b.depth_bound;
  out.depth_bound = d;
  return out;
}

ConstantGame op_blind(BlindKind kind, const std::vector<ConstantGame>& instances) {
  if (instances.empty()) throw std::invalid_argument("blind quantifier over an empty family");

  // All instances must present one gamestructure; walk the move tree of the
  // first instance and require identical move menus everywhere.
  {
    std::vector<Position> frontier{{}};
    auto menu = [](const ConstantGame& g, const Position& p) {
      auto ms = g.moves(p);
      std::sort(ms.begin(), ms.end(), [](const ColoredMove& a, const ColoredMove& b) {
        return a.by != b.by ? a.by < b.by : a.move < b.move;
      });
      return ms;
    };
    std::size_t seen = 0;
    while (!frontier.empty()) {
      Position p = std::move(frontier.back());
      frontier.pop_back();
      if (++seen > 200000)
        throw std::invalid_argument("blind quantifier structure check exceeded its budget");
      auto base = menu(instances[0], p);
      for (std::size_t i = 1; i < instances.size(); ++i)
        if (menu(instances[i], p) != base)
          throw std::invalid_argument("blind quantifier instances disagree at position: ⟨" +
                                      print_run(p) + "⟩");
      for (const auto& m : base) {
        Position q = p;
        q.push_back(m);
        frontier.push_back(std::move(q));
      }
    }
  }

  auto in = std::make_shared<const std::vector<ConstantGame>>(instances);
  ConstantGame out;
  out.legal = [in](const Run& r) { return (*in)[0].legal(r); };
  out.winner = [in, kind](const Run& r) {
    bool all = true, any = false;
    for (const auto& g : *in) {
      if (g.winner(r) == Player::Machine) any = true;
      else all = false;
    }
    bool won = kind == BlindKind::All ? all : any;
    return won ? Player::Machine : Player::Environment;
  };
  out.moves = [in](const Position& r) { return (*in)[0].moves(r); };
  out.depth_bound = (*in)[0].depth_bound;
  return out;
}

namespace {

// Shared scan for sequential runs: counts switches and validates the switch
// protocol (numerals 1,2,... in order, correct color). Component moves are
// validated against the index range only; projection legality is separate.
struct SeqScan {
  bool ok = false;
  int switches = 0;
};

SeqScan scan_sequential(const Run& r, std::size_t n, Player switcher) {
  SeqScan s;
  int next = 1;
  for (const auto& m : r) {
    auto dot = m.move.find('.');
    if (dot == std::string::npos) {
      if (numeral_index(m.move, n) != next || m.by != switcher) return s;
      ++next;
    } else {
      if (dot + 1 >= m.move.size()) return s;
      if (numeral_index(m.move.substr(0, dot), n) < 0) return s;
    }
  }
  s.ok = true;
  s.switches = next - 1;
  return s;
}

}  // namespace

ConstantGame op_sequential(SeqKind kind, std::vector<ConstantGame> branches) {
  if (branches.empty()) throw std::invalid_argument("sequential over an empty family");
  auto br = std::make_shared<const std::vector<ConstantGame>>(std::move(branches));
  auto lb = std::make_shared<const std::vector<std::string>>(index_labels(br->size()));
  Player switcher = kind == SeqKind::Conj ? Player::Environment : Player::Machine;

  ConstantGame out;
  out.legal = [br, lb, switcher](const Run& r) {
    if (!scan_sequential(r, br->size(), switcher).ok) return false;
    for (std::size_t i = 0; i < br->size(); ++i)
      if (!(*br)[i].legal(project(r, (*lb)[i] + "."))) return false;
    return true;
  };
  out.winner = [br, lb, switcher](const Run& r) {
    int j = scan_sequential(r, br->size(), switcher).switches;
    return (*br)[j].winner(project(r, (*lb)[j] + "."));
  };
  out.moves = [br, lb, switcher](const Position& r) {
    std::vector<ColoredMove> ms;
    for (std::size_t i = 0; i < br->size(); ++i)
      for (const auto& m : (*br)[i].moves(project(r, (*lb)[i] + ".")))
        ms.push_back({m.by, (*lb)[i] + "." + m.move});
    int done = scan_sequential(r, br->size(), switcher).switches;
    if (done + 1 < static_cast<int>(br->size()))
      ms.push_back({switcher, std::to_string(done + 1)});
    return ms;
  };
  int d = static_cast<int>(br->size()) - 1;
  for (const auto& b : *br) d += b.depth_bound;
  out.depth_bound = d;
  return out;
}

ConstantGame op_toggling(ToggleKind kind, std::vector<ConstantGame> branches) {
  if (branches.empty()) throw std::invalid_argument("toggling over an empty family");
  auto br = std::make_shared<const std::vector<ConstantGame>>(std::move(branches));
  auto lb = std::make_shared<const std::vector<std::string>>(index_labels(br->size()));
  Player switcher = kind == ToggleKind::Conj ? Player::Environment : Player::Machine;

  // Last switch in the run, component 0 when there is none.
  auto current = [br](const Run& r) {
    int j = 0;
    for (const auto& m : r) {
      if (m.move.find('.') != std::string::npos) continue;
      int i = numeral_index(m.move, br->size());
      if (i >= 0) j = i;
    }
    return j;
  };
  ConstantGame out;
  out.legal = [br, lb, switcher](const Run& r) {
    for (const auto& m : r) {
      auto dot = m.move.find('.');
      if (dot == std::string::npos) {
        if (numeral_index(m.move, br->size()) < 0 || m.by != switcher) return false;
      } else {
        if (dot + 1 >= m.move.size()) return false;
        if (numeral_index(m.move.substr(0, dot), br->size()) < 0) return false;
      }
    }
    for (std::size_t i = 0; i < br->size(); ++i)
      if (!(*br)[i].legal(project(r, (*lb)[i] + "."))) return false;
    return true;
  };
  out.winner = [br, lb, current](const Run& r) {
    int j = current(r);
    return (*br)[j].winner(project(r, (*lb)[j] + "."));
  };
  out.moves = [br, lb, switcher](const Position& r) {
    std::vector<ColoredMove> ms;
    for (std::size_t i = 0; i < br->size(); ++i)
      for (const auto& m : (*br)[i].moves(project(r, (*lb)[i] + ".")))
        ms.push_back({m.by, (*lb)[i] + "." + m.move});
    for (std::size_t i = 0; i < br->size(); ++i)
      ms.push_back({switcher, std::to_string(i)});
    return ms;
  };
  int d = 2 * static_cast<int>(br->size());
  for (const auto& b : *br) d += b.depth_bound;
  out.depth_bound = d;
  return out;
}

namespace {

// "u.rest" split for branching moves; u is "e" or a bitstring of length <= d.
bool split_thread(const std::string& move, int d, std::string& u, std::string& rest) {
  auto dot = move.find('.');
  if (dot == std::string::npos || dot + 1 >= move.size()) return false;
  u = move.substr(0, dot);
  rest = move.substr(dot + 1);
  if (u == "e") {
    u.clear();
    return true;
  }
  if (u.empty() || u.size() > static_cast<std::size_t>(d)) return false;
  return std::all_of(u.begin(), u.end(), [](char c) { return c == '0' || c == '1'; });
}

bool initial_segment(const std::string& u, const std::string& w) {
  return u.size() <= w.size() && w.compare(0, u.size(), u) == 0;
}

std::vector<std::string> all_bitstrings(int len) {
  std::vector<std::string> out{""};
  for (int i = 0; i < len; ++i) {
    std::vector<std::string> next;
    for (const auto& s : out) {
      next.push_back(s + "0");
      next.push_back(s + "1");
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

Run project_thread(const Run& r, const std::string& w) {
  Run out;
  for (const auto& m : r) {
    auto dot = m.move.find('.');
    if (dot == std::string::npos) continue;
    std::string u = m.move.substr(0, dot);
    if (u == "e") u.clear();
    if (initial_segment(u, w)) out.push_back({m.by, m.move.substr(dot + 1)});
  }
  return out;
}

ConstantGame op_branching(BranchKind kind, ConstantGame g, int thread_depth) {
  if (thread_depth < 0) throw std::invalid_argument("negative thread depth");
  auto threads = std::make_shared<const std::vector<std::string>>(all_bitstrings(thread_depth));
  ConstantGame out;
  out.legal = [g, thread_depth, threads](const Run& r) {
    for (const auto& m : r) {
      std::string u, rest;
      if (!split_thread(m.move, thread_depth, u, rest)) return false;
    }
    for (const auto& w : *threads)
      if (!g.legal(project_thread(r, w))) return false;
    return true;
  };
  out.winner = [g, threads, kind](const Run& r) {
    bool all = true, any = false;
    for (const auto& w : *threads) {
      if (g.winner(project_thread(r, w)) == Player::Machine) any = true;
      else all = false;
    }
    bool won = kind == BranchKind::Rec ? all : any;
    return won ? Player::Machine : Player::Environment;
  };
  out.moves = [g, thread_depth, threads](const Position& r) {
    std::vector<ColoredMove> ms;
    std::vector<std::string> prefixes{""};
    for (int len = 1; len <= thread_depth; ++len)
      for (const auto& p : all_bitstrings(len)) prefixes.push_back(p);
    for (const auto& u : prefixes) {
      // a move at u must be legal in every thread extending u
      std::vector<ColoredMove> common;
      bool first = true;
      for (const auto& w : *threads) {
        if (!initial_segment(u, w)) continue;
        auto local = g.moves(project_thread(r, w));
        if (first) {
          common = local;
          first = false;
        } else {
          std::vector<ColoredMove> keep;
          for (const auto& m : common)
            if (std::find(local.begin(), local.end(), m) != local.end()) keep.push_back(m);
          common = std::move(keep);
        }
        if (common.empty()) break;
      }
      for (const auto& m : common)
        ms.push_back({m.by, (u.empty() ? "e" : u) + "." + m.move});
    }
    return ms;
  };
  out.depth_bound = (1 << thread_depth) * g.depth_bound;
  return out;
}

namespace {

struct TreeTokens {
  std::vector<std::string> toks;
  std::size_t at = 0;
  const std::string& peek() {
    static const std::string end = "<end>";
    return at < toks.size() ? toks[at] : end;
  }
  std::string take() {
    if (at >= toks.size()) throw std::invalid_argument("game tree text ended early");
    return toks[at++];
  }
};

Player parse_mark(const std::string& s) {
  if (s == "T") return Player::Machine;
  if (s == "B") return Player::Environment;
  throw std::invalid_argument("expected player mark T or B, got: " + s);
}

GameTree parse_tree(TreeTokens& tt) {
  std::string t = tt.take();
  if (t == "win") return GameTree{parse_mark(tt.take()), {}};
  if (t != "(") throw std::invalid_argument("expected 'win' or '(' in game tree, got: " + t);
  GameTree node;
  node.deflt = parse_mark(tt.take());
  while (tt.peek() != ")") {
    std::string mark = tt.take();
    auto colon = mark.find(':');
    if (colon == std::string::npos || colon + 1 >= mark.size())
      throw std::invalid_argument("expected <player>:<move> in game tree, got: " + mark);
    ColoredMove m{parse_mark(mark.substr(0, colon)), mark.substr(colon + 1)};
    if (tt.take() != "=>") throw std::invalid_argument("expected => after game tree move");
    node.kids.emplace_back(m, parse_tree(tt));
  }
  tt.take();  // ")"
  return node;
}

int tree_height(const GameTree& t) {
  int h = 0;
  for (const auto& [m, k] : t.kids) h = std::max(h, 1 + tree_height(k));
  return h;
}

const GameTree* tree_walk(const GameTree& t, const Run& r, std::size_t at) {
  if (at == r.size()) return &t;
  for (const auto& [m, k] : t.kids)
    if (m == r[at]) return tree_walk(k, r, at + 1);
  return nullptr;
}

}  // namespace

GameTree parse_game_tree(const std::string& text) {
  TreeTokens tt;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) tt.toks.push_back(tok);
  GameTree t = parse_tree(tt);
  if (tt.at != tt.toks.size()) throw std::invalid_argument("trailing tokens after game tree");
  return t;
}

std::string print_game_tree(const GameTree& t) {
  if (t.kids.empty()) return "win " + player_mark(t.deflt);
  std::string out = "( " + player_mark(t.deflt);
  for (const auto& [m, k] : t.kids)
    out += " " + player_mark(m.by) + ":" + m.move + " => " + print_game_tree(k);
  return out + " )";
}

ConstantGame tree_game(GameTree t) {
  auto root = std::make_shared<const GameTree>(std::move(t));
  ConstantGame g;
  g.legal = [root](const Run& r) { return tree_walk(*root, r, 0) != nullptr; };
  g.winner = [root](const Run& r) {
    const GameTree* n = tree_walk(*root, r, 0);
    if (!n) throw std::invalid_argument("winner queried on an illegal run: " + print_run(r));
    return n->deflt;
  };
  g.moves = [root](const Position& r) {
    std::vector<ColoredMove> ms;
    if (const GameTree* n = tree_walk(*root, r, 0))
      for (const auto& [m, k] : n->kids) ms.push_back(m);
    return ms;
  };
  g.depth_bound = tree_height(*root);
  return g;
}

bool is_delay(const Run& gamma, const Run& delta, Player color) {
  auto side = [](const Run& r, Player p) {
    std::vector<std::string> out;
    for (const auto& m : r)
      if (m.by == p) out.push_back(m.move);
    return out;
  };
  Player opp = opponent(color);
  if (side(gamma, color) != side(delta, color)) return false;
  if (side(gamma, opp) != side(delta, opp)) return false;
  // Opposite-color moves may not drift later: before the n-th color move,
  // delta must show at least as many opposite-color moves as gamma does.
  auto counts = [&](const Run& r) {
    std::vector<std::size_t> out;  // opposite moves seen before each color move
    std::size_t seen = 0;
    for (const auto& m : r) {
      if (m.by == opp) ++seen;
      else out.push_back(seen);
    }
    return out;
  };
  auto cg = counts(gamma), cd = counts(delta);
  for (std::size_t n = 0; n < cg.size(); ++n)
    if (cd[n] < cg[n]) return false;
  return true;
}

namespace {

// All interleavings of the two color subsequences of r, i.e. all candidate
// delays before the drift condition is applied.
void merges(const std::vector<ColoredMove>& a, std::size_t i, const std::vector<ColoredMove>& b,
            std::size_t j, Run& acc, std::vector<Run>& out) {
  if (i == a.size() && j == b.size()) {
    out.push_back(acc);
    return;
  }
  if (i < a.size()) {
    acc.push_back(a[i]);
    merges(a, i + 1, b, j, acc, out);
    acc.pop_back();
  }
  if (j < b.size()) {
    acc.push_back(b[j]);
    merges(a, i, b, j + 1, acc, out);
    acc.pop_back();
  }
}

}  // namespace

StaticReport is_static(const ConstantGame& g, std::size_t budget) {
  StaticReport rep;
  std::size_t used = 0;
  std::vector<Position> frontier{{}};
  while (!frontier.empty()) {
    Position gamma = std::move(frontier.back());
    frontier.pop_back();
    if (++used > budget) {
      rep.conclusive = false;
      return rep;
    }
    Player won = g.winner(gamma);
    for (Player p : {Player::Machine, Player::Environment}) {
      std::vector<ColoredMove> mine, theirs;
      for (const auto& m : gamma) (m.by == p ? mine : theirs).push_back(m);
      std::vector<Run> candidates;
      Run acc;
      merges(mine, 0, theirs, 0, acc, candidates);
      for (const auto& delta : candidates) {
        if (++used > budget) {
          rep.conclusive = false;
          return rep;
        }
        if (!is_delay(gamma, delta, p)) continue;
        Verdict v = adjudicate(g, delta);
        bool lost_win = won == p && v.winner != p;
        bool became_offender = v.offender && *v.offender == p;
        if (lost_win || became_offender) {
          rep.ok = false;
          rep.player = p;
          rep.original = gamma;
          rep.delayed = delta;
          return rep;
        }
      }
    }
    if (static_cast<int>(gamma.size()) < g.depth_bound)
      for (const auto& m : g.moves(gamma)) {
        Position q = gamma;
        q.push_back(m);
        frontier.push_back(std::move(q));
      }
  }
  return rep;
}

std::optional<bool> game_equal(const ConstantGame& a, const ConstantGame& b, std::size_t budget) {
  int depth = std::min(a.depth_bound, b.depth_bound);
  std::size_t used = 0;
  std::vector<Position> frontier{{}};
  auto sorted = [](std::vector<ColoredMove> ms) {
    std::sort(ms.begin(), ms.end(), [](const ColoredMove& x, const ColoredMove& y) {
      return x.by != y.by ? x.by < y.by : x.move < y.move;
    });
    return ms;
  };
  while (!frontier.empty()) {
    Position p = std::move(frontier.back());
    frontier.pop_back();
    if (++used > budget) return std::nullopt;
    if (a.winner(p) != b.winner(p)) return false;
    auto ma = sorted(a.moves(p)), mb = sorted(b.moves(p));
    if (ma != mb) return false;
    if (static_cast<int>(p.size()) < depth)
      for (const auto& m : ma) {
        Position q = p;
        q.push_back(m);
        frontier.push_back(std::move(q));
      }
  }
  return true;
}

}  // namespace colkit
