#pragma once

// Universes, valuations, interpretations, and the compositional evaluation of
// formulas into constant games at bounded scale.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "colkit/gamecore.hpp"
#include "colkit/syntax.hpp"

namespace colkit {

using Individual = long;

struct Universe {
  std::vector<Individual> domain;                 // finite, nonempty
  std::map<std::string, Individual> denotation;   // constant name -> individual
  // True iff the denotation is a bijection onto the domain.
  bool ideal() const;
};

// Domain {0..domain_size-1}; constants "0".."constant_count-1", each denoting
// its value mod domain_size. constant_count < 0 means one name per element.
Universe standard_universe(int domain_size, int constant_count = -1);

struct Valuation {
  std::map<std::string, Individual> at;
};

struct FunctionInterp {
  std::size_t arity = 0;
  std::function<Individual(const std::vector<Individual>&)> fn;
};
struct ElementaryInterp {
  std::size_t arity = 0;
  std::function<bool(const std::vector<Individual>&)> fn;
};
struct GeneralInterp {
  std::size_t arity = 0;
  std::function<ConstantGame(const std::vector<Individual>&)> fn;
};

struct Interpretation {
  Universe universe;
  std::map<std::string, FunctionInterp> functions;
  std::map<std::string, ElementaryInterp> elementaries;
  std::map<std::string, GeneralInterp> generals;
  // When true, letters without an entry read as false (moveless loss for
  // general letters) instead of raising an error. Sound for testing proved
  // strategies, which must win under every interpretation.
  bool default_false = false;
};

// Successor/plus/times mod the domain size, no letters interpreted.
Interpretation standard_arith(Universe u);

// An n-ary game: a universe, the variables it depends on, and the instance
// map valuation -> constant game.
struct GameFamily {
  Universe universe;
  std::set<std::string> depends_on;
  std::function<ConstantGame(const Valuation&)> at;
};

struct EvalBounds {
  // Names used by choice/parallel/sequential/toggling quantifiers, and the
  // copy count of the bounded recurrences. Empty means "use the universe's
  // named constants".
  std::vector<std::string> constants;
  int thread_depth = 3;      // branching recurrences span 2^thread_depth threads
  int seq_switch_max = 0;    // extra exploration allowance for toggling switches; 0 = twice the family size
};

Individual eval_term(const Term& t, const Valuation& e, const Interpretation& i);

// Compositional evaluation. Choice/parallel/sequential/toggling quantifiers
// and all bounded recurrences range over bounds.constants; blind quantifiers
// range over the full domain and require the body to present one game
// structure per instance (std::invalid_argument names the violation).
ConstantGame eval_formula(const Formula& f, const Valuation& e, const Interpretation& i,
                          const EvalBounds& bounds);

enum class ClosureKind { ChAll, ChEx, BlindAll, BlindEx };
// Prefixes f with the chosen quantifier over its free variables, outermost
// first in lexicographic order.
Formula closure(const Formula& f, ClosureKind kind);

struct StructureReport {
  bool ok = true;
  bool conclusive = true;   // false when the budget ran out first
  Valuation base;           // the fixed values of the other variables
  Individual left = 0, right = 0;  // the two instantiations that disagree
  Run witness;              // position where their structures differ
};

// Checks that the family's game structure does not depend on var: for every
// valuation of the other variables and every pair of var values, the legal
// move menus must agree at every position. The budget caps visited positions.
StructureReport check_unistructural(const GameFamily& fam, const std::string& var,
                                    std::size_t budget);

// Interpretation files: line-oriented, '#' comments.
//   domain 10
//   constants 10
//   constant 7 3
//   fun '/1 mod succ      (mod shorthands: succ, add, mul)
//   fun f/1 table 1 2 3 0 1 2 3 0 1 2
//   elem p/1 table 0 1 0 1 0 1 0 1 0 1
//   elem Even/1 mod even  (shorthands: even, odd, true, false)
//   gen P/1 0 ( T B:a => win B )
//   gen P/1 * win T       ('*' is the default for unlisted tuples)
// Function and elementary tables are row-major over domain tuples.
Interpretation parse_interpretation(const std::string& text);

}  // namespace colkit
