#pragma once

#include <string>

#include "colkit/syntax.hpp"

namespace colkit {

enum class Validity { Valid, Invalid, Unknown };

struct ClassicalVerdict {
  Validity kind = Validity::Unknown;
  std::string detail;  // countermodel description, or the bound that ran out
};

struct ClassicalEffort {
  bool first_order = false;
  int depth = 2;  // instantiation rounds and max countermodel domain size

  static ClassicalEffort prop() { return {false, 0}; }
  static ClassicalEffort fo(int k) { return {true, k}; }
};

// True for formulas built purely from classical material: top/bot, equality,
// elementary atoms, ~, /\, \/, ->, fa, ex.
bool is_elementary(const Formula& f);

// Classical validity of an elementary formula; free variables are read
// universally. Propositional effort is a complete decision over nullary-atom
// formulas. First-order effort is sound and incomplete: refutation by ground
// instantiation (with congruence closure for equality) decides Valid,
// quantifier-free formulas are decided completely, and otherwise a bounded
// finite-model search may return Invalid; everything else is Unknown.
ClassicalVerdict classical_valid(const Formula& f, ClassicalEffort effort);

// Cheap falsifiability probe: looks for a structure with at most max_n
// elements (skipping any domain size whose structure count exceeds combo_cap)
// that falsifies the universally read formula. True settles Invalid without
// paying for a doomed refutation attempt; false settles nothing.
bool small_countermodel(const Formula& f, int max_n, long combo_cap);

}  // namespace colkit
