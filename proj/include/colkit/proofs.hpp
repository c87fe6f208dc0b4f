#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "colkit/cirquent15.hpp"
#include "colkit/classical.hpp"
#include "colkit/syntax.hpp"

namespace colkit {

// A path from the root of a formula to one of its subformula occurrences: the
// child index taken at each level. The empty path is the root. Paths print
// dotted ("0.1.0"), with "e" for the empty path.
using OccPath = std::vector<int>;

std::string print_path(const OccPath& p);
OccPath parse_path(const std::string& text);

// Null when the path walks out of the tree.
const Formula* subformula_at(const Formula& f, const OccPath& p);
Formula replace_at(const Formula& f, const OccPath& p, Formula g);

// Paths (in preorder, which is also lexicographic order) of the nodes
// satisfying `node` whose strict ancestors all satisfy `through`. The root's
// ancestor set is empty, so the root qualifies whenever `node` does.
std::vector<OccPath> find_occurrences(const Formula& f,
                                      const std::function<bool(const Formula&)>& node,
                                      const std::function<bool(Op)>& through);

// The official form of a statement: implications expanded and negation pushed
// to atoms. Proof statements are kept in this form in every system except CL7
// and Int+, whose rules work on the implicational structure directly.
Formula officialize(const Formula& f);
Sequent officialize(const Sequent& s);

// Stability maps. Each one turns the named fragment's formulas into elementary
// formulas whose classical validity defines stability.
Formula quasielementarize(const Formula& f);   // CL13, collapses everything but toggles
Formula elementarize_cl13(const Formula& f);   // CL13, input must be quasielementary
Formula elementarize_cl4(const Formula& f);
Formula elementarize_cl12(const Sequent& s);

struct ProofStep {
  int index = 0;  // 1-based position in the proof text
  std::variant<Formula, Sequent> statement;
  std::string rule;
  std::vector<int> premises;                  // indices of earlier steps
  std::map<std::string, std::string> params;  // rule details: occ, side, term, ...

  const Formula& formula() const { return std::get<Formula>(statement); }
  const Sequent& sequent() const { return std::get<Sequent>(statement); }
  bool is_sequent() const { return std::holds_alternative<Sequent>(statement); }
};

struct Proof {
  SystemId system = SystemId::CL4;
  std::vector<ProofStep> steps;

  const ProofStep& last() const { return steps.back(); }
  const ProofStep& at(int index) const { return steps.at(static_cast<std::size_t>(index) - 1); }
};

enum class Provability { Provable, NotProvable, Unknown };

struct ProveResult {
  Provability kind = Provability::Unknown;
  std::optional<Proof> proof;  // present when kind is Provable, except under CL15
  std::optional<CirquentProof> cirquent;  // the CL15 counterpart of `proof`
  std::string detail;                     // why the search gave up, when it did
};

struct ProveLimits {
  ClassicalEffort effort = ClassicalEffort::fo(2);  // stability checks in CL4 and CL12
  int replicate_budget = 2;  // CL12: extra copies allowed per original antecedent formula
  int max_steps = 48;        // CL15: iterative-deepening ceiling on proof length
  int max_width = 10;        // CL15: prune cirquents wider than this many oformulas
};

// Validates every step against the rules of p.system and, when a goal is
// given, that the final statement matches it (officialized where the system
// calls for that). Returns complaints; an empty list means the proof is good.
// CL15 proofs live in the cirquent format and have their own checker.
std::vector<std::string> check_proof(const Proof& p);
std::vector<std::string> check_proof(const Proof& p, const Formula& goal);
std::vector<std::string> check_proof(const Proof& p, const Sequent& goal);

ProveResult prove(SystemId sys, const Formula& goal, const ProveLimits& lim = {});
ProveResult prove(SystemId sys, const Sequent& goal, const ProveLimits& lim = {});

// CL12's consequence relation: premises o- conclusion, proved as one sequent.
ProveResult logical_consequence(const std::vector<Formula>& premises, const Formula& conclusion,
                                const ProveLimits& lim = {});

// Proof text, one step per line:
//   n. <statement> :: <Rule> [premise,premise] {key=value key=value}
// Blank lines and lines starting with # are skipped. The premise list and the
// parameter block are omitted when empty.
std::string print_proof(const Proof& p);
Proof parse_proof(const std::string& text, SystemId sys);
Proof load_proof(const std::string& path, SystemId sys);

// Per-system entry points. prove() and check_proof() dispatch to these; tests
// and the acceptance runner also call them directly.
ProveResult prove_cl7(const Sequent& goal, bool with_contraction);
ProveResult prove_intplus(const Sequent& goal);
ProveResult prove_cl13(const Formula& goal, bool reverse_order = false);
ProveResult prove_cl4(const Formula& goal, const ProveLimits& lim = {});
ProveResult prove_cl12(const Sequent& goal, const ProveLimits& lim = {});
ProveResult prove_cl15_formula(const Formula& goal, const ProveLimits& lim = {});

std::vector<std::string> check_cl7(const Proof& p, bool with_contraction);
std::vector<std::string> check_intplus(const Proof& p);
std::vector<std::string> check_cl13(const Proof& p);
std::vector<std::string> check_cl4(const Proof& p, const ProveLimits& lim = {});
std::vector<std::string> check_cl12(const Proof& p, const ProveLimits& lim = {});

}  // namespace colkit
