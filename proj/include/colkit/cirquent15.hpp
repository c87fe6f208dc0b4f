#pragma once

#include <map>
#include <string>
#include <vector>

#include "colkit/syntax.hpp"

namespace colkit {

// The proof objects of CL15. Oformulas are formula occurrences; undergroups
// and overgroups are index sets into the oformula sequence (0-based here,
// 1-based in the text form). Every oformula must belong to at least one group
// of each layer. Groups with equal contents still count separately.
struct Cirquent {
  std::vector<Formula> oformulas;
  std::vector<std::vector<int>> under;
  std::vector<std::vector<int>> over;

  bool operator==(const Cirquent&) const = default;
};

// One line of a cirquent proof: the cirquent plus the rule by which it follows
// from the previous line. The opening line carries "Axiom" and no params.
struct CirquentStep {
  Cirquent c;
  std::string rule;
  std::map<std::string, std::string> params;
};

struct CirquentProof {
  std::vector<CirquentStep> steps;
};

// Structural requirements on a cirquent; an empty list means well formed.
std::vector<std::string> cirquent_problems(const Cirquent& c);

// The axiom on F1..Fn: oformulas ~F1,F1,...,~Fn,Fn with one diamond per pair,
// mirrored in both group layers.
Cirquent axiom_cirquent(const std::vector<Formula>& fs);

// Axiom recognition up to reordering of oformulas and groups.
bool is_axiom(const Cirquent& c);

// The nine rules, read premise-from-conclusion. Throws invalid_argument when
// the rule does not apply as parameterized. Rule names: ExchangeF, ExchangeU,
// ExchangeO, Weakening, Contraction, DuplicationU, DuplicationO, Merging,
// DisjIntro, ConjIntro, RecIntro, CorecIntro (Exchange and Duplication count
// once each toward the nine). Params are 1-based, matching the text form.
Cirquent apply_rule(const std::string& rule, const Cirquent& conclusion,
                    const std::map<std::string, std::string>& params);

// Sorted-group normal form. Cirquents that differ only in the order their
// groups are listed in compare equal after this; oformula order is kept.
Cirquent canon_cirquent(Cirquent c);

// Text form, three lines per cirquent:
//   O: {1,2} {2}
//   F: ~P ; P
//   U: {1,2}
// Proof files are sequences of such blocks, each preceded by a rule line
// ":: Rule {key=value ...}" (":: Axiom" opens), separated by blank lines.
// Lines starting with # are comments.
std::string print_cirquent(const Cirquent& c);
std::string print_cirquent_proof(const CirquentProof& p);
CirquentProof parse_cirquent_proof(const std::string& text);
CirquentProof load_cirquent_proof(const std::string& path);

// Replays every transition through apply_rule (comparing modulo group order),
// requires the opening line to be an axiom, and the closing line to be the
// one-oformula cirquent of the goal. Empty result means the proof is good.
std::vector<std::string> check_cirquent_proof(const CirquentProof& p, const Formula& goal);

// Whether the formula-preserving rules alone (Weakening, Duplication, Merging,
// Exchange) lead from some axiom down to this cirquent. Decided by pairing
// analysis rather than search, and exercised by rebuilding one such derivation
// when the answer is yes. Expects a well-formed cirquent.
bool cirquent_reaches_axiom(const Cirquent& c);

// GraphViz picture: overgroup dots on top, oformula boxes in the middle,
// undergroup dots at the bottom, arcs as edges.
std::string to_dot(const Cirquent& c);

}  // namespace colkit
