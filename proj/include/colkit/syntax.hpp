#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace colkit {

// Terms: variables, decimal constants, and function applications.
// The postfix successor tick and infix + * are surface sugar for the
// function letters "'", "+", "*".
enum class TermKind { Var, Num, App };

struct Term {
  TermKind kind = TermKind::Var;
  std::string text;        // variable name, numeral digits, or function letter
  std::vector<Term> args;  // App only

  bool operator==(const Term&) const = default;
};

Term mk_var(std::string name);
Term mk_num(std::string digits);
Term mk_app(std::string fn, std::vector<Term> args);

enum class Op {
  // atoms
  Top,
  Bot,
  Equal,  // terms[0] = terms[1]
  Elem,   // lowercase letter, any arity
  Gen,    // uppercase letter, any arity
  // unary
  Not,
  BRec,    // ! branching recurrence
  CoBRec,  // ? branching corecurrence
  PRec,    // !! parallel recurrence
  CoPRec,  // ?? parallel corecurrence
  SRec,    // .! sequential recurrence
  CoSRec,  // .? sequential corecurrence
  TRec,    // %! toggling recurrence
  CoTRec,  // %? toggling corecurrence
  // binary
  PAnd,  // /\ parallel and
  POr,   // \/ parallel or
  ChAnd, // &  choice and
  ChOr,  // |  choice or
  SAnd,  // .& sequential and
  SOr,   // .| sequential or
  TAnd,  // %& toggling and
  TOr,   // %| toggling or
  Imp,   // -> implication
  // quantifiers (name = bound variable, kids[0] = body)
  BlindAll,  // fa
  BlindEx,   // ex
  ChAll,     // ca
  ChEx,      // ce
  PAll,      // pa
  PEx,       // pe
  SAll,      // sa
  SEx,       // se
  TAll,      // ta
  TEx,       // te
};

struct Formula {
  Op op = Op::Top;
  std::string name;           // atom letter or bound variable
  std::vector<Term> terms;    // atom arguments (Equal: exactly two)
  std::vector<Formula> kids;  // unary/quantifier: one; binary: two

  bool operator==(const Formula&) const = default;
};

Formula mk_top();
Formula mk_bot();
Formula mk_equal(Term a, Term b);
Formula mk_elem(std::string letter, std::vector<Term> args = {});
Formula mk_gen(std::string letter, std::vector<Term> args = {});
Formula mk_unary(Op op, Formula kid);
Formula mk_binary(Op op, Formula a, Formula b);
Formula mk_quant(Op op, std::string var, Formula body);

bool is_atom(const Formula& f);
bool is_literal(const Formula& f);  // atom or negated atom
bool is_unary(Op op);
bool is_binary(Op op);
bool is_quantifier(Op op);

enum class SequentFlavor { Gentzen, Reduction };

struct Sequent {
  std::vector<Formula> antecedent;
  Formula succedent;
  SequentFlavor flavor = SequentFlavor::Gentzen;

  bool operator==(const Sequent&) const = default;
};

enum class SystemId { CL7, IntPlus, CL15, CL13, CL4, CL12 };

std::string system_name(SystemId sys);
std::optional<SystemId> system_from_name(const std::string& name);

struct ParseError : std::runtime_error {
  std::size_t pos;  // byte offset into the source text
  ParseError(std::string msg, std::size_t at);
};

Formula parse_formula(const std::string& text);
Sequent parse_sequent(const std::string& text);
Term parse_term(const std::string& text);

std::string print_term(const Term& t);
std::string print_formula(const Formula& f);
std::string print_sequent(const Sequent& s);

// Negation normal form: pushes ~ to atoms through every duality and expands
// A -> B into ~A \/ B. Idempotent.
Formula nnf(const Formula& f);
Sequent nnf(const Sequent& s);

// Free/bound variable utilities.
std::set<std::string> free_vars(const Term& t);
std::set<std::string> free_vars(const Formula& f);
std::set<std::string> free_vars(const Sequent& s);
std::set<std::string> all_vars(const Formula& f);  // free and bound
std::set<std::string> constants_of(const Formula& f);
std::set<std::string> constants_of(const Sequent& s);

// Capture-avoiding substitution of a constant or variable for a free variable.
Formula substitute(const Formula& f, const std::string& var, const Term& t);

// Fragment membership. CL15/CL13/CL4/CL12 judge the nnf image (negation on
// non-atoms and -> are abbreviations there); CL7/IntPlus judge the raw tree
// since -> and the o-> pattern are their native connectives.
std::vector<std::string> fragment_check(const Formula& f, SystemId sys);
std::vector<std::string> fragment_check(const Sequent& s, SystemId sys);

}  // namespace colkit
