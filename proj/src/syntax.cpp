#include "colkit/syntax.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace colkit {

Term mk_var(std::string name) { return Term{TermKind::Var, std::move(name), {}}; }
Term mk_num(std::string digits) { return Term{TermKind::Num, std::move(digits), {}}; }
Term mk_app(std::string fn, std::vector<Term> args) {
  return Term{TermKind::App, std::move(fn), std::move(args)};
}

Formula mk_top() { return Formula{Op::Top, "", {}, {}}; }
Formula mk_bot() { return Formula{Op::Bot, "", {}, {}}; }
Formula mk_equal(Term a, Term b) { return Formula{Op::Equal, "", {std::move(a), std::move(b)}, {}}; }
Formula mk_elem(std::string letter, std::vector<Term> args) {
  return Formula{Op::Elem, std::move(letter), std::move(args), {}};
}
Formula mk_gen(std::string letter, std::vector<Term> args) {
  return Formula{Op::Gen, std::move(letter), std::move(args), {}};
}
Formula mk_unary(Op op, Formula kid) {
  Formula f{op, "", {}, {}};
  f.kids.push_back(std::move(kid));
  return f;
}
Formula mk_binary(Op op, Formula a, Formula b) {
  Formula f{op, "", {}, {}};
  f.kids.push_back(std::move(a));
  f.kids.push_back(std::move(b));
  return f;
}
Formula mk_quant(Op op, std::string var, Formula body) {
  Formula f{op, std::move(var), {}, {}};
  f.kids.push_back(std::move(body));
  return f;
}

bool is_atom(const Formula& f) {
  switch (f.op) {
    case Op::Top: case Op::Bot: case Op::Equal: case Op::Elem: case Op::Gen: return true;
    default: return false;
  }
}

bool is_literal(const Formula& f) {
  return is_atom(f) || (f.op == Op::Not && is_atom(f.kids[0]));
}

bool is_unary(Op op) {
  switch (op) {
    case Op::Not: case Op::BRec: case Op::CoBRec: case Op::PRec: case Op::CoPRec:
    case Op::SRec: case Op::CoSRec: case Op::TRec: case Op::CoTRec: return true;
    default: return false;
  }
}

bool is_binary(Op op) {
  switch (op) {
    case Op::PAnd: case Op::POr: case Op::ChAnd: case Op::ChOr: case Op::SAnd:
    case Op::SOr: case Op::TAnd: case Op::TOr: case Op::Imp: return true;
    default: return false;
  }
}

bool is_quantifier(Op op) {
  switch (op) {
    case Op::BlindAll: case Op::BlindEx: case Op::ChAll: case Op::ChEx: case Op::PAll:
    case Op::PEx: case Op::SAll: case Op::SEx: case Op::TAll: case Op::TEx: return true;
    default: return false;
  }
}

std::string system_name(SystemId sys) {
  switch (sys) {
    case SystemId::CL7: return "cl7";
    case SystemId::IntPlus: return "intplus";
    case SystemId::CL15: return "cl15";
    case SystemId::CL13: return "cl13";
    case SystemId::CL4: return "cl4";
    case SystemId::CL12: return "cl12";
  }
  return "?";
}

std::optional<SystemId> system_from_name(const std::string& name) {
  if (name == "cl7") return SystemId::CL7;
  if (name == "intplus" || name == "int+") return SystemId::IntPlus;
  if (name == "cl15") return SystemId::CL15;
  if (name == "cl13") return SystemId::CL13;
  if (name == "cl4") return SystemId::CL4;
  if (name == "cl12") return SystemId::CL12;
  return std::nullopt;
}

ParseError::ParseError(std::string msg, std::size_t at)
    : std::runtime_error(msg + " (at offset " + std::to_string(at) + ")"), pos(at) {}

namespace {

enum class Tok {
  End, LParen, RParen, Comma, Colon, Eq, Tick, Plus, Star,
  Tilde, PAnd, POr, Imp, OBrimp, ChAnd, ChOr, SAnd, SOr, TAnd, TOr,
  BRec, CoBRec, PRec, CoPRec, SRec, CoSRec, TRec, CoTRec,
  SeqG, SeqR, Top, Bot, Quant, Ident, Num,
};

struct Token {
  Tok kind;
  std::string text;  // ident, numeral, or quantifier keyword
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) { ++pos_; continue; }
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    std::size_t at = pos_;
    if (pos_ >= src_.size()) { cur_ = {Tok::End, "", at}; return; }
    auto two = src_.substr(pos_, 2);
    char c = src_[pos_];
    auto emit = [&](Tok k, std::size_t len) {
      cur_ = {k, src_.substr(at, len), at};
      pos_ += len;
    };
    if (two == "/\\") return emit(Tok::PAnd, 2);
    if (two == "\\/") return emit(Tok::POr, 2);
    if (two == "->") return emit(Tok::Imp, 2);
    if (two == "=>") return emit(Tok::SeqG, 2);
    if (c == 'o' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
      if (pos_ + 2 < src_.size() && src_[pos_ + 2] == '>') return emit(Tok::OBrimp, 3);
      return emit(Tok::SeqR, 2);
    }
    if (two == ".&") return emit(Tok::SAnd, 2);
    if (two == ".|") return emit(Tok::SOr, 2);
    if (two == ".!") return emit(Tok::SRec, 2);
    if (two == ".?") return emit(Tok::CoSRec, 2);
    if (two == "%&") return emit(Tok::TAnd, 2);
    if (two == "%|") return emit(Tok::TOr, 2);
    if (two == "%!") return emit(Tok::TRec, 2);
    if (two == "%?") return emit(Tok::CoTRec, 2);
    if (two == "!!") return emit(Tok::PRec, 2);
    if (two == "??") return emit(Tok::CoPRec, 2);
    switch (c) {
      case '(': return emit(Tok::LParen, 1);
      case ')': return emit(Tok::RParen, 1);
      case ',': return emit(Tok::Comma, 1);
      case ':': return emit(Tok::Colon, 1);
      case '=': return emit(Tok::Eq, 1);
      case '\'': return emit(Tok::Tick, 1);
      case '+': return emit(Tok::Plus, 1);
      case '*': return emit(Tok::Star, 1);
      case '~': return emit(Tok::Tilde, 1);
      case '&': return emit(Tok::ChAnd, 1);
      case '|': return emit(Tok::ChOr, 1);
      case '!': return emit(Tok::BRec, 1);
      case '?': return emit(Tok::CoBRec, 1);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t n = pos_;
      while (n < src_.size() && std::isdigit(static_cast<unsigned char>(src_[n]))) ++n;
      std::string digits = src_.substr(pos_, n - pos_);
      if (digits.size() > 1 && digits[0] == '0')
        throw ParseError("numeral with leading zero", at);
      cur_ = {Tok::Num, digits, at};
      pos_ = n;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t n = pos_;
      while (n < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[n])) || src_[n] == '_'))
        ++n;
      std::string word = src_.substr(pos_, n - pos_);
      pos_ = n;
      if (word == "top") { cur_ = {Tok::Top, word, at}; return; }
      if (word == "bot") { cur_ = {Tok::Bot, word, at}; return; }
      static const std::map<std::string, int> kQuants = {
          {"fa", 0}, {"ex", 0}, {"ca", 0}, {"ce", 0}, {"pa", 0},
          {"pe", 0}, {"sa", 0}, {"se", 0}, {"ta", 0}, {"te", 0}};
      if (kQuants.count(word)) { cur_ = {Tok::Quant, word, at}; return; }
      cur_ = {Tok::Ident, word, at};
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", at);
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  Token cur_{Tok::End, "", 0};
};

Op quant_op(const std::string& kw) {
  if (kw == "fa") return Op::BlindAll;
  if (kw == "ex") return Op::BlindEx;
  if (kw == "ca") return Op::ChAll;
  if (kw == "ce") return Op::ChEx;
  if (kw == "pa") return Op::PAll;
  if (kw == "pe") return Op::PEx;
  if (kw == "sa") return Op::SAll;
  if (kw == "se") return Op::SEx;
  if (kw == "ta") return Op::TAll;
  return Op::TEx;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  Formula formula() {
    Formula f = imp();
    expect(Tok::End, "end of input");
    check_arities(f);
    return f;
  }

  Sequent sequent() {
    Sequent s;
    bool have_sep = false;
    if (lex_.peek().kind == Tok::SeqG || lex_.peek().kind == Tok::SeqR) {
      s.flavor = lex_.take().kind == Tok::SeqG ? SequentFlavor::Gentzen : SequentFlavor::Reduction;
      have_sep = true;
    } else {
      s.antecedent.push_back(imp());
      while (lex_.peek().kind == Tok::Comma) {
        lex_.take();
        s.antecedent.push_back(imp());
      }
      if (lex_.peek().kind == Tok::SeqG || lex_.peek().kind == Tok::SeqR) {
        s.flavor = lex_.take().kind == Tok::SeqG ? SequentFlavor::Gentzen : SequentFlavor::Reduction;
        have_sep = true;
      }
    }
    if (!have_sep)
      throw ParseError("expected sequent separator => or o-", lex_.peek().pos);
    s.succedent = imp();
    expect(Tok::End, "end of input");
    for (const auto& g : s.antecedent) check_arities(g);
    check_arities(s.succedent);
    return s;
  }

  Term term_only() {
    Term t = term();
    expect(Tok::End, "end of input");
    return t;
  }

 private:
  void expect(Tok k, const char* what) {
    if (lex_.peek().kind != k)
      throw ParseError(std::string("expected ") + what, lex_.peek().pos);
    lex_.take();
  }

  Formula imp() {
    Formula lhs = disj();
    if (lex_.peek().kind == Tok::Imp) {
      lex_.take();
      return mk_binary(Op::Imp, std::move(lhs), imp());
    }
    if (lex_.peek().kind == Tok::OBrimp) {
      lex_.take();
      return mk_binary(Op::Imp, mk_unary(Op::BRec, std::move(lhs)), imp());
    }
    return lhs;
  }

  Formula disj() {
    Formula f = conj();
    for (;;) {
      Op op;
      switch (lex_.peek().kind) {
        case Tok::POr: op = Op::POr; break;
        case Tok::ChOr: op = Op::ChOr; break;
        case Tok::SOr: op = Op::SOr; break;
        case Tok::TOr: op = Op::TOr; break;
        default: return f;
      }
      lex_.take();
      f = mk_binary(op, std::move(f), conj());
    }
  }

  Formula conj() {
    Formula f = unary();
    for (;;) {
      Op op;
      switch (lex_.peek().kind) {
        case Tok::PAnd: op = Op::PAnd; break;
        case Tok::ChAnd: op = Op::ChAnd; break;
        case Tok::SAnd: op = Op::SAnd; break;
        case Tok::TAnd: op = Op::TAnd; break;
        default: return f;
      }
      lex_.take();
      f = mk_binary(op, std::move(f), unary());
    }
  }

  Formula unary() {
    switch (lex_.peek().kind) {
      case Tok::Tilde: lex_.take(); return mk_unary(Op::Not, unary());
      case Tok::BRec: lex_.take(); return mk_unary(Op::BRec, unary());
      case Tok::CoBRec: lex_.take(); return mk_unary(Op::CoBRec, unary());
      case Tok::PRec: lex_.take(); return mk_unary(Op::PRec, unary());
      case Tok::CoPRec: lex_.take(); return mk_unary(Op::CoPRec, unary());
      case Tok::SRec: lex_.take(); return mk_unary(Op::SRec, unary());
      case Tok::CoSRec: lex_.take(); return mk_unary(Op::CoSRec, unary());
      case Tok::TRec: lex_.take(); return mk_unary(Op::TRec, unary());
      case Tok::CoTRec: lex_.take(); return mk_unary(Op::CoTRec, unary());
      case Tok::Quant: {
        Token kw = lex_.take();
        Token var = lex_.peek();
        expect(Tok::Ident, "bound variable");
        if (std::isupper(static_cast<unsigned char>(var.text[0])))
          throw ParseError("bound variable must be lowercase", var.pos);
        expect(Tok::Colon, "':' after bound variable");
        return mk_quant(quant_op(kw.text), var.text, imp());
      }
      default: return primary();
    }
  }

  Formula primary() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::LParen: {
        lex_.take();
        Formula f = imp();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Top: lex_.take(); return mk_top();
      case Tok::Bot: lex_.take(); return mk_bot();
      case Tok::Ident:
      case Tok::Num: {
        std::size_t at = t.pos;
        // Uppercase heads are general atoms and never occur inside terms.
        if (t.kind == Tok::Ident && std::isupper(static_cast<unsigned char>(t.text[0]))) {
          Token name = lex_.take();
          std::vector<Term> args;
          if (lex_.peek().kind == Tok::LParen) {
            lex_.take();
            args.push_back(term());
            while (lex_.peek().kind == Tok::Comma) {
              lex_.take();
              args.push_back(term());
            }
            expect(Tok::RParen, "')'");
          }
          return mk_gen(name.text, std::move(args));
        }
        Term lhs = term();
        if (lex_.peek().kind == Tok::Eq) {
          lex_.take();
          Term rhs = term();
          return mk_equal(std::move(lhs), std::move(rhs));
        }
        // A bare term here must actually be a predicate atom.
        if (lhs.kind == TermKind::Num)
          throw ParseError("numeral is not a formula (expected '=')", at);
        if (lhs.kind == TermKind::App &&
            (lhs.text == "'" || lhs.text == "+" || lhs.text == "*"))
          throw ParseError("arithmetic term is not a formula (expected '=')", at);
        std::string letter = lhs.text;
        std::vector<Term> args = std::move(lhs.args);
        bool upper = std::isupper(static_cast<unsigned char>(letter[0]));
        return upper ? mk_gen(letter, std::move(args)) : mk_elem(letter, std::move(args));
      }
      default:
        throw ParseError("expected a formula", t.pos);
    }
  }

  Term term() {
    Term t = addend();
    while (lex_.peek().kind == Tok::Plus) {
      lex_.take();
      t = mk_app("+", {std::move(t), addend()});
    }
    return t;
  }

  Term addend() {
    Term t = factor();
    while (lex_.peek().kind == Tok::Star) {
      lex_.take();
      t = mk_app("*", {std::move(t), factor()});
    }
    return t;
  }

  Term factor() {
    Term t = base();
    while (lex_.peek().kind == Tok::Tick) {
      lex_.take();
      t = mk_app("'", {std::move(t)});
    }
    return t;
  }

  Term base() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Num) return mk_num(lex_.take().text);
    if (t.kind != Tok::Ident) throw ParseError("expected a term", t.pos);
    if (std::isupper(static_cast<unsigned char>(t.text[0])))
      throw ParseError("uppercase name inside a term (variables and function letters are lowercase)",
                       t.pos);
    Token name = lex_.take();
    if (lex_.peek().kind != Tok::LParen) return mk_var(name.text);
    lex_.take();
    std::vector<Term> args;
    args.push_back(term());
    while (lex_.peek().kind == Tok::Comma) {
      lex_.take();
      args.push_back(term());
    }
    expect(Tok::RParen, "')'");
    return mk_app(name.text, std::move(args));
  }

  // One letter, one arity, per sort; likewise for function letters.
  void check_arities(const Formula& f) {
    std::map<std::string, std::size_t> fns, elems, gens;
    walk_arities(f, fns, elems, gens);
  }

  void walk_term_arities(const Term& t, std::map<std::string, std::size_t>& fns) {
    if (t.kind != TermKind::App) return;
    auto [it, fresh] = fns.emplace(t.text, t.args.size());
    if (!fresh && it->second != t.args.size())
      throw ParseError("function letter '" + t.text + "' used with two arities", 0);
    for (const auto& a : t.args) walk_term_arities(a, fns);
  }

  void walk_arities(const Formula& f, std::map<std::string, std::size_t>& fns,
                    std::map<std::string, std::size_t>& elems,
                    std::map<std::string, std::size_t>& gens) {
    if (f.op == Op::Elem || f.op == Op::Gen) {
      auto& table = f.op == Op::Elem ? elems : gens;
      auto [it, fresh] = table.emplace(f.name, f.terms.size());
      if (!fresh && it->second != f.terms.size())
        throw ParseError("letter '" + f.name + "' used with two arities", 0);
    }
    for (const auto& t : f.terms) walk_term_arities(t, fns);
    for (const auto& k : f.kids) walk_arities(k, fns, elems, gens);
  }

  Lexer lex_;
};

}  // namespace

Formula parse_formula(const std::string& text) { return Parser(text).formula(); }
Sequent parse_sequent(const std::string& text) { return Parser(text).sequent(); }
Term parse_term(const std::string& text) { return Parser(text).term_only(); }

std::string print_term(const Term& t) {
  switch (t.kind) {
    case TermKind::Var:
    case TermKind::Num:
      return t.text;
    case TermKind::App: {
      if (t.text == "'") return print_term(t.args[0]) + "'";
      if (t.text == "+" || t.text == "*") {
        // + and * are left-associative, * binds tighter; the term grammar has
        // no parentheses, so right-nested or looser subterms cannot print.
        const Term& l = t.args[0];
        const Term& r = t.args[1];
        bool bad_r = r.kind == TermKind::App && (r.text == t.text || (t.text == "*" && r.text == "+"));
        bool bad_l = t.text == "*" && l.kind == TermKind::App && l.text == "+";
        if (bad_r || bad_l)
          throw std::runtime_error("term shape not expressible in the surface grammar: " + t.text);
        return print_term(l) + t.text + print_term(r);
      }
      std::string s = t.text + "(";
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) s += ",";
        s += print_term(t.args[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

namespace {

const char* binary_token(Op op) {
  switch (op) {
    case Op::PAnd: return " /\\ ";
    case Op::POr: return " \\/ ";
    case Op::ChAnd: return " & ";
    case Op::ChOr: return " | ";
    case Op::SAnd: return " .& ";
    case Op::SOr: return " .| ";
    case Op::TAnd: return " %& ";
    case Op::TOr: return " %| ";
    case Op::Imp: return " -> ";
    default: return "?";
  }
}

const char* unary_token(Op op) {
  switch (op) {
    case Op::Not: return "~";
    case Op::BRec: return "!";
    case Op::CoBRec: return "?";
    case Op::PRec: return "!!";
    case Op::CoPRec: return "??";
    case Op::SRec: return ".!";
    case Op::CoSRec: return ".?";
    case Op::TRec: return "%!";
    case Op::CoTRec: return "%?";
    default: return "?";
  }
}

const char* quant_token(Op op) {
  switch (op) {
    case Op::BlindAll: return "fa";
    case Op::BlindEx: return "ex";
    case Op::ChAll: return "ca";
    case Op::ChEx: return "ce";
    case Op::PAll: return "pa";
    case Op::PEx: return "pe";
    case Op::SAll: return "sa";
    case Op::SEx: return "se";
    case Op::TAll: return "ta";
    case Op::TEx: return "te";
    default: return "?";
  }
}

// Operands that would change meaning (or swallow following tokens) print
// parenthesized: any binary, implication, or quantifier in operand position.
bool operand_needs_parens(const Formula& child) {
  return is_binary(child.op) || is_quantifier(child.op);
}

std::string pr(const Formula& f);

std::string pr_operand(const Formula& child, bool allowed_same, Op parent) {
  bool same = child.op == parent;
  if (operand_needs_parens(child) && !(same && allowed_same)) return "(" + pr(child) + ")";
  return pr(child);
}

std::string pr(const Formula& f) {
  switch (f.op) {
    case Op::Top: return "top";
    case Op::Bot: return "bot";
    case Op::Equal: return print_term(f.terms[0]) + " = " + print_term(f.terms[1]);
    case Op::Elem:
    case Op::Gen: {
      if (f.terms.empty()) return f.name;
      std::string s = f.name + "(";
      for (std::size_t i = 0; i < f.terms.size(); ++i) {
        if (i) s += ",";
        s += print_term(f.terms[i]);
      }
      return s + ")";
    }
    default: break;
  }
  if (is_unary(f.op)) {
    const Formula& kid = f.kids[0];
    std::string tok = unary_token(f.op);
    std::string inner = pr(kid);
    if (operand_needs_parens(kid)) return tok + "(" + inner + ")";
    // "!" directly before another "!" would lex back as the two-character
    // parallel-recurrence token, so keep the operand bracketed; same for "?".
    if ((tok == "!" || tok == "?") && inner[0] == tok[0]) return tok + "(" + inner + ")";
    return tok + inner;
  }
  if (f.op == Op::Imp)
    return pr_operand(f.kids[0], false, f.op) + binary_token(f.op) +
           pr_operand(f.kids[1], true, f.op);  // right-associative chain stays flat
  if (is_binary(f.op)) {
    // left-associative chain stays flat on the left
    return pr_operand(f.kids[0], true, f.op) + binary_token(f.op) +
           pr_operand(f.kids[1], false, f.op);
  }
  // quantifier
  return std::string(quant_token(f.op)) + " " + f.name + ": " + pr(f.kids[0]);
}

}  // namespace

std::string print_formula(const Formula& f) { return pr(f); }

std::string print_sequent(const Sequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
    if (i) out += ", ";
    out += pr(s.antecedent[i]);
  }
  if (!s.antecedent.empty()) out += " ";
  out += s.flavor == SequentFlavor::Gentzen ? "=>" : "o-";
  out += " " + pr(s.succedent);
  return out;
}

namespace {

Op dual(Op op) {
  switch (op) {
    case Op::PAnd: return Op::POr;
    case Op::POr: return Op::PAnd;
    case Op::ChAnd: return Op::ChOr;
    case Op::ChOr: return Op::ChAnd;
    case Op::SAnd: return Op::SOr;
    case Op::SOr: return Op::SAnd;
    case Op::TAnd: return Op::TOr;
    case Op::TOr: return Op::TAnd;
    case Op::BRec: return Op::CoBRec;
    case Op::CoBRec: return Op::BRec;
    case Op::PRec: return Op::CoPRec;
    case Op::CoPRec: return Op::PRec;
    case Op::SRec: return Op::CoSRec;
    case Op::CoSRec: return Op::SRec;
    case Op::TRec: return Op::CoTRec;
    case Op::CoTRec: return Op::TRec;
    case Op::BlindAll: return Op::BlindEx;
    case Op::BlindEx: return Op::BlindAll;
    case Op::ChAll: return Op::ChEx;
    case Op::ChEx: return Op::ChAll;
    case Op::PAll: return Op::PEx;
    case Op::PEx: return Op::PAll;
    case Op::SAll: return Op::SEx;
    case Op::SEx: return Op::SAll;
    case Op::TAll: return Op::TEx;
    case Op::TEx: return Op::TAll;
    default: return op;
  }
}

Formula nnf_neg(const Formula& f);

Formula nnf_pos(const Formula& f) {
  if (f.op == Op::Imp) return mk_binary(Op::POr, nnf_neg(f.kids[0]), nnf_pos(f.kids[1]));
  if (f.op == Op::Not) return nnf_neg(f.kids[0]);
  Formula out = f;
  for (auto& k : out.kids) k = nnf_pos(k);
  return out;
}

Formula nnf_neg(const Formula& f) {
  switch (f.op) {
    case Op::Top: return mk_bot();
    case Op::Bot: return mk_top();
    case Op::Equal:
    case Op::Elem:
    case Op::Gen: return mk_unary(Op::Not, f);
    case Op::Not: return nnf_pos(f.kids[0]);
    case Op::Imp: return mk_binary(Op::PAnd, nnf_pos(f.kids[0]), nnf_neg(f.kids[1]));
    default: break;
  }
  if (is_unary(f.op)) return mk_unary(dual(f.op), nnf_neg(f.kids[0]));
  if (is_binary(f.op)) return mk_binary(dual(f.op), nnf_neg(f.kids[0]), nnf_neg(f.kids[1]));
  return mk_quant(dual(f.op), f.name, nnf_neg(f.kids[0]));
}

}  // namespace

Formula nnf(const Formula& f) { return nnf_pos(f); }

Sequent nnf(const Sequent& s) {
  Sequent out = s;
  for (auto& g : out.antecedent) g = nnf_pos(g);
  out.succedent = nnf_pos(out.succedent);
  return out;
}

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> vs;
  if (t.kind == TermKind::Var) vs.insert(t.text);
  for (const auto& a : t.args)
    for (auto& v : free_vars(a)) vs.insert(v);
  return vs;
}

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> vs;
  for (const auto& t : f.terms)
    for (auto& v : free_vars(t)) vs.insert(v);
  for (const auto& k : f.kids)
    for (auto& v : free_vars(k)) vs.insert(v);
  if (is_quantifier(f.op)) vs.erase(f.name);
  return vs;
}

std::set<std::string> free_vars(const Sequent& s) {
  std::set<std::string> vs = free_vars(s.succedent);
  for (const auto& g : s.antecedent)
    for (auto& v : free_vars(g)) vs.insert(v);
  return vs;
}

std::set<std::string> all_vars(const Formula& f) {
  std::set<std::string> vs;
  for (const auto& t : f.terms)
    for (auto& v : free_vars(t)) vs.insert(v);
  for (const auto& k : f.kids)
    for (auto& v : all_vars(k)) vs.insert(v);
  if (is_quantifier(f.op)) vs.insert(f.name);
  return vs;
}

namespace {

void term_constants(const Term& t, std::set<std::string>& out) {
  if (t.kind == TermKind::Num) out.insert(t.text);
  for (const auto& a : t.args) term_constants(a, out);
}

void formula_constants(const Formula& f, std::set<std::string>& out) {
  for (const auto& t : f.terms) term_constants(t, out);
  for (const auto& k : f.kids) formula_constants(k, out);
}

}  // namespace

std::set<std::string> constants_of(const Formula& f) {
  std::set<std::string> out;
  formula_constants(f, out);
  return out;
}

std::set<std::string> constants_of(const Sequent& s) {
  std::set<std::string> out;
  for (const auto& g : s.antecedent) formula_constants(g, out);
  formula_constants(s.succedent, out);
  return out;
}

namespace {

Term subst_term(const Term& t, const std::string& var, const Term& repl) {
  if (t.kind == TermKind::Var) return t.text == var ? repl : t;
  if (t.kind == TermKind::Num) return t;
  Term out = t;
  for (auto& a : out.args) a = subst_term(a, var, repl);
  return out;
}

}  // namespace

Formula substitute(const Formula& f, const std::string& var, const Term& t) {
  if (is_atom(f)) {
    Formula out = f;
    for (auto& tm : out.terms) tm = subst_term(tm, var, t);
    return out;
  }
  if (is_quantifier(f.op)) {
    if (f.name == var) return f;  // var is shadowed here
    if (t.kind == TermKind::Var && t.text == f.name) {
      // Incoming variable would be captured: rename the binder first.
      std::set<std::string> avoid = all_vars(f);
      avoid.insert(var);
      avoid.insert(t.text);
      std::string fresh;
      for (int i = 0;; ++i) {
        fresh = f.name + std::to_string(i);
        if (!avoid.count(fresh)) break;
      }
      Formula body = substitute(f.kids[0], f.name, mk_var(fresh));
      return mk_quant(f.op, fresh, substitute(body, var, t));
    }
    Formula out = f;
    out.kids[0] = substitute(f.kids[0], var, t);
    return out;
  }
  Formula out = f;
  for (auto& k : out.kids) k = substitute(k, var, t);
  return out;
}

namespace {

void check_cl7(const Formula& f, std::vector<std::string>& out) {
  if (f.op == Op::Gen) {
    if (!f.terms.empty()) out.push_back("cl7: general letter '" + f.name + "' must be nullary");
    return;
  }
  if (f.op == Op::Imp) {
    check_cl7(f.kids[0], out);
    check_cl7(f.kids[1], out);
    return;
  }
  out.push_back("cl7: operator not in fragment (only -> over nullary general letters): " +
                print_formula(f));
}

void check_intplus(const Formula& f, std::vector<std::string>& out) {
  if (f.op == Op::Gen) {
    if (!f.terms.empty()) out.push_back("intplus: general letter '" + f.name + "' must be nullary");
    return;
  }
  if (f.op == Op::ChAnd || f.op == Op::ChOr) {
    check_intplus(f.kids[0], out);
    check_intplus(f.kids[1], out);
    return;
  }
  if (f.op == Op::Imp && f.kids[0].op == Op::BRec) {
    check_intplus(f.kids[0].kids[0], out);
    check_intplus(f.kids[1], out);
    return;
  }
  out.push_back("intplus: operator not in fragment (only &, |, o-> over nullary general letters): " +
                print_formula(f));
}

void check_cl15(const Formula& f, std::vector<std::string>& out) {
  switch (f.op) {
    case Op::Gen:
      if (!f.terms.empty()) out.push_back("cl15: general letter '" + f.name + "' must be nullary");
      return;
    case Op::Not:
      if (f.kids[0].op != Op::Gen)
        out.push_back("cl15: negation must sit on a general atom: " + print_formula(f));
      else
        check_cl15(f.kids[0], out);
      return;
    case Op::PAnd:
    case Op::POr:
      check_cl15(f.kids[0], out);
      check_cl15(f.kids[1], out);
      return;
    case Op::BRec:
    case Op::CoBRec:
      check_cl15(f.kids[0], out);
      return;
    default:
      out.push_back("cl15: operator not in fragment: " + print_formula(f));
  }
}

void check_cl13(const Formula& f, std::vector<std::string>& out) {
  switch (f.op) {
    case Op::Top:
    case Op::Bot:
      return;
    case Op::Elem:
    case Op::Gen:
      if (!f.terms.empty()) out.push_back("cl13: letter '" + f.name + "' must be nullary");
      return;
    case Op::Not:
      if (!is_atom(f.kids[0]))
        out.push_back("cl13: negation must sit on an atom: " + print_formula(f));
      else
        check_cl13(f.kids[0], out);
      return;
    case Op::PAnd: case Op::POr: case Op::ChAnd: case Op::ChOr:
    case Op::SAnd: case Op::SOr: case Op::TAnd: case Op::TOr:
      check_cl13(f.kids[0], out);
      check_cl13(f.kids[1], out);
      return;
    default:
      out.push_back("cl13: operator not in fragment: " + print_formula(f));
  }
}

void check_cl4_ops(const Formula& f, bool allow_general, std::vector<std::string>& out) {
  const char* tag = allow_general ? "cl4" : "cl12";
  switch (f.op) {
    case Op::Top:
    case Op::Bot:
    case Op::Equal:
    case Op::Elem:
      return;
    case Op::Gen:
      if (!allow_general)
        out.push_back(std::string(tag) + ": general letter '" + f.name + "' not allowed");
      return;
    case Op::Not:
      if (!is_atom(f.kids[0]))
        out.push_back(std::string(tag) + ": negation must sit on an atom: " + print_formula(f));
      else
        check_cl4_ops(f.kids[0], allow_general, out);
      return;
    case Op::PAnd: case Op::POr: case Op::ChAnd: case Op::ChOr:
      check_cl4_ops(f.kids[0], allow_general, out);
      check_cl4_ops(f.kids[1], allow_general, out);
      return;
    case Op::BlindAll: case Op::BlindEx: case Op::ChAll: case Op::ChEx:
      check_cl4_ops(f.kids[0], allow_general, out);
      return;
    default:
      out.push_back(std::string(tag) + ": operator not in fragment: " + print_formula(f));
  }
}

void bound_vars(const Formula& g, std::set<std::string>& bs) {
  if (is_quantifier(g.op)) bs.insert(g.name);
  for (const auto& k : g.kids) bound_vars(k, bs);
}

// "No quantifier binds a variable which also has a free occurrence."
void check_cl4_vars(const Formula& f, std::vector<std::string>& out, const char* tag) {
  std::set<std::string> free = free_vars(f);
  std::set<std::string> bound;
  bound_vars(f, bound);
  for (const auto& v : bound)
    if (free.count(v))
      out.push_back(std::string(tag) + ": variable '" + v +
                    "' is both bound and free in " + print_formula(f));
}

}  // namespace

std::vector<std::string> fragment_check(const Formula& f, SystemId sys) {
  std::vector<std::string> out;
  switch (sys) {
    case SystemId::CL7: check_cl7(f, out); break;
    case SystemId::IntPlus: check_intplus(f, out); break;
    case SystemId::CL15: check_cl15(nnf(f), out); break;
    case SystemId::CL13: check_cl13(nnf(f), out); break;
    case SystemId::CL4: {
      Formula n = nnf(f);
      check_cl4_ops(n, true, out);
      check_cl4_vars(n, out, "cl4");
      break;
    }
    case SystemId::CL12: {
      Formula n = nnf(f);
      check_cl4_ops(n, false, out);
      check_cl4_vars(n, out, "cl12");
      break;
    }
  }
  return out;
}

std::vector<std::string> fragment_check(const Sequent& s, SystemId sys) {
  std::vector<std::string> out;
  bool gentzen_sys = sys == SystemId::CL7 || sys == SystemId::IntPlus;
  if (gentzen_sys && s.flavor != SequentFlavor::Gentzen)
    out.push_back(system_name(sys) + ": sequent must use =>");
  if (sys == SystemId::CL12 && s.flavor != SequentFlavor::Reduction)
    out.push_back("cl12: sequent must use o-");
  if (!gentzen_sys && sys != SystemId::CL12)
    out.push_back(system_name(sys) + ": system has no sequents");
  for (const auto& g : s.antecedent)
    for (auto& v : fragment_check(g, sys)) out.push_back(v);
  for (auto& v : fragment_check(s.succedent, sys)) out.push_back(v);
  return out;
}

}  // namespace colkit
