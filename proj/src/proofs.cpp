#include "colkit/proofs.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace colkit {

std::string print_path(const OccPath& p) {
  if (p.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ".";
    out += std::to_string(p[i]);
  }
  return out;
}

OccPath parse_path(const std::string& text) {
  if (text == "e") return {};
  OccPath p;
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t j = text.find('.', i);
    if (j == std::string::npos) j = text.size();
    const std::string piece = text.substr(i, j - i);
    if (piece.empty() || piece.find_first_not_of("0123456789") != std::string::npos)
      throw std::runtime_error("bad occurrence path: " + text);
    p.push_back(std::stoi(piece));
    i = j + 1;
  }
  return p;
}

const Formula* subformula_at(const Formula& f, const OccPath& p) {
  const Formula* cur = &f;
  for (int step : p) {
    if (step < 0 || static_cast<std::size_t>(step) >= cur->kids.size()) return nullptr;
    cur = &cur->kids[static_cast<std::size_t>(step)];
  }
  return cur;
}

Formula replace_at(const Formula& f, const OccPath& p, Formula g) {
  if (p.empty()) return g;
  if (p[0] < 0 || static_cast<std::size_t>(p[0]) >= f.kids.size())
    throw std::runtime_error("occurrence path walks out of the formula");
  Formula out = f;
  OccPath rest(p.begin() + 1, p.end());
  out.kids[static_cast<std::size_t>(p[0])] =
      replace_at(f.kids[static_cast<std::size_t>(p[0])], rest, std::move(g));
  return out;
}

namespace {

void collect(const Formula& f, const std::function<bool(const Formula&)>& node,
             const std::function<bool(Op)>& through, OccPath& here,
             std::vector<OccPath>& out) {
  if (node(f)) out.push_back(here);
  if (!through(f.op)) return;
  for (std::size_t i = 0; i < f.kids.size(); ++i) {
    here.push_back(static_cast<int>(i));
    collect(f.kids[i], node, through, here, out);
    here.pop_back();
  }
}

}  // namespace

std::vector<OccPath> find_occurrences(const Formula& f,
                                      const std::function<bool(const Formula&)>& node,
                                      const std::function<bool(Op)>& through) {
  std::vector<OccPath> out;
  OccPath here;
  collect(f, node, through, here, out);
  return out;
}

Formula officialize(const Formula& f) { return nnf(f); }
Sequent officialize(const Sequent& s) { return nnf(s); }

Formula quasielementarize(const Formula& f) {
  switch (f.op) {
    case Op::SAnd:
    case Op::SOr:
      return quasielementarize(f.kids[0]);
    case Op::ChAnd:
      return mk_top();
    case Op::ChOr:
      return mk_bot();
    case Op::Gen:
      return mk_bot();
    case Op::Not:
      if (f.kids[0].op == Op::Gen) return mk_bot();
      return f;
    default:
      break;
  }
  Formula out = f;
  for (auto& k : out.kids) k = quasielementarize(k);
  return out;
}

Formula elementarize_cl13(const Formula& f) {
  if (f.op == Op::TAnd) return mk_top();
  if (f.op == Op::TOr) return mk_bot();
  Formula out = f;
  for (auto& k : out.kids) k = elementarize_cl13(k);
  return out;
}

Formula elementarize_cl4(const Formula& f) {
  switch (f.op) {
    case Op::ChOr:
    case Op::ChEx:
      return mk_bot();
    case Op::ChAnd:
    case Op::ChAll:
      return mk_top();
    case Op::Gen:
      return mk_bot();
    case Op::Not:
      if (f.kids[0].op == Op::Gen) return mk_bot();
      return f;
    case Op::PAnd:
    case Op::POr:
    case Op::BlindAll:
    case Op::BlindEx: {
      Formula out = f;
      for (auto& k : out.kids) k = elementarize_cl4(k);
      return out;
    }
    default:
      return f;
  }
}

Formula elementarize_cl12(const Sequent& s) {
  Formula concl = elementarize_cl4(s.succedent);
  if (s.antecedent.empty()) return concl;
  Formula ante = elementarize_cl4(s.antecedent[0]);
  for (std::size_t i = 1; i < s.antecedent.size(); ++i)
    ante = mk_binary(Op::PAnd, std::move(ante), elementarize_cl4(s.antecedent[i]));
  return mk_binary(Op::Imp, std::move(ante), std::move(concl));
}

std::string print_proof(const Proof& p) {
  std::string out;
  for (const auto& st : p.steps) {
    out += std::to_string(st.index) + ". ";
    out += st.is_sequent() ? print_sequent(st.sequent()) : print_formula(st.formula());
    out += " :: " + st.rule + " [";
    for (std::size_t i = 0; i < st.premises.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(st.premises[i]);
    }
    out += "]";
    if (!st.params.empty()) {
      out += " {";
      bool first = true;
      for (const auto& [k, v] : st.params) {
        if (!first) out += " ";
        first = false;
        out += k + "=" + v;
      }
      out += "}";
    }
    out += "\n";
  }
  return out;
}

namespace {

bool sequent_statements(SystemId sys) {
  return sys == SystemId::CL7 || sys == SystemId::IntPlus || sys == SystemId::CL12;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

Proof parse_proof(const std::string& text, SystemId sys) {
  Proof p;
  p.system = sys;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    auto bad = [&](const std::string& why) {
      return std::runtime_error("proof line " + std::to_string(lineno) + ": " + why);
    };

    std::size_t dot = s.find(". ");
    if (dot == std::string::npos || s.substr(0, dot).find_first_not_of("0123456789") != std::string::npos)
      throw bad("expected \"n. <statement> :: <rule> ...\"");
    ProofStep st;
    st.index = std::stoi(s.substr(0, dot));
    if (st.index != static_cast<int>(p.steps.size()) + 1) throw bad("steps must be numbered 1,2,...");

    std::size_t sep = s.rfind(" :: ");
    if (sep == std::string::npos || sep <= dot) throw bad("missing \" :: \" separator");
    std::string stmt = trim(s.substr(dot + 2, sep - dot - 2));
    std::string rest = trim(s.substr(sep + 4));

    if (sequent_statements(sys))
      st.statement = parse_sequent(stmt);
    else
      st.statement = parse_formula(stmt);

    std::size_t sp = rest.find_first_of(" \t");
    st.rule = sp == std::string::npos ? rest : rest.substr(0, sp);
    rest = sp == std::string::npos ? "" : trim(rest.substr(sp));
    if (st.rule.empty()) throw bad("missing rule name");

    if (!rest.empty() && rest[0] == '[') {
      std::size_t close = rest.find(']');
      if (close == std::string::npos) throw bad("unterminated premise list");
      std::string inner = rest.substr(1, close - 1);
      rest = trim(rest.substr(close + 1));
      std::size_t i = 0;
      while (i < inner.size()) {
        std::size_t j = inner.find(',', i);
        if (j == std::string::npos) j = inner.size();
        std::string piece = trim(inner.substr(i, j - i));
        if (piece.empty() || piece.find_first_not_of("0123456789") != std::string::npos)
          throw bad("bad premise index \"" + piece + "\"");
        int idx = std::stoi(piece);
        if (idx < 1 || idx >= st.index) throw bad("premise index out of range");
        st.premises.push_back(idx);
        i = j + 1;
      }
    }

    if (!rest.empty()) {
      if (rest.front() != '{' || rest.back() != '}') throw bad("unrecognized trailing text");
      std::istringstream ps(rest.substr(1, rest.size() - 2));
      std::string kv;
      while (ps >> kv) {
        std::size_t eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw bad("bad parameter \"" + kv + "\"");
        st.params[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
    }
    p.steps.push_back(std::move(st));
  }
  if (p.steps.empty()) throw std::runtime_error("proof has no steps");
  return p;
}

Proof load_proof(const std::string& path, SystemId sys) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open proof file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_proof(buf.str(), sys);
}

std::vector<std::string> check_proof(const Proof& p) {
  switch (p.system) {
    case SystemId::CL7: return check_cl7(p, false);
    case SystemId::IntPlus: return check_intplus(p);
    case SystemId::CL13: return check_cl13(p);
    case SystemId::CL4: return check_cl4(p);
    case SystemId::CL12: return check_cl12(p);
    case SystemId::CL15: return {"CL15 proofs live in the cirquent format and have their own checker"};
  }
  return {"unhandled system"};
}

namespace {

void check_final(const Proof& p, const std::variant<Formula, Sequent>& want,
                 std::vector<std::string>& errs) {
  if (p.steps.empty()) return;
  const auto& got = p.last().statement;
  bool ok = false;
  if (std::holds_alternative<Formula>(want) && std::holds_alternative<Formula>(got))
    ok = std::get<Formula>(want) == std::get<Formula>(got);
  else if (std::holds_alternative<Sequent>(want) && std::holds_alternative<Sequent>(got))
    ok = std::get<Sequent>(want) == std::get<Sequent>(got);
  if (!ok) errs.push_back("final statement is not the goal");
}

}  // namespace

std::vector<std::string> check_proof(const Proof& p, const Formula& goal) {
  auto errs = check_proof(p);
  switch (p.system) {
    case SystemId::CL7:
    case SystemId::IntPlus:
      check_final(p, Sequent{{}, goal, SequentFlavor::Gentzen}, errs);
      break;
    case SystemId::CL12:
      check_final(p, officialize(Sequent{{}, goal, SequentFlavor::Reduction}), errs);
      break;
    default:
      check_final(p, officialize(goal), errs);
      break;
  }
  return errs;
}

std::vector<std::string> check_proof(const Proof& p, const Sequent& goal) {
  auto errs = check_proof(p);
  if (p.system == SystemId::CL7 || p.system == SystemId::IntPlus)
    check_final(p, goal, errs);
  else
    check_final(p, officialize(goal), errs);
  return errs;
}

ProveResult prove(SystemId sys, const Formula& goal, const ProveLimits& lim) {
  switch (sys) {
    case SystemId::CL7:
      return prove_cl7(Sequent{{}, goal, SequentFlavor::Gentzen}, false);
    case SystemId::IntPlus:
      return prove_intplus(Sequent{{}, goal, SequentFlavor::Gentzen});
    case SystemId::CL13:
      return prove_cl13(goal);
    case SystemId::CL4:
      return prove_cl4(goal, lim);
    case SystemId::CL12:
      return prove_cl12(Sequent{{}, goal, SequentFlavor::Reduction}, lim);
    case SystemId::CL15:
      return prove_cl15_formula(goal, lim);
  }
  throw std::invalid_argument("unhandled system");
}

ProveResult prove(SystemId sys, const Sequent& goal, const ProveLimits& lim) {
  switch (sys) {
    case SystemId::CL7:
      return prove_cl7(goal, false);
    case SystemId::IntPlus:
      return prove_intplus(goal);
    case SystemId::CL12:
      return prove_cl12(goal, lim);
    default:
      throw std::invalid_argument("this system proves formulas, not sequents");
  }
}

ProveResult logical_consequence(const std::vector<Formula>& premises, const Formula& conclusion,
                                const ProveLimits& lim) {
  return prove_cl12(Sequent{premises, conclusion, SequentFlavor::Reduction}, lim);
}

}  // namespace colkit
