#include "icsguard/cnf.hpp"

#include <stdexcept>

namespace icsguard {

std::uint32_t VariableTable::intern(std::string_view token) {
  std::string key(token);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  names_.push_back(key);
  auto var = static_cast<std::uint32_t>(names_.size());
  index_.emplace(std::move(key), var);
  return var;
}

std::uint32_t VariableTable::fresh() {
  names_.emplace_back();
  return static_cast<std::uint32_t>(names_.size());
}

std::optional<std::uint32_t> VariableTable::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CnfFormula tseitin_cnf(const Formula& formula) {
  if (formula.empty()) throw std::invalid_argument("tseitin_cnf: empty formula");
  CnfFormula cnf;
  const Formula::Ref root = formula.root();

  std::vector<bool> reach(root + 1, false);
  reach[root] = true;
  for (Formula::Ref r = root + 1; r-- > 0;) {
    if (!reach[r]) continue;
    for (Formula::Ref c : formula.node(r).children) reach[c] = true;
  }

  std::vector<Literal> lit(root + 1);
  for (Formula::Ref r = 0; r <= root; ++r) {
    if (reach[r] && formula.node(r).op == Formula::Op::var) {
      lit[r] = Literal::positive(cnf.vars.intern(formula.node(r).token));
    }
  }

  for (Formula::Ref r = 0; r <= root; ++r) {
    if (!reach[r]) continue;
    const auto& n = formula.node(r);
    switch (n.op) {
      case Formula::Op::var: break;
      case Formula::Op::negation: lit[r] = ~lit[n.children[0]]; break;
      case Formula::Op::conjunction: {
        // g <-> c1 & ... & ck
        Literal g = Literal::positive(cnf.vars.fresh());
        ++cnf.aux_count;
        Clause back{g};
        for (Formula::Ref c : n.children) {
          cnf.clauses.push_back({~g, lit[c]});
          back.push_back(~lit[c]);
        }
        cnf.clauses.push_back(std::move(back));
        lit[r] = g;
        break;
      }
      case Formula::Op::disjunction: {
        // g <-> c1 | ... | ck
        Literal g = Literal::positive(cnf.vars.fresh());
        ++cnf.aux_count;
        Clause forth{~g};
        for (Formula::Ref c : n.children) {
          cnf.clauses.push_back({g, ~lit[c]});
          forth.push_back(lit[c]);
        }
        cnf.clauses.push_back(std::move(forth));
        lit[r] = g;
        break;
      }
    }
  }
  cnf.clauses.push_back({lit[root]});
  return cnf;
}

bool satisfies(const std::vector<Clause>& clauses, const std::vector<bool>& assignment) {
  for (const auto& clause : clauses) {
    bool sat = false;
    for (Literal l : clause) {
      if (l.var() < assignment.size() && assignment[l.var()] != l.is_negative()) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

}  // namespace icsguard
