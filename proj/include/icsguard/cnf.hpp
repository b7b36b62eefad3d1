#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "icsguard/formula.hpp"

namespace icsguard {

/// A variable index (>= 1) with a polarity, stored DIMACS-style as +v / -v.
class Literal {
 public:
  constexpr Literal() = default;
  static constexpr Literal positive(std::uint32_t var) { return Literal(static_cast<std::int32_t>(var)); }
  static constexpr Literal negative(std::uint32_t var) { return Literal(-static_cast<std::int32_t>(var)); }
  static constexpr Literal from_dimacs(std::int32_t value) { return Literal(value); }

  constexpr std::uint32_t var() const { return static_cast<std::uint32_t>(value_ < 0 ? -value_ : value_); }
  constexpr bool is_negative() const { return value_ < 0; }
  constexpr std::int32_t dimacs() const { return value_; }
  constexpr Literal operator~() const { return Literal(-value_); }

  friend constexpr bool operator==(Literal, Literal) = default;
  friend constexpr auto operator<=>(Literal, Literal) = default;

 private:
  constexpr explicit Literal(std::int32_t value) : value_(value) {}
  std::int32_t value_ = 0;
};

using Clause = std::vector<Literal>;

/// Bijection between named variables and indices 1..n; Tseitin auxiliaries
/// get indices with an empty name.
class VariableTable {
 public:
  std::uint32_t intern(std::string_view token);
  std::uint32_t fresh();
  std::optional<std::uint32_t> find(std::string_view token) const;
  /// Empty for auxiliaries.
  const std::string& name(std::uint32_t var) const { return names_.at(var - 1); }
  std::uint32_t size() const { return static_cast<std::uint32_t>(names_.size()); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct CnfFormula {
  std::vector<Clause> clauses;
  VariableTable vars;
  std::uint32_t aux_count = 0;

  std::uint32_t var_count() const { return vars.size(); }
};

/// Tseitin transformation with full biconditional gate definitions and one
/// auxiliary per gate (shared subformulas share the auxiliary). Negations
/// flip literals instead of introducing gates. The root literal is asserted
/// by a unit clause. Original variables are numbered before auxiliaries, in
/// arena order.
CnfFormula tseitin_cnf(const Formula& formula);

/// Truth value of every clause under `assignment` (indexed by variable,
/// slot 0 unused).
bool satisfies(const std::vector<Clause>& clauses, const std::vector<bool>& assignment);

}  // namespace icsguard
