#pragma once

// Feasibility and witness extraction for linear systems over Z_m.
//
// Each prime-power component is reduced to triangular form with pivots of
// minimal p-adic valuation; back-substitution sets free variables to 0.

#include <optional>
#include <span>
#include <vector>

#include "min2lin/modring.hpp"
#include "min2lin/system.hpp"

namespace min2lin {

/// Satisfying assignment for all of eqs over Z_m (num_vars entries), or
/// nullopt. Equations may have any number of terms.
std::optional<Assignment> feasible(std::span<const Equation> eqs, int num_vars, Value m);

inline std::optional<Assignment> feasible(const System& s) {
  return feasible(s.equations, s.num_vars(), s.modulus());
}

/// Restricts a variable to one class of Gamma_{p^n}.
struct ClassConstraint {
  VarId var = 0;
  ClassId class_id = kZeroClass;
};

/// Unary equation whose solution set over Z_{p^n} is exactly the class:
/// p^(n-b-1) x = a p^(n-1) for ord b and lsu a; x = 0 for the zero class.
Equation class_constraint_to_equation(const ClassConstraint& cc, const ClassTable& table);

std::optional<Assignment> feasible_with_classes(std::span<const Equation> eqs,
                                                std::span<const ClassConstraint> ccs,
                                                int num_vars, const ClassTable& table);

}  // namespace min2lin
