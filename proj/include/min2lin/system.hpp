#pragma once

// Equation systems over Z_m: data model, cost, text format, generators.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "min2lin/modring.hpp"

namespace min2lin {

using VarId = int;
/// Total map from variable index to a residue.
using Assignment = std::vector<Value>;

struct Term {
  Value coef = 0;
  VarId var = 0;

  friend bool operator==(const Term&, const Term&) = default;
};

/// c1*x1 [+ c2*x2] = c0 over Z_m, with distinct variables.
struct Equation {
  int id = 0;
  bool crisp = false;
  std::vector<Term> terms;
  Value constant = 0;

  Value evaluate(const Assignment& a, Value m) const;
  bool satisfied_by(const Assignment& a, Value m) const {
    return evaluate(a, m) == mod(constant, m);
  }

  friend bool operator==(const Equation&, const Equation&) = default;
};

struct System {
  RingContext ring;
  std::vector<std::string> vars;
  std::vector<Equation> equations;

  System() = default;
  explicit System(Value m) : ring(RingContext::make(m)) {}

  Value modulus() const { return ring.m; }
  int num_vars() const { return static_cast<int>(vars.size()); }
  std::optional<VarId> find_var(std::string_view name) const;
  /// Returns the id of name, declaring it if needed.
  VarId var(std::string_view name);
  /// Appends an equation; coefficients are reduced mod m and repeated
  /// variables merged. Returns its id.
  int add_equation(bool crisp, std::vector<Term> terms, Value constant);
};

/// Number of violated soft equations, or nullopt if a crisp one is violated.
std::optional<int> cost(const System& s, const Assignment& a);
/// Ids of all equations a violates (crisp and soft).
std::vector<int> violated(const System& s, const Assignment& a);
Assignment zero_assignment(const System& s);

System parse(std::string_view text);
std::string serialize(const System& s);

struct Planted {
  System system;
  Assignment assignment;
};

/// The first neq equations are satisfied by the planted assignment; the
/// trailing k_noise soft equations are all violated by it.
Planted gen_planted(const RingContext& ctx, int nvars, int neq, int k_noise,
                    std::uint64_t seed);

/// t vertex-disjoint copies; copy i renames x to x_c<i>.
System disjoint_copies(const System& s, int t);

/// Simple equations: crisp unary `lhs = r`, or homogeneous `lhs = r * rhs`.
struct SimpleEquation {
  enum class Kind { Unary, Binary };

  Kind kind = Kind::Unary;
  VarId lhs = 0;
  Value r = 0;
  VarId rhs = -1;
  bool crisp = true;
  /// Id of the equation this one was derived from, or -1.
  int origin = -1;

  static SimpleEquation unary(VarId v, Value r, int origin = -1) {
    return {Kind::Unary, v, r, -1, true, origin};
  }
  static SimpleEquation binary(VarId lhs, Value r, VarId rhs, bool crisp, int origin = -1) {
    return {Kind::Binary, lhs, r, rhs, crisp, origin};
  }

  bool is_unary() const { return kind == Kind::Unary; }
  bool satisfied_by(const Assignment& a, Value m) const;
  Equation as_equation(int id, Value m) const;

  friend bool operator==(const SimpleEquation&, const SimpleEquation&) = default;
};

struct SimpleSystem {
  PrimePower pp;
  int num_vars = 0;
  std::vector<SimpleEquation> equations;

  Value modulus() const { return pp.value(); }
  std::vector<Equation> as_equations() const;
  VarId add_var() { return num_vars++; }
};

}  // namespace min2lin
