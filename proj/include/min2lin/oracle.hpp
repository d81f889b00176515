#pragma once

// Exact reference answers by enumeration, and exhaustive or seeded checks
// of the structural facts the solver relies on.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "min2lin/classgraph.hpp"
#include "min2lin/system.hpp"

namespace min2lin {

/// Largest m^|V| enumerated for one connected part of an instance.
inline constexpr double kOracleGuard = 1e8;

struct OracleResult {
  /// nullopt when the crisp equations alone are unsatisfiable.
  std::optional<int> optimum;
  Assignment witness;
  std::vector<int> deletions;
};

/// Exact optimum. Variable-disjoint parts are solved separately; each part
/// must satisfy m^|V| <= kOracleGuard or Error(InstanceTooLarge) is thrown.
OracleResult brute_optimum(const System& s);

/// Some assignment satisfies e and agrees with tau (by enumeration).
bool respects(const SimpleEquation& e, const ClassAssignment& tau, const ClassTable& table);

struct LemmaParams {
  /// The ring Z_m (a prime power for every kind but deleted-edges' callers).
  Value modulus = 8;
  int seeds = 200;
  std::uint64_t first_seed = 0;
  int max_vars = 5;
  int max_eqs = 8;
};

struct LemmaReport {
  std::string kind;
  bool passed = true;
  long checked = 0;
  long counterexamples = 0;
  std::string first_counterexample;
};

/// Kinds: partition, matching, absorbing, observation, next-level,
/// next-level-sound, deleted-edges, clique-lift. Throws Error(UnknownKind).
LemmaReport check_lemma(std::string_view kind, const LemmaParams& params);

/// Random simple instance with a planted assignment; the soft equations it
/// violates are returned as `violated`.
struct RandomSimple {
  SimpleSystem system;
  Assignment planted;
  std::vector<int> violated;
};
RandomSimple random_simple(const PrimePower& pp, int max_vars, int max_eqs, std::uint64_t seed);

}  // namespace min2lin
