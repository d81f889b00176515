#pragma once

// The approximation pipeline: CRT split into prime-power components, then
// per component iterative compression around a core solver for simple
// instances that recurses from Z_{p^n} to Z_{p^(n-1)} through a class
// assignment read off a conformal cut.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "min2lin/classgraph.hpp"
#include "min2lin/simplify.hpp"
#include "min2lin/system.hpp"

namespace min2lin {

/// How the core solver finds candidate cuts.
enum class SearchMode {
  /// Shadow covers from random sampling of important separators.
  ImpSep,
  /// Shadow covers with each vertex kept with probability 1/2.
  Bernoulli,
  /// Every sep(ed(Z')) for soft Z' with |Z'| <= k; deterministic.
  Exhaustive,
  /// Every subset W of V(G) \ {s} fed to the brancher; |V(G)| <= 20.
  ExhaustiveShadow,
};

const char* to_string(SearchMode mode);
std::optional<SearchMode> parse_search_mode(std::string_view name);

struct SolverConfig {
  SearchMode mode = SearchMode::ImpSep;
  /// Shadow samples per (core call, q); 0 means max(64, 4^k).
  long repeats = 0;
  std::uint64_t seed = 0;
  /// Nested core calls deeper than this fail instead of recursing.
  int max_depth_guard = 64;
  /// Keep the rewritten systems in the audit trail.
  bool trace = false;
  bool greedy = true;
};

long default_repeats(int k);

struct LevelTrace {
  int depth = 0;
  PrimePower pp;
  int k = 0;
  int q = 0;
  ClassAssignment tau;
  EdgeSet cut;
  /// Indices of eqn(cut) in the simple instance, and their origins.
  std::vector<int> cut_equations;
  std::vector<int> cut_origins;
  int next_k = 0;
  std::optional<System> rewritten;
};

struct ComponentAudit {
  PrimePower pp;
  std::vector<int> violated;
  long core_calls = 0;
  std::vector<LevelTrace> levels;
};

enum class SolveStatus { Solved, NoSolution };

struct SolveResult {
  SolveStatus status = SolveStatus::NoSolution;
  int k = 0;
  std::vector<int> deleted;
  Assignment assignment;
  /// |deleted| when solved, -1 otherwise.
  int cost = -1;
  long repeats_used = 0;
  std::uint64_t seed = 0;
  std::vector<ComponentAudit> audit;
};

/// nxt(e, tau) over Z_{p^(n-1)} as a general equation (id 0). Throws
/// Error(Divisibility) when the constant is not divisible by p.
Equation nxt(const SimpleEquation& e, const ClassAssignment& tau, const ClassTable& table);

/// beta(v) = rep(tau(v)) + p * beta'(v) over Z_{p^n}.
Assignment lift(const Assignment& beta_prime, const ClassAssignment& tau,
                const ClassTable& table);

/// Copy of s with coefficients and constants reduced mod pp; ids kept.
System reduce_to(const System& s, const PrimePower& pp);

class Solver {
 public:
  explicit Solver(SolverConfig cfg = {});

  SolveResult solve(const System& s, int k);

  /// Solves a system over a single prime power (or Z_1).
  std::optional<Solution> solve_component(const System& s, int k);
  /// Solves a simple instance; deletions index its equations.
  std::optional<Solution> core(const SimpleSystem& s, int k);

  long repeats_used() const { return repeats_used_; }
  long core_calls() const { return core_calls_; }
  const std::vector<LevelTrace>& levels() const { return levels_; }

 private:
  const ClassTable& table_for(const PrimePower& pp);
  std::uint64_t stream_seed(long call, int q, long repeat) const;

  SolverConfig cfg_;
  int component_ = 0;
  int depth_ = 0;
  long core_calls_ = 0;
  long repeats_used_ = 0;
  std::map<std::pair<Value, int>, std::unique_ptr<ClassTable>> tables_;
  std::vector<LevelTrace> levels_;
};

struct Verdict {
  bool ok = true;
  std::string reason;
};

/// Re-checks a claimed solution: the assignment is total, deleted ids are
/// distinct soft equations, everything else is satisfied, and
/// |deleted| <= 2 * omega(m) * k.
Verdict verify(const System& s, int k, std::span<const int> deleted, const Assignment& a);

}  // namespace min2lin
