#pragma once

// Reduction of a general instance over Z_{p^n} to simple instances:
// soft-unary elimination, homogenization around a known solution of a
// prefix, and the iterative compression loop driving a simple-instance
// solver.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "min2lin/system.hpp"

namespace min2lin {

/// Deleted equation ids plus an assignment satisfying everything else.
struct Solution {
  std::vector<int> deleted;
  Assignment assignment;
};

struct Elimination {
  System system;
  /// Equation id in `system` -> id in the input, or -1 for `w = 0`.
  std::vector<int> origin;
  /// The fresh variable w, or -1 when no soft unary equation existed.
  VarId w = -1;
};

/// Rewrites every soft unary a*x = b as the soft binary a*x - w = b and adds
/// a crisp w = 0 as the first equation. The input is returned unchanged
/// (identity origin) when it has no soft unary equation.
Elimination eliminate_soft_unary(const System& s);

struct SimpleBranch {
  SimpleSystem system;
  int budget = 0;
  int offset = 0;
};

/// Sorted variables occurring in the given equations.
std::vector<VarId> variables_of(const System& s, std::span<const int> ids);

/// The simple instance S_alpha for one pin. Variables 0..|V(S)|-1 of the
/// result stand for psi - chi, with psi = chi + alpha on V(X); one fresh
/// variable z_e is appended per equation of prefix \ X. Equations of X are
/// evaluated at chi + alpha: soft violations add to `offset`, a crisp
/// violation returns nullopt. Requires S over a single prime power.
std::optional<SimpleBranch> homogenize(const System& s, std::span<const int> prefix,
                                       std::span<const int> x, const Assignment& chi,
                                       const Assignment& alpha, int k);

/// Solver for simple instances: deletions are indices into the equations.
using CoreFn = std::function<std::optional<Solution>(const SimpleSystem&, int)>;

struct CompressionState {
  std::vector<int> prefix;
  std::vector<int> current;
  Assignment witness;
};

struct CompressOptions {
  /// Absorb a violated soft equation into Z_cur while |Z_cur| < 2k
  /// instead of compressing.
  bool greedy = true;
  std::function<void(const CompressionState&)> observer;
};

/// Iterative compression over S (single prime power, no soft unary
/// equations). Crisp equations are added first, then soft ones in file
/// order. On success |deleted| <= 2k and deleted holds only soft ids.
std::optional<Solution> iterative_compress(const System& s, int k, const CoreFn& core,
                                           const CompressOptions& options = {});

/// Reads a system made of homogeneous binaries and crisp unaries as a simple
/// instance, dividing by a unit coefficient. Throws Error(NonSimple).
SimpleSystem as_simple(const System& s);

}  // namespace min2lin
