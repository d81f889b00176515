#pragma once

// Branching over the components of G[W] for a shadow-covering set W:
// enumerates conformal cuts of size at most 2q contained in delta(W).

#include <vector>

#include "min2lin/classgraph.hpp"
#include "min2lin/shadow.hpp"

namespace min2lin {

struct CutCandidate {
  EdgeSet edges;
  ClassAssignment tau;
  int size = 0;
};

/// A connected component of G[W]: its sorted vertices, the edges of
/// delta(C), and whether delta(C) contains a crisp edge.
struct Component {
  std::vector<int> vertices;
  EdgeSet boundary;
  bool crisp_boundary = false;
};

/// Components of G[w], ordered by minimum vertex id.
std::vector<Component> components(const ClassGraph& g, const std::vector<char>& w);

/// True iff the equations with an edge inside G[C] are satisfiable with
/// every x restricted to the class alpha of its vertex x_alpha in C.
bool self_satisfiable(const SimpleSystem& s, const ClassGraph& g, const ClassTable& table,
                      const Component& c);

class Brancher {
 public:
  Brancher(const SimpleSystem& s, const ClassGraph& g, const ClassTable& table)
      : s_(s), g_(g), table_(table) {}

  /// Candidate cuts for (k, q) under the shadow-covering set w, taken
  /// together with every vertex that has no path to s; empty if delta(W)
  /// is not conformal. Every cut is conformal, soft-only and of
  /// size at most 2q; duplicates are removed.
  std::vector<CutCandidate> branch(int k, int q, const ShadowCover& w);

  /// Counters of the last branch() call.
  struct Stats {
    long calls_undecided = 0;
    long calls_unsatisfied = 0;
    long emitted = 0;
  };
  const Stats& stats() const { return stats_; }

 private:
  void branch_undecided(std::vector<int> pending, int k, int b, std::vector<ClassId> v1,
                        std::vector<int> v0);
  void branch_unsatisfied(const std::vector<int>& unsat, std::size_t next, int k, int b,
                          std::vector<int>& v0);
  std::vector<int> get_unsatisfied(const std::vector<int>& pending);
  int cost(int c) const;
  bool conflicts(int c, const std::vector<ClassId>& v1) const;
  bool conflicts(int c1, int c2) const;
  void emit(const std::vector<int>& v0);

  const SimpleSystem& s_;
  const ClassGraph& g_;
  const ClassTable& table_;
  std::vector<Component> comps_;
  // (variable, class) pairs of every component
  std::vector<std::vector<std::pair<VarId, ClassId>>> labels_;
  std::vector<signed char> satisfiable_;
  std::vector<char> detached_;
  std::vector<EdgeSet> out_;
  Stats stats_;
};

}  // namespace min2lin
