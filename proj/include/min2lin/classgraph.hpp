#pragma once

// The class assignment graph G(S) of a simple instance, and the cut
// machinery built on it: reachability, sep, conformality, clasn, ed/eqn.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "min2lin/modring.hpp"
#include "min2lin/system.hpp"

namespace min2lin {

/// Sorted, duplicate-free list of edge ids.
using EdgeSet = std::vector<int>;
/// Variable -> class; kZeroClass marks an undecided variable.
using ClassAssignment = std::vector<ClassId>;

struct GraphEdge {
  int u = 0;
  int v = 0;
  int equation = 0;
  bool crisp = false;

  int other(int w) const { return w == u ? v : u; }
};

class ClassGraph {
 public:
  static constexpr int kSource = 0;
  static constexpr int kSink = 1;

  /// Throws Error(NonSimple) for soft unary equations or u = r*u.
  ClassGraph(const SimpleSystem& s, const ClassTable& table);

  int num_vertices() const { return 2 + num_vars_ * num_nonzero_; }
  int num_vars() const { return num_vars_; }
  int num_nonzero() const { return num_nonzero_; }
  int num_equations() const { return static_cast<int>(edges_of_.size()); }

  int vertex(VarId x, ClassId c) const { return 2 + x * num_nonzero_ + (c - 1); }
  /// -1 for s and t.
  VarId var_of(int w) const { return w < 2 ? -1 : (w - 2) / num_nonzero_; }
  ClassId class_of(int w) const { return w < 2 ? kZeroClass : (w - 2) % num_nonzero_ + 1; }

  const std::vector<GraphEdge>& edges() const { return edges_; }
  const GraphEdge& edge(int id) const { return edges_[id]; }
  /// (neighbour, edge id) pairs.
  const std::vector<std::pair<int, int>>& neighbours(int w) const { return adj_[w]; }
  /// Edge ids produced by one equation.
  const std::vector<int>& edges_of(int equation) const { return edges_of_[equation]; }

  std::string vertex_name(int w, std::span<const std::string> var_names = {}) const;

 private:
  void add_edge(int u, int v, int equation, bool crisp);

  int num_vars_ = 0;
  int num_nonzero_ = 0;
  std::vector<Value> reps_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
  std::vector<std::vector<int>> edges_of_;
};

/// Membership mask of the vertices reachable from s avoiding removed edges.
std::vector<char> reach(const ClassGraph& g, std::span<const int> removed);

bool is_st_cut(const ClassGraph& g, std::span<const int> cut);
/// The edges of Y with exactly one endpoint in reach(G, Y). Throws NotACut.
EdgeSet sep(const ClassGraph& g, std::span<const int> cut);
/// st-cut with at most one s-reachable vertex x_C per variable.
bool is_conformal(const ClassGraph& g, std::span<const int> cut);
ClassAssignment clasn(const ClassGraph& g, std::span<const int> cut);
EdgeSet ed(const ClassGraph& g, std::span<const int> equations);
std::vector<int> eqn(const ClassGraph& g, std::span<const int> cut);
/// Z minus eqn(sep(ed(Z))). Throws NotACut if ed(Z) is not an st-cut.
std::vector<int> comp(const ClassGraph& g, std::span<const int> equations);
bool has_crisp_edge(const ClassGraph& g, std::span<const int> cut);

/// Boolean image of phi: s = 1, t = 0, x_C = [phi(x) in C].
std::vector<char> boolean_assignment(const Assignment& phi, const ClassGraph& g,
                                     const ClassTable& table);
inline bool edge_satisfied(const GraphEdge& e, const std::vector<char>& bits) {
  return bits[e.u] == bits[e.v];
}

std::string to_dot(const ClassGraph& g, std::span<const std::string> var_names = {});

}  // namespace min2lin
