#pragma once

// Shadow-covering sets W for the class graph, important separators, and
// the clique lift used to move from edge cuts to vertex transversals.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "min2lin/classgraph.hpp"

namespace min2lin {

inline constexpr int kMaxSeparatorBound = 12;
inline constexpr int kMaxExhaustiveVertices = 20;

/// G' built from G: a clique K(a) of size 2q+1 for every vertex a, and a
/// subdivision vertex z_e adjacent to every a^i and b^i for each edge e = ab.
struct LiftedGraph {
  int clique_size = 1;
  int num_original_vertices = 0;
  int num_original_edges = 0;
  std::vector<std::vector<int>> adj;
  std::vector<char> crisp_subdivision;

  int num_vertices() const { return static_cast<int>(adj.size()); }
  int clique_vertex(int a, int i) const { return a * clique_size + i; }
  int subdivision_vertex(int edge) const {
    return num_original_vertices * clique_size + edge;
  }
  /// Original vertex of a clique vertex, -1 for subdivision vertices.
  int original_vertex(int w) const {
    return w < num_original_vertices * clique_size ? w / clique_size : -1;
  }
  /// Original edge of a subdivision vertex, -1 for clique vertices.
  int original_edge(int w) const {
    const int base = num_original_vertices * clique_size;
    return w >= base ? w - base : -1;
  }
};

LiftedGraph clique_lift(const ClassGraph& g, int q);

/// True iff removing `removed` from G' leaves no path from K(s) to K(a)
/// for any a in targets.
bool is_transversal(const LiftedGraph& lg, std::span<const int> removed,
                    std::span<const int> targets);

/// All important (source, sink) edge separators of size <= bound. Crisp
/// edges are never cut. Each separator is an EdgeSet. Throws
/// Error(BoundExceeded) when bound > kMaxSeparatorBound.
std::vector<EdgeSet> important_separators(const ClassGraph& g, std::span<const int> source,
                                          std::span<const int> sink, int bound);

enum class ShadowMode { ImpSep, Bernoulli, Exhaustive, Planted };

const char* to_string(ShadowMode mode);
std::optional<ShadowMode> parse_shadow_mode(std::string_view name);

struct ShadowCover {
  /// Membership mask over V(G); s is never a member.
  std::vector<char> w;
  ShadowMode mode = ShadowMode::ImpSep;
  std::uint64_t seed = 0;
};

/// Random sampling of important separators: for every v != s and every
/// important (v, s)-separator X with |X| <= 2q, X joins the union with
/// probability 4^-|X|; W is what the union cuts off from s.
class ImpSepSampler {
 public:
  ImpSepSampler(const ClassGraph& g, int q);

  ShadowCover sample(std::uint64_t seed) const;
  std::size_t num_separators() const { return separators_.size(); }

 private:
  const ClassGraph* g_;
  std::vector<EdgeSet> separators_;
};

/// Each vertex other than s joins W independently with probability 1/2.
ShadowCover bernoulli_cover(const ClassGraph& g, std::uint64_t seed);

/// W = vertices cut off from s by sep(ed(solution)).
ShadowCover planted_cover(const ClassGraph& g, std::span<const int> solution);

/// Every subset of V(G) \ {s}, in increasing bitmask order.
class SubsetStream {
 public:
  /// Throws Error(ModeMismatch) if |V(G)| > kMaxExhaustiveVertices.
  explicit SubsetStream(const ClassGraph& g);

  bool next(ShadowCover& out);
  std::uint64_t size() const { return std::uint64_t{1} << (n_ - 1); }

 private:
  int n_;
  std::uint64_t mask_ = 0;
  bool done_ = false;
};

/// Dispatch for the randomized modes; Exhaustive and Planted need their
/// own entry points and throw Error(ModeMismatch) here.
ShadowCover sample_shadow_cover(const ClassGraph& g, int q, ShadowMode mode,
                                std::uint64_t seed);

}  // namespace min2lin
