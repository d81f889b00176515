#include "min2lin/shadow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <string>
#include <string_view>

#include "min2lin/error.hpp"

namespace min2lin {
namespace {

constexpr int kInfinity = 1 << 20;

// Unit-capacity flow on the undirected class graph; crisp edges are
// uncuttable. flow_[e] > 0 means flow from edge(e).u to edge(e).v.
class Flow {
 public:
  Flow(const ClassGraph& g, const std::vector<char>& removed)
      : g_(g), removed_(removed), flow_(g.edges().size(), 0) {}

  int residual(int id, int from) const {
    if (removed_[id]) return 0;
    const auto& e = g_.edge(id);
    const int cap = e.crisp ? kInfinity : 1;
    return from == e.u ? cap - flow_[id] : cap + flow_[id];
  }

  // Max flow value, or limit + 1 as soon as it exceeds limit.
  int run(const std::vector<char>& src, const std::vector<char>& snk, int limit) {
    for (int w = 0; w < g_.num_vertices(); ++w)
      if (src[w] && snk[w]) return limit + 1;
    int value = 0;
    std::vector<int> parent_edge(g_.num_vertices());
    while (value <= limit) {
      std::fill(parent_edge.begin(), parent_edge.end(), -2);
      std::deque<int> queue;
      for (int w = 0; w < g_.num_vertices(); ++w) {
        if (src[w]) {
          parent_edge[w] = -1;
          queue.push_back(w);
        }
      }
      int hit = -1;
      while (!queue.empty() && hit < 0) {
        int w = queue.front();
        queue.pop_front();
        for (auto [x, id] : g_.neighbours(w)) {
          if (parent_edge[x] != -2 || residual(id, w) <= 0) continue;
          parent_edge[x] = id;
          if (snk[x]) {
            hit = x;
            break;
          }
          queue.push_back(x);
        }
      }
      if (hit < 0) break;
      int bottleneck = limit + 1 - value;
      for (int w = hit; parent_edge[w] >= 0;) {
        const int id = parent_edge[w];
        const int from = g_.edge(id).other(w);
        bottleneck = std::min(bottleneck, residual(id, from));
        w = from;
      }
      for (int w = hit; parent_edge[w] >= 0;) {
        const int id = parent_edge[w];
        const int from = g_.edge(id).other(w);
        flow_[id] += from == g_.edge(id).u ? bottleneck : -bottleneck;
        w = from;
      }
      value += bottleneck;
    }
    return std::min(value, limit + 1);
  }

  // Vertices that cannot reach the sink in the residual graph: the source
  // side of the minimum cut farthest from the source.
  std::vector<char> far_side(const std::vector<char>& snk) const {
    std::vector<char> reaches(snk);
    std::deque<int> queue;
    for (int w = 0; w < g_.num_vertices(); ++w)
      if (snk[w]) queue.push_back(w);
    while (!queue.empty()) {
      int y = queue.front();
      queue.pop_front();
      for (auto [x, id] : g_.neighbours(y)) {
        if (reaches[x] || residual(id, x) <= 0) continue;
        reaches[x] = 1;
        queue.push_back(x);
      }
    }
    for (auto& r : reaches) r = !r;
    return reaches;
  }

 private:
  const ClassGraph& g_;
  const std::vector<char>& removed_;
  std::vector<int> flow_;
};

std::vector<char> reach_from(const ClassGraph& g, const std::vector<char>& src,
                             const std::vector<char>& removed) {
  std::vector<char> seen(src);
  std::deque<int> queue;
  for (int w = 0; w < g.num_vertices(); ++w)
    if (seen[w]) queue.push_back(w);
  while (!queue.empty()) {
    int w = queue.front();
    queue.pop_front();
    for (auto [x, id] : g.neighbours(w)) {
      if (removed[id] || seen[x]) continue;
      seen[x] = 1;
      queue.push_back(x);
    }
  }
  return seen;
}

void enumerate(const ClassGraph& g, const std::vector<char>& src, const std::vector<char>& snk,
               std::vector<char>& removed, EdgeSet& chosen, int budget,
               std::vector<EdgeSet>& out) {
  Flow flow(g, removed);
  const int value = flow.run(src, snk, budget);
  if (value > budget) return;
  if (value == 0) {
    EdgeSet s = chosen;
    std::sort(s.begin(), s.end());
    out.push_back(std::move(s));
    return;
  }
  const auto rmax = flow.far_side(snk);
  int pick = -1;
  for (std::size_t id = 0; id < g.edges().size() && pick < 0; ++id) {
    const auto& e = g.edge(static_cast<int>(id));
    if (!removed[id] && rmax[e.u] != rmax[e.v]) pick = static_cast<int>(id);
  }
  const auto& e = g.edge(pick);
  const int outer = rmax[e.u] ? e.v : e.u;

  removed[pick] = 1;
  chosen.push_back(pick);
  enumerate(g, rmax, snk, removed, chosen, budget - 1, out);
  chosen.pop_back();
  removed[pick] = 0;

  auto grown = rmax;
  grown[outer] = 1;
  enumerate(g, grown, snk, removed, chosen, budget, out);
}

std::vector<char> mask_of(std::span<const int> vertices, int n) {
  std::vector<char> m(n, 0);
  for (int v : vertices) m[v] = 1;
  return m;
}

bool strict_subset(const std::vector<char>& a, const std::vector<char>& b) {
  bool proper = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && !b[i]) return false;
    if (b[i] && !a[i]) proper = true;
  }
  return proper;
}

}  // namespace

LiftedGraph clique_lift(const ClassGraph& g, int q) {
  if (q < 0) throw Error(ErrorKind::InvalidArgument, "clique_lift needs q >= 0");
  LiftedGraph lg;
  lg.clique_size = 2 * q + 1;
  lg.num_original_vertices = g.num_vertices();
  lg.num_original_edges = static_cast<int>(g.edges().size());
  lg.adj.resize(lg.num_original_vertices * lg.clique_size + lg.num_original_edges);
  lg.crisp_subdivision.assign(lg.num_original_edges, 0);
  auto link = [&](int a, int b) {
    lg.adj[a].push_back(b);
    lg.adj[b].push_back(a);
  };
  for (int a = 0; a < lg.num_original_vertices; ++a)
    for (int i = 0; i < lg.clique_size; ++i)
      for (int j = i + 1; j < lg.clique_size; ++j)
        link(lg.clique_vertex(a, i), lg.clique_vertex(a, j));
  for (int id = 0; id < lg.num_original_edges; ++id) {
    const auto& e = g.edge(id);
    const int z = lg.subdivision_vertex(id);
    lg.crisp_subdivision[id] = e.crisp;
    for (int i = 0; i < lg.clique_size; ++i) {
      link(z, lg.clique_vertex(e.u, i));
      link(z, lg.clique_vertex(e.v, i));
    }
  }
  return lg;
}

bool is_transversal(const LiftedGraph& lg, std::span<const int> removed,
                    std::span<const int> targets) {
  std::vector<char> gone = mask_of(removed, lg.num_vertices());
  std::vector<char> seen(lg.num_vertices(), 0);
  std::deque<int> queue;
  for (int i = 0; i < lg.clique_size; ++i) {
    const int w = lg.clique_vertex(ClassGraph::kSource, i);
    if (gone[w]) continue;
    seen[w] = 1;
    queue.push_back(w);
  }
  while (!queue.empty()) {
    int w = queue.front();
    queue.pop_front();
    for (int x : lg.adj[w]) {
      if (gone[x] || seen[x]) continue;
      seen[x] = 1;
      queue.push_back(x);
    }
  }
  for (int a : targets)
    for (int i = 0; i < lg.clique_size; ++i)
      if (seen[lg.clique_vertex(a, i)]) return false;
  return true;
}

std::vector<EdgeSet> important_separators(const ClassGraph& g, std::span<const int> source,
                                          std::span<const int> sink, int bound) {
  if (bound > kMaxSeparatorBound)
    throw Error(ErrorKind::BoundExceeded,
                "separator bound " + std::to_string(bound) + " exceeds " +
                    std::to_string(kMaxSeparatorBound));
  if (bound < 0) return {};
  const int n = g.num_vertices();
  const auto src = mask_of(source, n);
  const auto snk = mask_of(sink, n);
  std::vector<char> removed(g.edges().size(), 0);
  EdgeSet chosen;
  std::vector<EdgeSet> found;
  enumerate(g, src, snk, removed, chosen, bound, found);
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());

  auto is_cut = [&](const EdgeSet& s, int skip) {
    std::vector<char> rm(g.edges().size(), 0);
    for (int id : s)
      if (id != skip) rm[id] = 1;
    auto r = reach_from(g, src, rm);
    for (int w = 0; w < n; ++w)
      if (r[w] && snk[w]) return false;
    return true;
  };
  std::vector<EdgeSet> minimal;
  std::vector<std::vector<char>> sides;
  for (const auto& s : found) {
    if (!is_cut(s, -1)) continue;
    bool ok = std::none_of(s.begin(), s.end(), [&](int id) { return is_cut(s, id); });
    if (!ok) continue;
    std::vector<char> rm(g.edges().size(), 0);
    for (int id : s) rm[id] = 1;
    sides.push_back(reach_from(g, src, rm));
    minimal.push_back(s);
  }
  std::vector<EdgeSet> out;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < minimal.size() && !dominated; ++j)
      dominated = j != i && minimal[j].size() <= minimal[i].size() &&
                  strict_subset(sides[i], sides[j]);
    if (!dominated) out.push_back(minimal[i]);
  }
  return out;
}

const char* to_string(ShadowMode mode) {
  switch (mode) {
    case ShadowMode::ImpSep: return "impsep";
    case ShadowMode::Bernoulli: return "bernoulli";
    case ShadowMode::Exhaustive: return "exhaustive";
    case ShadowMode::Planted: return "planted";
  }
  return "?";
}

std::optional<ShadowMode> parse_shadow_mode(std::string_view name) {
  for (auto m : {ShadowMode::ImpSep, ShadowMode::Bernoulli, ShadowMode::Exhaustive,
                 ShadowMode::Planted})
    if (name == to_string(m)) return m;
  return std::nullopt;
}

ImpSepSampler::ImpSepSampler(const ClassGraph& g, int q) : g_(&g) {
  const int bound = 2 * q;
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (v == ClassGraph::kSource) continue;
    const int src[] = {v};
    const int snk[] = {ClassGraph::kSource};
    for (auto& s : important_separators(g, src, snk, bound))
      if (!s.empty()) separators_.push_back(std::move(s));
  }
}

ShadowCover ImpSepSampler::sample(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<int> removed;
  for (const auto& s : separators_) {
    if (coin(rng) < std::ldexp(1.0, -2 * static_cast<int>(s.size())))
      removed.insert(removed.end(), s.begin(), s.end());
  }
  auto r = reach(*g_, removed);
  ShadowCover out{std::vector<char>(g_->num_vertices()), ShadowMode::ImpSep, seed};
  for (int w = 0; w < g_->num_vertices(); ++w) out.w[w] = !r[w];
  return out;
}

ShadowCover bernoulli_cover(const ClassGraph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ShadowCover out{std::vector<char>(g.num_vertices(), 0), ShadowMode::Bernoulli, seed};
  for (int w = 0; w < g.num_vertices(); ++w)
    if (w != ClassGraph::kSource) out.w[w] = static_cast<char>(rng() & 1);
  return out;
}

ShadowCover planted_cover(const ClassGraph& g, std::span<const int> solution) {
  const auto y = sep(g, ed(g, solution));
  const auto r = reach(g, y);
  ShadowCover out{std::vector<char>(g.num_vertices()), ShadowMode::Planted, 0};
  for (int w = 0; w < g.num_vertices(); ++w) out.w[w] = !r[w];
  return out;
}

SubsetStream::SubsetStream(const ClassGraph& g) : n_(g.num_vertices()) {
  if (n_ > kMaxExhaustiveVertices)
    throw Error(ErrorKind::ModeMismatch, "exhaustive shadow mode needs |V(G)| <= " +
                                             std::to_string(kMaxExhaustiveVertices));
}

bool SubsetStream::next(ShadowCover& out) {
  if (done_) return false;
  out.mode = ShadowMode::Exhaustive;
  out.seed = mask_;
  out.w.assign(n_, 0);
  for (int w = 1; w < n_; ++w) out.w[w] = static_cast<char>((mask_ >> (w - 1)) & 1);
  if (++mask_ == size()) done_ = true;
  return true;
}

ShadowCover sample_shadow_cover(const ClassGraph& g, int q, ShadowMode mode,
                                std::uint64_t seed) {
  switch (mode) {
    case ShadowMode::ImpSep: return ImpSepSampler(g, q).sample(seed);
    case ShadowMode::Bernoulli: return bernoulli_cover(g, seed);
    default:
      throw Error(ErrorKind::ModeMismatch,
                  std::string("no sampler for shadow mode ") + to_string(mode));
  }
}

}  // namespace min2lin
