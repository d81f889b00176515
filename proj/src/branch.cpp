#include "min2lin/branch.hpp"

#include <algorithm>
#include <deque>

#include "min2lin/linsolve.hpp"

namespace min2lin {
namespace {

constexpr int kCrispCost = 1 << 20;

}  // namespace

std::vector<Component> components(const ClassGraph& g, const std::vector<char>& w) {
  std::vector<Component> out;
  std::vector<int> owner(g.num_vertices(), -1);
  for (int start = 0; start < g.num_vertices(); ++start) {
    if (!w[start] || owner[start] >= 0) continue;
    const int index = static_cast<int>(out.size());
    Component c;
    std::deque<int> queue{start};
    owner[start] = index;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      c.vertices.push_back(v);
      for (auto [x, id] : g.neighbours(v)) {
        if (!w[x]) {
          c.boundary.push_back(id);
          c.crisp_boundary = c.crisp_boundary || g.edge(id).crisp;
          continue;
        }
        if (owner[x] >= 0) continue;
        owner[x] = index;
        queue.push_back(x);
      }
    }
    std::sort(c.vertices.begin(), c.vertices.end());
    std::sort(c.boundary.begin(), c.boundary.end());
    c.boundary.erase(std::unique(c.boundary.begin(), c.boundary.end()), c.boundary.end());
    out.push_back(std::move(c));
  }
  return out;
}

bool self_satisfiable(const SimpleSystem& s, const ClassGraph& g, const ClassTable& table,
                      const Component& c) {
  std::vector<char> inside(g.num_vertices(), 0);
  for (int v : c.vertices) inside[v] = 1;
  std::vector<int> eqs;
  std::vector<ClassConstraint> ccs;
  for (int v : c.vertices) {
    if (g.var_of(v) >= 0) ccs.push_back({g.var_of(v), g.class_of(v)});
    for (auto [x, id] : g.neighbours(v))
      if (inside[x]) eqs.push_back(g.edge(id).equation);
  }
  if (eqs.empty()) return true;
  std::sort(eqs.begin(), eqs.end());
  eqs.erase(std::unique(eqs.begin(), eqs.end()), eqs.end());
  std::vector<Equation> system;
  for (int e : eqs) system.push_back(s.equations[e].as_equation(e, s.modulus()));
  return feasible_with_classes(system, ccs, s.num_vars, table).has_value();
}

std::vector<CutCandidate> Brancher::branch(int k, int q, const ShadowCover& w) {
  stats_ = {};
  out_.clear();
  if (w.w[ClassGraph::kSource]) return {};
  // Vertices with no path to s lie in every shadow; add them to W.
  if (detached_.empty()) {
    detached_ = reach(g_, {});
    for (auto& bit : detached_) bit = !bit;
  }
  std::vector<char> mask = w.w;
  for (std::size_t v = 0; v < mask.size(); ++v) mask[v] = mask[v] || detached_[v];
  if (!mask[ClassGraph::kSink]) return {};

  // delta(W) must be conformal: at most one x_alpha outside W per variable.
  std::vector<ClassId> v1(g_.num_vars(), kZeroClass);
  for (VarId x = 0; x < g_.num_vars(); ++x) {
    for (ClassId c = 1; c <= g_.num_nonzero(); ++c) {
      if (mask[g_.vertex(x, c)]) continue;
      if (v1[x] != kZeroClass) return {};
      v1[x] = c;
    }
  }

  comps_ = components(g_, mask);
  labels_.assign(comps_.size(), {});
  satisfiable_.assign(comps_.size(), -1);
  for (std::size_t i = 0; i < comps_.size(); ++i)
    for (int v : comps_[i].vertices)
      if (g_.var_of(v) >= 0) labels_[i].emplace_back(g_.var_of(v), g_.class_of(v));

  std::vector<int> pending, v0;
  int b = 2 * q;
  for (int i = 0; i < static_cast<int>(comps_.size()); ++i) {
    const auto& vs = comps_[i].vertices;
    bool minus = std::binary_search(vs.begin(), vs.end(), ClassGraph::kSink) || conflicts(i, v1);
    if (!minus) {
      // Two classes of one variable inside the same component.
      for (std::size_t a = 0; a < labels_[i].size() && !minus; ++a)
        for (std::size_t c = a + 1; c < labels_[i].size() && !minus; ++c)
          minus = labels_[i][a].first == labels_[i][c].first;
    }
    if (minus) {
      v0.push_back(i);
      b -= cost(i);
    } else {
      pending.push_back(i);
    }
  }
  branch_undecided(std::move(pending), k - q, b, std::move(v1), std::move(v0));

  std::sort(out_.begin(), out_.end());
  out_.erase(std::unique(out_.begin(), out_.end()), out_.end());
  std::vector<CutCandidate> result;
  for (auto& edges : out_) {
    CutCandidate cc;
    cc.tau = clasn(g_, edges);
    cc.size = static_cast<int>(edges.size());
    cc.edges = std::move(edges);
    result.push_back(std::move(cc));
  }
  stats_.emitted = static_cast<long>(result.size());
  return result;
}

void Brancher::branch_undecided(std::vector<int> pending, int k, int b,
                                std::vector<ClassId> v1, std::vector<int> v0) {
  ++stats_.calls_undecided;
  if (b < 0) return;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const int c = pending[i];
    if (!conflicts(c, v1)) continue;
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(i));
    v0.push_back(c);
    branch_undecided(std::move(pending), k, b - cost(c), std::move(v1), std::move(v0));
    return;
  }
  for (std::size_t i = 0; i < pending.size(); ++i) {
    for (std::size_t j = i + 1; j < pending.size(); ++j) {
      const int c1 = pending[i], c2 = pending[j];
      if (!conflicts(c1, c2)) continue;

      std::vector<int> rest1 = pending;
      rest1.erase(rest1.begin() + static_cast<std::ptrdiff_t>(i));
      std::vector<int> v0a = v0;
      v0a.push_back(c1);
      branch_undecided(std::move(rest1), k, b - cost(c1), v1, std::move(v0a));

      std::vector<int> rest2;
      for (int c : pending)
        if (c != c1 && c != c2) rest2.push_back(c);
      std::vector<ClassId> v1b = v1;
      for (auto [x, cls] : labels_[c1]) v1b[x] = cls;
      std::vector<int> v0b = v0;
      v0b.push_back(c2);
      branch_undecided(std::move(rest2), k, b - cost(c2), std::move(v1b), std::move(v0b));
      return;
    }
  }
  auto unsat = get_unsatisfied(pending);
  branch_unsatisfied(unsat, 0, k, b, v0);
}

void Brancher::branch_unsatisfied(const std::vector<int>& unsat, std::size_t next, int k, int b,
                                  std::vector<int>& v0) {
  ++stats_.calls_unsatisfied;
  if (k < 0 || b < 0) return;
  if (next == unsat.size()) {
    emit(v0);
    return;
  }
  const int c = unsat[next];
  branch_unsatisfied(unsat, next + 1, k - 1, b, v0);
  v0.push_back(c);
  branch_unsatisfied(unsat, next + 1, k, b - cost(c), v0);
  v0.pop_back();
}

std::vector<int> Brancher::get_unsatisfied(const std::vector<int>& pending) {
  std::vector<int> out;
  for (int c : pending) {
    if (satisfiable_[c] < 0) satisfiable_[c] = self_satisfiable(s_, g_, table_, comps_[c]);
    if (!satisfiable_[c]) out.push_back(c);
  }
  return out;
}

int Brancher::cost(int c) const {
  return comps_[c].crisp_boundary ? kCrispCost : static_cast<int>(comps_[c].boundary.size());
}

bool Brancher::conflicts(int c, const std::vector<ClassId>& v1) const {
  for (auto [x, cls] : labels_[c])
    if (v1[x] != kZeroClass && v1[x] != cls) return true;
  return false;
}

bool Brancher::conflicts(int c1, int c2) const {
  for (auto [x, a] : labels_[c1])
    for (auto [y, b] : labels_[c2])
      if (x == y && a != b) return true;
  return false;
}

void Brancher::emit(const std::vector<int>& v0) {
  EdgeSet edges;
  for (int c : v0) edges.insert(edges.end(), comps_[c].boundary.begin(), comps_[c].boundary.end());
  std::sort(edges.begin(), edges.end());
  out_.push_back(std::move(edges));
}

}  // namespace min2lin
