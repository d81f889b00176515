#include "min2lin/classgraph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "min2lin/error.hpp"

namespace min2lin {

ClassGraph::ClassGraph(const SimpleSystem& s, const ClassTable& table)
    : num_vars_(s.num_vars), num_nonzero_(table.num_nonzero()) {
  if (table.prime_power() != s.pp)
    throw Error(ErrorKind::InvalidArgument, "class table ring differs from the system ring");
  reps_.resize(table.num_classes());
  for (ClassId c = 0; c < table.num_classes(); ++c) reps_[c] = table.rep(c);
  adj_.resize(num_vertices());
  edges_of_.resize(s.equations.size());

  for (std::size_t i = 0; i < s.equations.size(); ++i) {
    const auto& e = s.equations[i];
    const int id = static_cast<int>(i);
    if (e.is_unary()) {
      if (!e.crisp) throw Error(ErrorKind::NonSimple, "soft unary equation in a simple instance");
      const ClassId target = table.class_of(e.r);
      if (target == kZeroClass) {
        for (ClassId c = 1; c <= num_nonzero_; ++c) add_edge(vertex(e.lhs, c), kSink, id, true);
      } else {
        add_edge(kSource, vertex(e.lhs, target), id, true);
      }
      continue;
    }
    if (e.lhs == e.rhs) throw Error(ErrorKind::NonSimple, "binary equation on a single variable");
    // e is y = r*x with y = lhs, x = rhs.
    std::vector<char> has_preimage(num_nonzero_ + 1, 0);
    for (ClassId c = 1; c <= num_nonzero_; ++c) {
      const ClassId d = table.pi_map(e.r, c);
      if (d == kZeroClass) continue;
      has_preimage[d] = 1;
      add_edge(vertex(e.rhs, c), vertex(e.lhs, d), id, e.crisp);
    }
    for (ClassId d = 1; d <= num_nonzero_; ++d)
      if (!has_preimage[d]) add_edge(vertex(e.lhs, d), kSink, id, e.crisp);
  }
}

void ClassGraph::add_edge(int u, int v, int equation, bool crisp) {
  const int id = static_cast<int>(edges_.size());
  edges_.push_back({u, v, equation, crisp});
  adj_[u].emplace_back(v, id);
  adj_[v].emplace_back(u, id);
  edges_of_[equation].push_back(id);
}

std::string ClassGraph::vertex_name(int w, std::span<const std::string> var_names) const {
  if (w == kSource) return "s";
  if (w == kSink) return "t";
  const VarId x = var_of(w);
  std::string name = x < static_cast<VarId>(var_names.size()) ? var_names[x]
                                                               : "v" + std::to_string(x);
  return name + "_" + std::to_string(reps_[class_of(w)]);
}

std::vector<char> reach(const ClassGraph& g, std::span<const int> removed) {
  std::vector<char> cut(g.edges().size(), 0);
  for (int e : removed) cut[e] = 1;
  std::vector<char> seen(g.num_vertices(), 0);
  std::deque<int> queue{ClassGraph::kSource};
  seen[ClassGraph::kSource] = 1;
  while (!queue.empty()) {
    int w = queue.front();
    queue.pop_front();
    for (auto [x, id] : g.neighbours(w)) {
      if (cut[id] || seen[x]) continue;
      seen[x] = 1;
      queue.push_back(x);
    }
  }
  return seen;
}

bool is_st_cut(const ClassGraph& g, std::span<const int> cut) {
  return !reach(g, cut)[ClassGraph::kSink];
}

EdgeSet sep(const ClassGraph& g, std::span<const int> cut) {
  auto r = reach(g, cut);
  if (r[ClassGraph::kSink]) throw Error(ErrorKind::NotACut, "edge set is not an st-cut");
  EdgeSet out;
  for (int id : cut) {
    const auto& e = g.edge(id);
    if (r[e.u] != r[e.v]) out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

bool conformal_reach(const ClassGraph& g, const std::vector<char>& r) {
  if (r[ClassGraph::kSink]) return false;
  for (VarId x = 0; x < g.num_vars(); ++x) {
    int count = 0;
    for (ClassId c = 1; c <= g.num_nonzero(); ++c) count += r[g.vertex(x, c)];
    if (count > 1) return false;
  }
  return true;
}

}  // namespace

bool is_conformal(const ClassGraph& g, std::span<const int> cut) {
  return conformal_reach(g, reach(g, cut));
}

ClassAssignment clasn(const ClassGraph& g, std::span<const int> cut) {
  auto r = reach(g, cut);
  ClassAssignment tau(g.num_vars(), kZeroClass);
  for (VarId x = 0; x < g.num_vars(); ++x)
    for (ClassId c = 1; c <= g.num_nonzero(); ++c)
      if (r[g.vertex(x, c)]) tau[x] = c;
  return tau;
}

EdgeSet ed(const ClassGraph& g, std::span<const int> equations) {
  EdgeSet out;
  for (int e : equations)
    for (int id : g.edges_of(e)) out.push_back(id);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> eqn(const ClassGraph& g, std::span<const int> cut) {
  std::vector<int> out;
  for (int id : cut) out.push_back(g.edge(id).equation);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> comp(const ClassGraph& g, std::span<const int> equations) {
  auto kept = eqn(g, sep(g, ed(g, equations)));
  std::vector<int> out;
  for (int e : equations)
    if (!std::binary_search(kept.begin(), kept.end(), e)) out.push_back(e);
  return out;
}

bool has_crisp_edge(const ClassGraph& g, std::span<const int> cut) {
  return std::any_of(cut.begin(), cut.end(), [&](int id) { return g.edge(id).crisp; });
}

std::vector<char> boolean_assignment(const Assignment& phi, const ClassGraph& g,
                                     const ClassTable& table) {
  std::vector<char> bits(g.num_vertices(), 0);
  bits[ClassGraph::kSource] = 1;
  for (VarId x = 0; x < g.num_vars(); ++x) {
    const ClassId c = table.class_of(phi[x]);
    if (c != kZeroClass) bits[g.vertex(x, c)] = 1;
  }
  return bits;
}

std::string to_dot(const ClassGraph& g, std::span<const std::string> var_names) {
  std::ostringstream out;
  out << "graph G {\n";
  for (int w = 0; w < g.num_vertices(); ++w)
    out << "  n" << w << " [label=\"" << g.vertex_name(w, var_names) << "\"];\n";
  for (std::size_t id = 0; id < g.edges().size(); ++id) {
    const auto& e = g.edges()[id];
    out << "  n" << e.u << " -- n" << e.v << " [label=\"e" << e.equation << "\""
        << (e.crisp ? ", style=bold" : "") << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace min2lin
