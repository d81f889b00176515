#include "min2lin/linsolve.hpp"

#include <algorithm>
#include <numeric>

#include "min2lin/error.hpp"

namespace min2lin {
namespace {

int valuation(Value a, Value p) {
  int v = 0;
  while (a != 0 && a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

// Solves A x = b over Z_{p^n}. Rows of A are dense over num_vars columns.
std::optional<Assignment> solve_prime_power(std::vector<std::vector<Value>> a,
                                            std::vector<Value> b, int num_vars,
                                            const PrimePower& pp) {
  const Value q = pp.value();
  const int rows = static_cast<int>(a.size());
  std::vector<int> col(num_vars);
  std::iota(col.begin(), col.end(), 0);

  int rank = 0;
  std::vector<int> pivot_val;
  for (; rank < rows && rank < num_vars; ++rank) {
    int best_i = -1, best_j = -1, best_v = pp.n;
    for (int i = rank; i < rows; ++i) {
      for (int j = rank; j < num_vars; ++j) {
        Value x = a[i][col[j]];
        if (x == 0) continue;
        int v = valuation(x, pp.p);
        if (v < best_v) {
          best_v = v;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (best_i < 0) break;
    std::swap(a[rank], a[best_i]);
    std::swap(b[rank], b[best_i]);
    std::swap(col[rank], col[best_j]);

    const Value pv = ipow(pp.p, best_v);
    const Value unit_inv = inverse_mod(a[rank][col[rank]] / pv, q);
    for (int i = rank + 1; i < rows; ++i) {
      Value x = a[i][col[rank]];
      if (x == 0) continue;
      Value f = mulmod(x / pv, unit_inv, q);
      for (int j = rank; j < num_vars; ++j) {
        a[i][col[j]] = mod(a[i][col[j]] - mulmod(f, a[rank][col[j]], q), q);
      }
      b[i] = mod(b[i] - mulmod(f, b[rank], q), q);
    }
    pivot_val.push_back(best_v);
  }

  for (int i = rank; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  for (int i = 0; i < rank; ++i)
    if (b[i] % ipow(pp.p, pivot_val[i]) != 0) return std::nullopt;

  Assignment x(num_vars, 0);
  for (int i = rank - 1; i >= 0; --i) {
    Value rhs = b[i];
    for (int j = i + 1; j < num_vars; ++j)
      rhs = mod(rhs - mulmod(a[i][col[j]], x[col[j]], q), q);
    const Value pv = ipow(pp.p, pivot_val[i]);
    const Value sub = q / pv;
    const Value unit = a[i][col[i]] / pv;
    x[col[i]] = mulmod(rhs / pv, inverse_mod(unit % sub, sub), sub);
  }
  return x;
}

}  // namespace

std::optional<Assignment> feasible(std::span<const Equation> eqs, int num_vars, Value m) {
  RingContext ctx = RingContext::make(m);
  // Only variables that occur get a column; the rest stay 0.
  std::vector<int> column(num_vars, -1);
  std::vector<VarId> used;
  for (const auto& e : eqs) {
    for (const auto& t : e.terms) {
      if (column[t.var] < 0) {
        column[t.var] = static_cast<int>(used.size());
        used.push_back(t.var);
      }
    }
  }
  const int width = static_cast<int>(used.size());
  std::vector<Assignment> parts;
  for (const auto& pp : ctx.factors) {
    const Value q = pp.value();
    std::vector<std::vector<Value>> a;
    std::vector<Value> b;
    a.reserve(eqs.size());
    for (const auto& e : eqs) {
      std::vector<Value> row(width, 0);
      for (const auto& t : e.terms) row[column[t.var]] = mod(row[column[t.var]] + t.coef, q);
      a.push_back(std::move(row));
      b.push_back(mod(e.constant, q));
    }
    auto sol = solve_prime_power(std::move(a), std::move(b), width, pp);
    if (!sol) return std::nullopt;
    parts.push_back(std::move(*sol));
  }
  Assignment x(num_vars, 0);
  std::vector<Value> residues(ctx.factors.size());
  for (int c = 0; c < width; ++c) {
    for (std::size_t i = 0; i < parts.size(); ++i) residues[i] = parts[i][c];
    x[used[c]] = crt_combine(residues, ctx);
  }
  return x;
}

Equation class_constraint_to_equation(const ClassConstraint& cc, const ClassTable& table) {
  const Value q = table.modulus();
  Equation e;
  e.crisp = true;
  e.id = -1;
  if (cc.class_id == kZeroClass) {
    e.terms = {{1 % q, cc.var}};
    e.constant = 0;
    return e;
  }
  const int b = table.ord(cc.class_id);
  const Value a = table.lsu(cc.class_id);
  const int n = table.n();
  e.terms = {{ipow(table.p(), n - b - 1) % q, cc.var}};
  e.constant = mod(a * ipow(table.p(), n - 1), q);
  return e;
}

std::optional<Assignment> feasible_with_classes(std::span<const Equation> eqs,
                                                std::span<const ClassConstraint> ccs,
                                                int num_vars, const ClassTable& table) {
  std::vector<Equation> all(eqs.begin(), eqs.end());
  for (const auto& cc : ccs) all.push_back(class_constraint_to_equation(cc, table));
  return feasible(all, num_vars, table.modulus());
}

}  // namespace min2lin
