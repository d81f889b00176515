#pragma once

// Arithmetic over Z_m and Z_{p^n}: factorization, CRT, and the
// ord/lsu class partition of Z_{p^n}.
//
// The nonzero classes of Z_{p^n} are indexed by
//   id = 1 + ord * (p - 1) + (lsu - 1),
// and id 0 is the class {0}. Every class C has the canonical
// representative lsu(C) * p^ord(C).

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace min2lin {

using Value = std::int64_t;
using ClassId = int;

inline constexpr Value kMaxModulus = Value{1} << 31;
inline constexpr Value kMaxTableSize = Value{1} << 20;
inline constexpr ClassId kZeroClass = 0;

/// Canonical residue of a in [0, m).
constexpr Value mod(Value a, Value m) {
  Value r = a % m;
  return r < 0 ? r + m : r;
}

constexpr Value mulmod(Value a, Value b, Value m) {
  return static_cast<Value>((static_cast<__int128>(a) * b) % m);
}

Value ipow(Value base, int exp);

/// Multiplicative inverse of a unit modulo m; throws if a is not a unit.
Value inverse_mod(Value a, Value m);

struct PrimePower {
  Value p = 2;
  int n = 1;

  Value value() const { return ipow(p, n); }
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization with strictly increasing primes. 1 <= m <= 2^31.
std::vector<PrimePower> factorize(Value m);

struct RingContext {
  Value m = 1;
  std::vector<PrimePower> factors;

  static RingContext make(Value m);

  /// Number of distinct prime factors.
  int omega() const { return static_cast<int>(factors.size()); }
};

std::vector<Value> crt_split(Value a, const RingContext& ctx);
Value crt_combine(std::span<const Value> residues, const RingContext& ctx);

/// Base-p digit statistics (ord, lsu) of a in Z_{p^n}; (0, 0) for a == 0.
std::pair<int, int> ord_lsu(Value a, const PrimePower& pp);

/// The matching and absorbing partition Gamma_{p^n}.
class ClassTable {
 public:
  explicit ClassTable(PrimePower pp);

  const PrimePower& prime_power() const { return pp_; }
  Value p() const { return pp_.p; }
  int n() const { return pp_.n; }
  Value modulus() const { return modulus_; }

  int num_classes() const { return num_nonzero() + 1; }
  int num_nonzero() const { return pp_.n * static_cast<int>(pp_.p - 1); }

  ClassId class_of(Value a) const { return class_of_[mod(a, modulus_)]; }
  Value rep(ClassId c) const { return rep_[c]; }
  int ord(ClassId c) const;
  int lsu(ClassId c) const;
  std::vector<Value> members(ClassId c) const;

  /// Class of r*c for any c in C (C nonzero); kZeroClass when r*C = {0}.
  ClassId pi_map(Value r, ClassId c) const;
  /// The unique nonzero C with pi_map(r, C) == d, if any.
  std::optional<ClassId> pi_inv(Value r, ClassId d) const;

  /// Checks that a belongs to class c.
  bool contains(ClassId c, Value a) const { return class_of(a) == c; }

 private:
  PrimePower pp_;
  Value modulus_;
  std::vector<ClassId> class_of_;
  std::vector<Value> rep_;
};

}  // namespace min2lin
