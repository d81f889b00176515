#include "min2lin/modring.hpp"

#include <string>

#include "min2lin/error.hpp"

namespace min2lin {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ModulusOutOfRange: return "modulus-out-of-range";
    case ErrorKind::ResidueOutOfRange: return "residue-out-of-range";
    case ErrorKind::TableTooLarge: return "table-too-large";
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::TooManyVariables: return "too-many-variables";
    case ErrorKind::UnknownHeader: return "unknown-ring-header";
    case ErrorKind::PartialAssignment: return "partial-assignment";
    case ErrorKind::NonSimple: return "non-simple";
    case ErrorKind::NotACut: return "not-a-cut";
    case ErrorKind::BoundExceeded: return "bound-exceeded";
    case ErrorKind::ModeMismatch: return "mode-mismatch";
    case ErrorKind::Divisibility: return "divisibility-violation";
    case ErrorKind::InstanceTooLarge: return "instance-too-large";
    case ErrorKind::UnknownKind: return "unknown-kind";
    case ErrorKind::InvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

Value ipow(Value base, int exp) {
  Value r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

Value inverse_mod(Value a, Value m) {
  if (m == 1) return 0;
  Value old_r = mod(a, m), r = m;
  Value old_s = 1, s = 0;
  while (r != 0) {
    Value q = old_r / r;
    Value t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) {
    throw Error(ErrorKind::InvalidArgument,
                std::to_string(a) + " is not a unit modulo " + std::to_string(m));
  }
  return mod(old_s, m);
}

std::vector<PrimePower> factorize(Value m) {
  if (m < 1 || m > kMaxModulus) {
    throw Error(ErrorKind::ModulusOutOfRange,
                "modulus " + std::to_string(m) + " outside [1, 2^31]");
  }
  std::vector<PrimePower> out;
  for (Value p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    int n = 0;
    while (m % p == 0) {
      m /= p;
      ++n;
    }
    out.push_back({p, n});
  }
  if (m > 1) out.push_back({m, 1});
  return out;
}

RingContext RingContext::make(Value m) { return RingContext{m, factorize(m)}; }

std::vector<Value> crt_split(Value a, const RingContext& ctx) {
  std::vector<Value> out;
  out.reserve(ctx.factors.size());
  for (const auto& pp : ctx.factors) out.push_back(mod(a, pp.value()));
  return out;
}

Value crt_combine(std::span<const Value> residues, const RingContext& ctx) {
  if (residues.size() != ctx.factors.size()) {
    throw Error(ErrorKind::ResidueOutOfRange, "residue count does not match factor count");
  }
  Value x = 0;
  for (std::size_t i = 0; i < residues.size(); ++i) {
    Value q = ctx.factors[i].value();
    if (residues[i] < 0 || residues[i] >= q) {
      throw Error(ErrorKind::ResidueOutOfRange,
                  "residue " + std::to_string(residues[i]) + " outside [0, " +
                      std::to_string(q) + ")");
    }
    Value rest = ctx.m / q;
    Value coeff = mulmod(rest, inverse_mod(rest % q, q), ctx.m);
    x = mod(x + mulmod(coeff, residues[i], ctx.m), ctx.m);
  }
  return x;
}

std::pair<int, int> ord_lsu(Value a, const PrimePower& pp) {
  a = mod(a, pp.value());
  if (a == 0) return {0, 0};
  int ord = 0;
  while (a % pp.p == 0) {
    a /= pp.p;
    ++ord;
  }
  return {ord, static_cast<int>(a % pp.p)};
}

ClassTable::ClassTable(PrimePower pp) : pp_(pp) {
  if (pp.n < 1) throw Error(ErrorKind::InvalidArgument, "class table needs n >= 1");
  modulus_ = pp.value();
  if (modulus_ > kMaxTableSize) {
    throw Error(ErrorKind::TableTooLarge,
                "class table for " + std::to_string(modulus_) + " exceeds 2^20 elements");
  }
  class_of_.resize(static_cast<std::size_t>(modulus_));
  for (Value a = 0; a < modulus_; ++a) {
    auto [o, l] = ord_lsu(a, pp_);
    class_of_[a] = a == 0 ? kZeroClass : 1 + o * static_cast<int>(pp_.p - 1) + (l - 1);
  }
  rep_.assign(num_classes(), 0);
  for (ClassId c = 1; c < num_classes(); ++c) rep_[c] = lsu(c) * ipow(pp_.p, ord(c));
}

int ClassTable::ord(ClassId c) const {
  return c == kZeroClass ? 0 : (c - 1) / static_cast<int>(pp_.p - 1);
}

int ClassTable::lsu(ClassId c) const {
  return c == kZeroClass ? 0 : (c - 1) % static_cast<int>(pp_.p - 1) + 1;
}

std::vector<Value> ClassTable::members(ClassId c) const {
  std::vector<Value> out;
  for (Value a = 0; a < modulus_; ++a)
    if (class_of_[a] == c) out.push_back(a);
  return out;
}

ClassId ClassTable::pi_map(Value r, ClassId c) const {
  return class_of(mulmod(mod(r, modulus_), rep_[c], modulus_));
}

std::optional<ClassId> ClassTable::pi_inv(Value r, ClassId d) const {
  if (d == kZeroClass) return std::nullopt;
  for (ClassId c = 1; c < num_classes(); ++c)
    if (pi_map(r, c) == d) return c;
  return std::nullopt;
}

}  // namespace min2lin
