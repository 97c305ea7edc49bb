#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "detflop/common.hpp"

namespace detflop {

enum class FieldKind { Rationals, Prime, Extension };

// Description of an exact coefficient field: the rationals, a prime field
// F_p, or F_{p^k} presented as F_p[x] modulo a monic irreducible of degree k.
// The modulus is pinned per (p, k) to the lexicographically smallest
// irreducible monic polynomial, where "smallest" enumerates the k low-order
// coefficients (c_0, ..., c_{k-1}) as little-endian base-p digits of an
// integer counter.
struct FieldSpec {
  FieldKind kind = FieldKind::Rationals;
  std::uint32_t p = 0;
  std::uint32_t k = 1;
  std::vector<std::uint32_t> modulus;  // c_0..c_{k-1} of x^k + sum c_i x^i; empty when k == 1

  static FieldSpec rationals();
  static FieldSpec prime(std::uint32_t p);
  static FieldSpec extension(std::uint32_t p, std::uint32_t k);
  // As above but with an explicit modulus (validated for irreducibility).
  static FieldSpec extension(std::uint32_t p, std::uint32_t k, std::vector<std::uint32_t> modulus);

  bool operator==(const FieldSpec&) const = default;
};

// Canonical element: reduced fraction over the rationals, least-residue
// coefficient vector of length k otherwise. Equality is representation
// equality.
struct FieldElem {
  Rat rat;
  std::vector<std::uint32_t> c;
  bool operator==(const FieldElem&) const = default;
  bool operator<(const FieldElem& o) const {
    if (c != o.c) return c < o.c;
    return rat < o.rat;
  }
};

bool is_prime_u32(std::uint32_t n);

// Immutable arithmetic context. Cheap to copy; all element operations go
// through it.
class Field {
 public:
  Field() : spec_(FieldSpec::rationals()) {}
  explicit Field(FieldSpec spec);

  static Field rationals() { return Field(FieldSpec::rationals()); }
  static Field prime(std::uint32_t p) { return Field(FieldSpec::prime(p)); }
  static Field extension(std::uint32_t p, std::uint32_t k) {
    return Field(FieldSpec::extension(p, k));
  }

  const FieldSpec& spec() const { return spec_; }
  bool is_rationals() const { return spec_.kind == FieldKind::Rationals; }
  std::uint32_t p() const { return spec_.p; }
  std::uint32_t k() const { return spec_.k; }
  // Field size q = p^k, 0 for the rationals.
  std::uint64_t size() const;

  FieldElem zero() const;
  FieldElem one() const;
  FieldElem from_int(long long v) const;
  FieldElem from_rat(const Rat& r) const;  // denominator must be a unit

  bool is_zero(const FieldElem& a) const;
  bool eq(const FieldElem& a, const FieldElem& b) const { return a == b; }

  FieldElem add(const FieldElem& a, const FieldElem& b) const;
  FieldElem sub(const FieldElem& a, const FieldElem& b) const;
  FieldElem mul(const FieldElem& a, const FieldElem& b) const;
  FieldElem neg(const FieldElem& a) const;
  FieldElem inv(const FieldElem& a) const;
  FieldElem div(const FieldElem& a, const FieldElem& b) const { return mul(a, inv(b)); }
  FieldElem pow(FieldElem base, unsigned long long e) const;

  // Deterministic enumeration of a finite field: index <-> element, where the
  // element at index i has coefficient vector = little-endian base-p digits
  // of i. Index 0 is zero, index 1 is one.
  FieldElem elem_at(std::uint64_t index) const;
  std::uint64_t index_of(const FieldElem& a) const;

  // Embedding of a subfield with the same characteristic and k_sub | k,
  // determined by the smallest-index root of the subfield modulus in this
  // field. Identity on prime subfields.
  FieldElem embed(const Field& sub, const FieldElem& a) const;

  std::string to_string(const FieldElem& a) const;

  bool operator==(const Field& o) const { return spec_ == o.spec_; }

 private:
  FieldSpec spec_;

  std::vector<std::uint32_t> poly_mul_mod(const std::vector<std::uint32_t>& a,
                                          const std::vector<std::uint32_t>& b) const;
};

// First nonzero coordinate scaled to 1; all-zero input is an error. Makes
// projective coordinates canonically comparable.
std::vector<FieldElem> normalize_projective(const Field& F, std::vector<FieldElem> v);

}  // namespace detflop
