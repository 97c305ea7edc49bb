#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "detflop/tensor.hpp"

namespace detflop {

// A point of a product of projective spaces: one normalized coordinate vector
// (first nonzero coordinate = 1) per factor slot. Equality is representation
// equality.
struct MultiProjPoint {
  Field F;
  std::vector<int> slots;                      // sorted ascending
  std::vector<std::vector<FieldElem>> coords;  // parallel to slots

  const std::vector<FieldElem>& coord(int slot) const;
  std::map<int, std::vector<FieldElem>> coord_map() const;
  bool same_as(const MultiProjPoint& o) const { return slots == o.slots && coords == o.coords; }
  std::string to_string() const;
};

MultiProjPoint make_point(const Field& F, const std::vector<int>& slots,
                          std::vector<std::vector<FieldElem>> coords);

// Number of F_q-points of P^n and the deterministic enumeration behind every
// scan: index 0 is (0,...,0,1) and order is lexicographic on normalized
// coordinate vectors, field elements compared by index.
std::uint64_t proj_point_count(const Field& F, int n);
std::vector<FieldElem> proj_point_at(const Field& F, int n, std::uint64_t idx);

bool on_model(const Instance& inst, int ell, const MultiProjPoint& pt);

// Every F_q-point of the ambient product of X_ell once, filtered by the model
// equations, in lexicographic order (factor of smallest slot most
// significant). BudgetExceededError carries the exact ambient count needed.
std::vector<MultiProjPoint> enumerate_points(const Instance& inst, int ell, const Field& F,
                                             std::uint64_t budget);

// Fast model-point enumeration through the corank structure: all factors
// except a pivot are scanned, pivot coordinates come from the kernel of the
// evaluated slice matrix. `frozen` pins chosen factors to fixed coordinates
// (used for curve slices). Yields each point exactly once; order differs from
// enumerate_points.
void enumerate_model_points(const Instance& inst, int ell, const Field& F,
                            const std::map<int, std::vector<FieldElem>>& frozen,
                            const std::function<void(const MultiProjPoint&)>& cb);

// Seeded point sampling: random coordinates everywhere except a pivot factor,
// a random line in one more factor, a root of the restricted determinant
// (escalating F_q -> F_{q^2} when the root is quadratic over F_q), then the
// corank-1 kernel fills the pivot. SampleFailureError after `retries` draws.
MultiProjPoint sample_point(const Instance& inst, int ell, const Field& F, Pcg64& rng,
                            int retries = 64);

// Rank of the chart Jacobian of the n+1 defining forms at a point of X_ell;
// n+1 classifies the point as smooth. `charts` optionally picks the
// dehomogenization coordinate per slot (default: the normalization pivot).
int jacobian_rank(const Instance& inst, int ell, const MultiProjPoint& pt,
                  const std::map<int, int>& charts = {});

struct SmoothnessReport {
  int model = 0;
  std::vector<FieldSpec> fields;
  std::uint64_t tested = 0;
  std::vector<MultiProjPoint> witnesses;
  std::string verdict;  // no-singular-point-found | singular-witness | degenerate
};

// Enumerates (within budget) or samples points of X_ell over each field and
// collects Jacobian-deficient witnesses. A clean scan is probabilistic
// evidence for Assumption-style smoothness, never a proof.
SmoothnessReport smoothness_scan(const Instance& inst, int ell, const std::vector<Field>& fields,
                                 std::uint64_t budget, int samples = 64, int threads = 1);

struct RankLocusReport {
  int j = 0, i = 0;
  std::vector<FieldSpec> fields;
  std::uint64_t tested = 0;
  std::vector<MultiProjPoint> witnesses;  // base-locus points with slice rank <= n-1
  std::string verdict;                    // exceptional-locus-nonempty | none-found
};

// Searches the base locus of the pair {j, i} for points where the slice
// matrix has rank <= n-1. A witness certifies the birational map is not an
// isomorphism over the base; none-found is inconclusive.
RankLocusReport rank_locus_scan(const Instance& inst, int j, int i,
                                const std::vector<Field>& fields, std::uint64_t budget,
                                int threads = 1);

// Square root in F_q (q odd), Tonelli-Shanks; nullopt for non-residues.
std::optional<FieldElem> field_sqrt(const Field& F, const FieldElem& a);

}  // namespace detflop
