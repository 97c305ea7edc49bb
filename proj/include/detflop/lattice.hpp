#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "detflop/cones.hpp"
#include "detflop/flops.hpp"

namespace detflop {

// Divisor class on model ell in the hyperplane-pullback basis; the basis
// labels ride along so classes from different models cannot be mixed up.
struct DivisorClass {
  int model = 0;
  std::vector<int> factors;  // sorted basis labels, {0..N} \ {model}
  IVec coeffs;               // parallel to factors
};

// deg over X_ell of the monomial prod H_k^{e_k} with sum e_k = dim X: the
// coefficient of prod H_k^{n - e_k} in (sum H_k)^{n+1}, a multinomial count.
// Exponents beyond n make the class zero.
long long intersection_number(const Instance& inst, int ell, const std::map<int, int>& exponents);

// Simplicial nef cone of the model on its N basis classes.
ConeRP nef_cone(const Instance& inst, int ell);

// Lattice map N^1(X_j) -> N^1(X_i) induced by the flop, bases ordered by
// factor label. Unimodular, identity on the shared classes, and the image of
// the exchanged class carries a forced -1 at the facing slot.
struct PushforwardMatrix {
  int j = 0;
  int i = 0;
  std::vector<int> src_basis;
  std::vector<int> dst_basis;
  IMat m;  // dst x src
  std::string provenance;          // "structural" | "oracle-calibrated"
  std::vector<std::uint32_t> primes;  // calibration primes when applicable

  IVec apply(const IVec& v) const { return imat_vec(m, v); }
};

// Structural construction: shared-class coefficients of the exchanged column
// set to the adjugate-degree value n. Flagged provisional via provenance.
PushforwardMatrix structural_pushforward(const Instance& inst, int j, int i);

// Postcondition bundle shared by both modes: determinant +-1, identity on
// shared classes, involution against the reverse matrix, and exact wall
// adjacency of the transported nef cones.
void verify_pushforward_pair(const Instance& inst, const PushforwardMatrix& mji,
                             const PushforwardMatrix& mij);

// Counting oracle (n = 1 only): class of the pullback of the target basis
// class H_target under the flop j -> i, written in the source basis. Zeros of
// seeded linear sections of the kernel-coordinate map are counted on
// enumerable curve slices over a tower of fields per prime, the integer
// system is solved inside the box [0, n]^shared, and the primes must agree.
IVec degree_count_pullback(const Instance& inst, int j, int i, int target_slot,
                           const std::vector<std::uint32_t>& primes, int tower_height,
                           std::uint64_t seed);

// Full matrix via degree_count_pullback of the exchanged class, plus the
// postcondition bundle (both directions are counted and must be inverse to
// each other). OracleInconclusiveError when counts disagree;
// CalibrationUnavailableError for n > 1.
PushforwardMatrix calibrated_pushforward(const Instance& inst, int j, int i,
                                         const std::vector<std::uint32_t>& primes,
                                         int tower_height);

using PushforwardSet = std::map<std::pair<int, int>, PushforwardMatrix>;

PushforwardSet structural_pushforward_set(const Instance& inst);
PushforwardSet calibrated_pushforward_set(const Instance& inst,
                                          const std::vector<std::uint32_t>& primes,
                                          int tower_height);

}  // namespace detflop
