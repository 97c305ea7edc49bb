#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "detflop/matrix.hpp"
#include "detflop/multipoly.hpp"
#include "detflop/rng.hpp"

namespace detflop {

// Integer coefficient tensor b^{m_0 ... m_N}, slots 0..N each of size n+1,
// stored flat in lexicographic (m_0, ..., m_N) order with m_0 most
// significant. Immutable after creation.
struct CoefficientTensor {
  int n = 0;
  int N = 0;
  std::vector<long long> entries;

  std::size_t flat_size() const;
  long long at(const std::vector<int>& idx) const;
};

// A full problem instance: the tensor together with its provenance data.
// Slot 0 is the appended factor; X_0 is the distinguished starting model.
struct Instance {
  int n = 0;
  int N = 0;
  std::uint64_t seed = 0;
  int bound = 0;
  CoefficientTensor tensor;

  int dim_x() const { return n * (N - 1) - 1; }
  int num_models() const { return N + 1; }
  // Sorted ambient factor labels of model ell: {0..N} \ {ell}.
  std::vector<int> model_factors(int ell) const;
};

// Deterministic function of (n, N, seed, bound): entries drawn uniformly from
// [-bound, bound] by PCG64 (see rng.hpp), filled in lexicographic index order.
Instance random_instance(int n, int N, std::uint64_t seed, int bound);

// b = 1 iff all indices agree; the closed-form fixture of the N = 2 walkthrough.
Instance diagonal_instance(int n, int N);

// Instance with tensor slices m_0 = 0 and m_0 = 1 duplicated: every model-0
// point fails the Jacobian criterion. Singular-witness fixture.
Instance duplicated_slice_instance(int n, int N, std::uint64_t seed, int bound);

// Some defining form of some model is identically zero.
bool is_degenerate(const Instance& inst);

// Dense tensor of field values over a sorted subset of slots; supports
// successive contraction. This is the evaluation fast path shared by point
// probing, flop evaluation, and the degree oracle.
struct FieldTensor {
  Field F;
  int n = 0;
  std::vector<int> slots;        // sorted ascending
  std::vector<FieldElem> data;   // mixed radix, first slot most significant

  static FieldTensor from_instance(const Instance& inst, const Field& F);
  FieldTensor contract(int slot, const std::vector<FieldElem>& v) const;
  // Remaining-slot views:
  DenseMatrix as_matrix(int row_slot, int col_slot) const;
  std::vector<FieldElem> as_vector(int slot) const;
  FieldElem as_scalar() const;
};

// Values of the n+1 defining forms of X_ell at the given coordinates
// (coords must cover exactly the factors of the model).
std::vector<FieldElem> model_equation_values(const Instance& inst, int ell, const Field& F,
                                             const std::map<int, std::vector<FieldElem>>& coords);

// The n+1 multilinear forms cutting out X_ell, indexed by the slot-ell label.
std::vector<MultiPoly> model_equations(const Instance& inst, int ell);

// Evaluated slice matrix: rows indexed by slot row_slot, columns by slot
// col_slot, all other slots contracted with the supplied coordinate vectors.
// SlotMismatchError unless coords covers exactly the complement of the two.
DenseMatrix slice_matrix(const Instance& inst, int row_slot, int col_slot, const Field& F,
                         const std::map<int, std::vector<FieldElem>>& coords);

// Symbolic slice matrix over the remaining N-1 factors.
std::vector<std::vector<MultiPoly>> slice_matrix_symbolic(const Instance& inst, int row_slot,
                                                          int col_slot);

// The determinantal base locus of the pair {j, i}: its defining form has
// multidegree (n+1, ..., n+1) across the N-1 remaining factors and is
// independent of the order of the pair.
struct BaseLocusSpec {
  int j = 0;
  int i = 0;                  // unordered pair, stored with j < i
  std::vector<int> factors;   // {0..N} \ {j, i}, sorted
  MultiPoly defining_form;
  bool degenerate = false;    // identically zero form
};

BaseLocusSpec determinant_form(const Instance& inst, int j, int i,
                               std::size_t term_cap = 10000000);

}  // namespace detflop
