#pragma once

#include <vector>

#include "detflop/field.hpp"

namespace detflop {

// Row-major dense matrix over one coefficient field.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  Field F;
  std::vector<FieldElem> a;

  DenseMatrix() = default;
  DenseMatrix(Field field, int r, int c)
      : rows(r), cols(c), F(std::move(field)), a(static_cast<std::size_t>(r) * c, F.zero()) {}

  static DenseMatrix identity(const Field& F, int n);

  FieldElem& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  const FieldElem& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

  DenseMatrix transposed() const;
  std::vector<FieldElem> mat_vec(const std::vector<FieldElem>& v) const;
  bool operator==(const DenseMatrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

// Rank by Gaussian elimination; empty matrix has rank 0.
int matrix_rank(DenseMatrix m);

// Exact determinant; NonSquareError when rows != cols.
FieldElem matrix_det(const DenseMatrix& m);

// The unique projective kernel direction of a square matrix of corank exactly
// one, normalized so the first nonzero coordinate is 1. WrongRankError(r)
// otherwise: r = n+1 means the matrix is invertible, r <= n-1 means the
// kernel is not a single point.
std::vector<FieldElem> corank1_kernel(const DenseMatrix& m);

// adj(m) with m * adj(m) = det(m) * I.
DenseMatrix adjugate(const DenseMatrix& m);

// Basis of the right kernel (possibly empty).
std::vector<std::vector<FieldElem>> nullspace_basis(const DenseMatrix& m);

}  // namespace detflop
