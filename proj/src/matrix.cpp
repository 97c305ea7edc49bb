#include "detflop/matrix.hpp"

namespace detflop {

DenseMatrix DenseMatrix::identity(const Field& F, int n) {
  DenseMatrix m(F, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = F.one();
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(F, cols, rows);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
  return t;
}

std::vector<FieldElem> DenseMatrix::mat_vec(const std::vector<FieldElem>& v) const {
  if (static_cast<int>(v.size()) != cols) throw DimensionMismatchError("mat_vec length");
  std::vector<FieldElem> out(static_cast<std::size_t>(rows), F.zero());
  for (int r = 0; r < rows; ++r) {
    FieldElem acc = F.zero();
    for (int c = 0; c < cols; ++c) acc = F.add(acc, F.mul(at(r, c), v[static_cast<std::size_t>(c)]));
    out[static_cast<std::size_t>(r)] = acc;
  }
  return out;
}

namespace {

// In-place row echelon; returns (rank, det-if-square). Pivoting picks the
// first nonzero entry in the column, which keeps elimination deterministic.
struct EchelonResult {
  int rank = 0;
  FieldElem det;
  std::vector<int> pivot_cols;
};

EchelonResult echelon(DenseMatrix& m, bool track_det) {
  const Field& F = m.F;
  EchelonResult res;
  res.det = F.one();
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int piv = -1;
    for (int i = r; i < m.rows; ++i)
      if (!F.is_zero(m.at(i, c))) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r) {
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
      if (track_det) res.det = F.neg(res.det);
    }
    if (track_det) res.det = F.mul(res.det, m.at(r, c));
    FieldElem inv = F.inv(m.at(r, c));
    for (int j = c; j < m.cols; ++j) m.at(r, j) = F.mul(m.at(r, j), inv);
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || F.is_zero(m.at(i, c))) continue;
      FieldElem f = m.at(i, c);
      for (int j = c; j < m.cols; ++j)
        m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(r, j)));
    }
    res.pivot_cols.push_back(c);
    ++r;
  }
  res.rank = r;
  return res;
}

}  // namespace

int matrix_rank(DenseMatrix m) {
  if (m.rows == 0 || m.cols == 0) return 0;
  return echelon(m, false).rank;
}

FieldElem matrix_det(const DenseMatrix& m) {
  if (m.rows != m.cols) throw NonSquareError(m.rows, m.cols);
  if (m.rows == 0) return m.F.one();
  DenseMatrix w = m;
  EchelonResult res = echelon(w, true);
  if (res.rank < m.rows) return m.F.zero();
  return res.det;
}

std::vector<FieldElem> corank1_kernel(const DenseMatrix& m) {
  if (m.rows != m.cols) throw NonSquareError(m.rows, m.cols);
  const Field& F = m.F;
  const int n1 = m.rows;  // n+1
  DenseMatrix w = m;
  EchelonResult res = echelon(w, false);
  if (res.rank != n1 - 1) throw WrongRankError(res.rank);
  // One free column; back-substitute from the reduced echelon form.
  std::vector<bool> is_pivot(static_cast<std::size_t>(n1), false);
  for (int c : res.pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;
  int free_col = 0;
  while (is_pivot[static_cast<std::size_t>(free_col)]) ++free_col;
  std::vector<FieldElem> v(static_cast<std::size_t>(n1), F.zero());
  v[static_cast<std::size_t>(free_col)] = F.one();
  for (int r = 0; r < res.rank; ++r) {
    int pc = res.pivot_cols[static_cast<std::size_t>(r)];
    v[static_cast<std::size_t>(pc)] = F.neg(w.at(r, free_col));
  }
  return normalize_projective(F, std::move(v));
}

std::vector<std::vector<FieldElem>> nullspace_basis(const DenseMatrix& m) {
  const Field& F = m.F;
  DenseMatrix w = m;
  EchelonResult res = echelon(w, false);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols), false);
  for (int c : res.pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<std::vector<FieldElem>> basis;
  for (int fc = 0; fc < m.cols; ++fc) {
    if (is_pivot[static_cast<std::size_t>(fc)]) continue;
    std::vector<FieldElem> v(static_cast<std::size_t>(m.cols), F.zero());
    v[static_cast<std::size_t>(fc)] = F.one();
    for (int r = 0; r < res.rank; ++r)
      v[static_cast<std::size_t>(res.pivot_cols[static_cast<std::size_t>(r)])] =
          F.neg(w.at(r, fc));
    basis.push_back(std::move(v));
  }
  return basis;
}

DenseMatrix adjugate(const DenseMatrix& m) {
  if (m.rows != m.cols) throw NonSquareError(m.rows, m.cols);
  const Field& F = m.F;
  const int n = m.rows;
  if (n == 0) return DenseMatrix(F, 0, 0);
  if (n == 1) {
    DenseMatrix r(F, 1, 1);
    r.at(0, 0) = F.one();
    return r;
  }
  DenseMatrix adj(F, n, n);
  DenseMatrix minor(F, n - 1, n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int mr = 0;
      for (int r = 0; r < n; ++r) {
        if (r == i) continue;
        int mc = 0;
        for (int c = 0; c < n; ++c) {
          if (c == j) continue;
          minor.at(mr, mc) = m.at(r, c);
          ++mc;
        }
        ++mr;
      }
      FieldElem cof = matrix_det(minor);
      if (((i + j) & 1) != 0) cof = F.neg(cof);
      adj.at(j, i) = cof;  // transpose of the cofactor matrix
    }
  }
  return adj;
}

}  // namespace detflop
