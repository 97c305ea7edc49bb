#include "detflop/intlin.hpp"

#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

namespace detflop {

IMat imat_identity(int n) {
  IMat m(static_cast<std::size_t>(n), IVec(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  return m;
}

IMat imat_mul(const IMat& a, const IMat& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  if (!a.empty() && a[0].size() != k) throw DimensionMismatchError("imat_mul shapes");
  IMat r(n, IVec(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      long long av = a[i][t];
      if (av == 0) continue;
      for (std::size_t j = 0; j < m; ++j) r[i][j] = add_ck(r[i][j], mul_ck(av, b[t][j]));
    }
  return r;
}

IVec imat_vec(const IMat& a, const IVec& v) {
  IVec r(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != v.size()) throw DimensionMismatchError("imat_vec shapes");
    for (std::size_t j = 0; j < v.size(); ++j) r[i] = add_ck(r[i], mul_ck(a[i][j], v[j]));
  }
  return r;
}

IMat imat_transpose(const IMat& a) {
  if (a.empty()) return a;
  IMat t(a[0].size(), IVec(a.size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

long long imat_det(const IMat& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<Int>> w(n, std::vector<Int>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw NonSquareError(static_cast<int>(n), static_cast<int>(a[i].size()));
    for (std::size_t j = 0; j < n; ++j) w[i][j] = a[i][j];
  }
  // Bareiss fraction-free elimination
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (w[k][k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && w[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(w[k], w[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        w[i][j] = (w[i][j] * w[k][k] - w[i][k] * w[k][j]) / prev;
    prev = w[k][k];
  }
  Int det = n == 0 ? Int(1) : w[n - 1][n - 1];
  if (sign < 0) det = -det;
  return to_ll(det);
}

IMat imat_inverse_unimodular(const IMat& a) {
  const std::size_t n = a.size();
  long long det = imat_det(a);
  if (det != 1 && det != -1) throw Error("matrix is not unimodular");
  IMat inv(n, IVec(n, 0));
  // adjugate via cofactors; n <= 8 at desk scale
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      IMat minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == i) continue;
        IVec row;
        for (std::size_t c = 0; c < n; ++c)
          if (c != j) row.push_back(a[r][c]);
        minor.push_back(std::move(row));
      }
      long long cof = minor.empty() ? 1 : imat_det(minor);
      if (((i + j) & 1) != 0) cof = -cof;
      inv[j][i] = det > 0 ? cof : -cof;
    }
  return inv;
}

namespace {

// rational row echelon over Int rows; returns pivot columns
int echelon_int(std::vector<std::vector<Rat>>& w, std::vector<int>* pivots) {
  const std::size_t rows = w.size();
  const std::size_t cols = rows == 0 ? 0 : w[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && w[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(w[r], w[piv]);
    Rat inv = Rat(1) / w[r][c];
    for (std::size_t j = c; j < cols; ++j) w[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || w[i][c] == 0) continue;
      Rat f = w[i][c];
      for (std::size_t j = c; j < cols; ++j) w[i][j] -= f * w[r][j];
    }
    if (pivots) pivots->push_back(static_cast<int>(c));
    ++r;
  }
  return static_cast<int>(r);
}

std::vector<std::vector<Rat>> to_rat(const std::vector<std::vector<Int>>& rows) {
  std::vector<std::vector<Rat>> w;
  w.reserve(rows.size());
  for (const auto& row : rows) {
    std::vector<Rat> r;
    r.reserve(row.size());
    for (const auto& v : row) r.emplace_back(v);
    w.push_back(std::move(r));
  }
  return w;
}

}  // namespace

int int_rank(const std::vector<std::vector<Int>>& rows) {
  auto w = to_rat(rows);
  return echelon_int(w, nullptr);
}

std::vector<std::vector<Int>> int_nullspace(const std::vector<std::vector<Int>>& rows) {
  if (rows.empty()) return {};
  auto w = to_rat(rows);
  std::vector<int> pivots;
  int rank = echelon_int(w, &pivots);
  const std::size_t cols = rows[0].size();
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<std::vector<Int>> basis;
  for (std::size_t fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<Rat> v(cols, Rat(0));
    v[fc] = 1;
    for (int r = 0; r < rank; ++r)
      v[static_cast<std::size_t>(pivots[static_cast<std::size_t>(r)])] = -w[static_cast<std::size_t>(r)][fc];
    // clear denominators
    Int lcm = 1;
    for (const auto& x : v) {
      Int den = boost::multiprecision::denominator(x);
      lcm = boost::multiprecision::lcm(lcm, den);
    }
    std::vector<Int> iv;
    iv.reserve(cols);
    for (const auto& x : v)
      iv.push_back(boost::multiprecision::numerator(x) * (lcm / boost::multiprecision::denominator(x)));
    basis.push_back(primitive(std::move(iv)));
  }
  return basis;
}

std::vector<Int> primitive(std::vector<Int> v) {
  Int g = 0;
  for (const auto& x : v) g = boost::multiprecision::gcd(g, x);
  if (g == 0) return v;
  for (auto& x : v) x /= g;
  return v;
}

long long to_ll(const Int& v) {
  if (v > Int(std::numeric_limits<long long>::max()) || v < Int(std::numeric_limits<long long>::min()))
    throw Error("integer exceeds 64-bit range");
  return static_cast<long long>(v);
}

IVec to_llvec(const std::vector<Int>& v) {
  IVec r;
  r.reserve(v.size());
  for (const auto& x : v) r.push_back(to_ll(x));
  return r;
}

std::vector<Int> to_intvec(const IVec& v) {
  std::vector<Int> r;
  r.reserve(v.size());
  for (long long x : v) r.emplace_back(x);
  return r;
}

}  // namespace detflop
