#include <doctest.h>

#include "detflop/matrix.hpp"
#include "detflop/multipoly.hpp"
#include "detflop/rng.hpp"

using namespace detflop;

namespace {

DenseMatrix from_ints(const Field& F, int rows, int cols, std::vector<long long> vals) {
  DenseMatrix m(F, rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m.at(r, c) = F.from_int(vals[static_cast<std::size_t>(r * cols + c)]);
  return m;
}

FieldElem random_elem(const Field& F, Pcg64& rng) {
  if (F.is_rationals()) {
    long long num = static_cast<long long>(rng.bounded(41)) - 20;
    long long den = 1 + static_cast<long long>(rng.bounded(9));
    FieldElem e;
    e.rat = Rat(num, den);
    return e;
  }
  return F.elem_at(rng.bounded(F.size()));
}

}  // namespace

TEST_CASE("primality check") {
  CHECK(is_prime_u32(2));
  CHECK(is_prime_u32(3));
  CHECK(is_prime_u32(7919));
  CHECK(is_prime_u32(4294967291u));  // largest prime below 2^32
  CHECK_FALSE(is_prime_u32(1));
  CHECK_FALSE(is_prime_u32(4294967295u));
  CHECK_THROWS_AS(Field::prime(9), Error);
}

TEST_CASE("pinned extension moduli") {
  // F_9: x^2 + 1 is the first irreducible in counter order.
  Field f9 = Field::extension(3, 2);
  CHECK(f9.spec().modulus == std::vector<std::uint32_t>{1, 0});
  // F_25: x^2 + 2 (x^2+1 factors as (x+2)(x+3) mod 5).
  Field f25 = Field::extension(5, 2);
  CHECK(f25.spec().modulus == std::vector<std::uint32_t>{2, 0});
  CHECK(f9.size() == 9);
  CHECK(Field::extension(3, 3).size() == 27);
  CHECK_THROWS_AS(FieldSpec::extension(3, 2, {0, 0}), Error);  // x^2 reducible
}

TEST_CASE("field axioms on random triples") {
  std::vector<Field> fields = {Field::rationals(), Field::prime(3), Field::prime(11),
                               Field::extension(3, 2), Field::extension(5, 3)};
  Pcg64 rng(2024);
  for (const auto& F : fields) {
    for (int t = 0; t < 64; ++t) {
      FieldElem a = random_elem(F, rng), b = random_elem(F, rng), c = random_elem(F, rng);
      CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
      CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
      CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
      CHECK(F.add(a, b) == F.add(b, a));
      CHECK(F.mul(a, b) == F.mul(b, a));
      CHECK(F.add(a, F.neg(a)) == F.zero());
      if (!F.is_zero(a)) CHECK(F.mul(a, F.inv(a)) == F.one());
    }
  }
}

TEST_CASE("extension embedding is a field homomorphism") {
  Field f3 = Field::prime(3);
  Field f9 = Field::extension(3, 2);
  Field f81 = Field::extension(3, 4);
  CHECK(f9.embed(f3, f3.from_int(2)) == f9.from_int(2));
  Pcg64 rng(7);
  for (int t = 0; t < 32; ++t) {
    FieldElem a = f9.elem_at(rng.bounded(9)), b = f9.elem_at(rng.bounded(9));
    CHECK(f81.embed(f9, f9.add(a, b)) == f81.add(f81.embed(f9, a), f81.embed(f9, b)));
    CHECK(f81.embed(f9, f9.mul(a, b)) == f81.mul(f81.embed(f9, a), f81.embed(f9, b)));
  }
  CHECK(f81.embed(f9, f9.one()) == f81.one());
}

TEST_CASE("matrix rank examples") {
  Field f3 = Field::prime(3);
  Field q = Field::rationals();
  CHECK(matrix_rank(from_ints(f3, 2, 2, {0, 0, 0, 0})) == 0);
  CHECK(matrix_rank(DenseMatrix::identity(q, 3)) == 3);
  CHECK(matrix_rank(from_ints(q, 2, 2, {1, 2, 2, 4})) == 1);
  CHECK(matrix_rank(DenseMatrix(q, 0, 0)) == 0);
}

TEST_CASE("matrix determinant examples") {
  Field q = Field::rationals();
  CHECK(q.is_zero(matrix_det(from_ints(q, 2, 2, {0, 0, 0, 1}))));
  CHECK(matrix_det(DenseMatrix::identity(q, 4)) == q.one());
  CHECK(matrix_det(from_ints(q, 2, 2, {1, 2, 3, 4})) == q.from_int(-2));
  CHECK_THROWS_AS(matrix_det(DenseMatrix(q, 2, 3)), NonSquareError);
}

TEST_CASE("corank-1 kernel examples") {
  Field q = Field::rationals();
  auto v = corank1_kernel(from_ints(q, 2, 2, {0, 0, 0, 1}));
  CHECK(v[0] == q.one());
  CHECK(q.is_zero(v[1]));

  auto w = corank1_kernel(from_ints(q, 2, 2, {1, 2, 2, 4}));
  CHECK(w[0] == q.one());
  FieldElem expect;
  expect.rat = Rat(-1, 2);
  CHECK(w[1] == expect);

  CHECK_THROWS_AS(corank1_kernel(from_ints(q, 2, 2, {0, 0, 0, 0})), WrongRankError);
  try {
    corank1_kernel(from_ints(q, 2, 2, {0, 0, 0, 0}));
  } catch (const WrongRankError& e) {
    CHECK(e.rank == 0);
  }
}

TEST_CASE("adjugate examples and identity") {
  Field q = Field::rationals();
  CHECK(adjugate(DenseMatrix::identity(q, 3)) == DenseMatrix::identity(q, 3));
  auto adj = adjugate(from_ints(q, 2, 2, {1, 2, 3, 4}));
  CHECK(adj == from_ints(q, 2, 2, {4, -2, -3, 1}));

  // m * adj(m) = det(m) * I on random matrices over several fields
  std::vector<Field> fields = {Field::rationals(), Field::prime(7), Field::extension(3, 2)};
  Pcg64 rng(99);
  for (const auto& F : fields) {
    for (int t = 0; t < 20; ++t) {
      int n = 2 + static_cast<int>(rng.bounded(3));
      DenseMatrix m(F, n, n);
      for (auto& e : m.a) e = random_elem(F, rng);
      DenseMatrix prod(F, n, n);
      DenseMatrix adjm = adjugate(m);
      FieldElem det = matrix_det(m);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          FieldElem acc = F.zero();
          for (int k = 0; k < n; ++k) acc = F.add(acc, F.mul(m.at(r, k), adjm.at(k, c)));
          prod.at(r, c) = acc;
        }
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          CHECK(prod.at(r, c) == (r == c ? det : F.zero()));
    }
  }
}

TEST_CASE("adjugate of a corank-1 matrix has rank 1 with kernel columns") {
  Field f7 = Field::prime(7);
  Pcg64 rng(5);
  int found = 0;
  for (int t = 0; t < 200 && found < 12; ++t) {
    // random rank-2 3x3 built from two random rows plus a combination
    DenseMatrix m(f7, 3, 3);
    for (int c = 0; c < 3; ++c) {
      m.at(0, c) = random_elem(f7, rng);
      m.at(1, c) = random_elem(f7, rng);
    }
    FieldElem l0 = random_elem(f7, rng), l1 = random_elem(f7, rng);
    for (int c = 0; c < 3; ++c)
      m.at(2, c) = f7.add(f7.mul(l0, m.at(0, c)), f7.mul(l1, m.at(1, c)));
    if (matrix_rank(m) != 2) continue;
    ++found;
    DenseMatrix adj = adjugate(m);
    CHECK(matrix_rank(adj) == 1);
    auto kern = corank1_kernel(m);
    // every nonzero adjugate column is proportional to the kernel
    for (int c = 0; c < 3; ++c) {
      std::vector<FieldElem> col{adj.at(0, c), adj.at(1, c), adj.at(2, c)};
      bool zero = f7.is_zero(col[0]) && f7.is_zero(col[1]) && f7.is_zero(col[2]);
      if (zero) continue;
      CHECK(normalize_projective(f7, col) == kern);
    }
  }
  CHECK(found >= 8);
}

TEST_CASE("kernel vector annihilates the matrix exactly") {
  Field f11 = Field::prime(11);
  Pcg64 rng(17);
  int found = 0;
  for (int t = 0; t < 100 && found < 10; ++t) {
    DenseMatrix m(f11, 3, 3);
    for (int c = 0; c < 3; ++c) {
      m.at(0, c) = random_elem(f11, rng);
      m.at(1, c) = random_elem(f11, rng);
      m.at(2, c) = f11.add(m.at(0, c), m.at(1, c));
    }
    if (matrix_rank(m) != 2) continue;
    ++found;
    auto v = corank1_kernel(m);
    for (const auto& val : m.mat_vec(v)) CHECK(f11.is_zero(val));
  }
  CHECK(found >= 5);
}

TEST_CASE("poly_det basics") {
  std::vector<int> slots{0, 1};
  // diag(x, y) with x = x0_0, y = x1_0 -> x*y
  auto x = MultiPoly::variable(slots, 2, 0, 0);
  auto y = MultiPoly::variable(slots, 2, 1, 0);
  auto zero_xy = MultiPoly::zero(slots, 2, {1, 0}) * MultiPoly::zero(slots, 2, {0, 1});
  std::vector<std::vector<MultiPoly>> m{{x, MultiPoly::zero(slots, 2, {1, 0})},
                                        {MultiPoly::zero(slots, 2, {0, 1}), y}};
  // pad degrees: off-diagonal zeros get the degree of their row/col products
  auto det = poly_det(m);
  CHECK(det == x * y);
  CHECK_FALSE(det.is_zero());
  CHECK(zero_xy.is_zero());

  // matrix of constants reduces to matrix_det
  Field q = Field::rationals();
  std::vector<std::vector<MultiPoly>> cm(2, std::vector<MultiPoly>(2, MultiPoly::constant(slots, 2, 0)));
  long long vals[2][2] = {{3, 5}, {2, 4}};
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) cm[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
        MultiPoly::constant(slots, 2, vals[r][c]);
  auto cdet = poly_det(cm);
  CHECK(cdet.term_count() == 1);
  CHECK(cdet.terms().begin()->second == Rat(2));
  CHECK(matrix_det(from_ints(q, 2, 2, {3, 5, 2, 4})) == q.from_int(2));
}

TEST_CASE("poly_det respects the term budget") {
  std::vector<int> slots{0, 1, 2};
  // dense 3x3 of trilinear forms blows past a tiny cap
  std::vector<std::vector<MultiPoly>> m(3, std::vector<MultiPoly>(3, MultiPoly::zero(slots, 3, {1, 1, 1})));
  for (auto& row : m)
    for (auto& p : row)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 3; ++c) {
            std::vector<std::uint8_t> e(9, 0);
            e[static_cast<std::size_t>(a)] = 1;
            e[static_cast<std::size_t>(3 + b)] = 1;
            e[static_cast<std::size_t>(6 + c)] = 1;
            p.add_term(e, 1 + a + b + c);
          }
  CHECK_THROWS_AS(poly_det(m, 50), SizeBudgetExceededError);
}

TEST_CASE("multipoly evaluation agrees with direct substitution") {
  std::vector<int> slots{1, 2};
  auto p = MultiPoly::variable(slots, 2, 1, 0) * MultiPoly::variable(slots, 2, 2, 1) +
           MultiPoly::variable(slots, 2, 1, 1) * MultiPoly::variable(slots, 2, 2, 0);
  Field f5 = Field::prime(5);
  std::map<int, std::vector<FieldElem>> coords{
      {1, {f5.from_int(2), f5.from_int(3)}},
      {2, {f5.from_int(1), f5.from_int(4)}},
  };
  // 2*4 + 3*1 = 11 = 1 mod 5
  CHECK(p.evaluate(f5, coords) == f5.from_int(1));
}

TEST_CASE("pcg64 stream is stable") {
  Pcg64 a(42), b(42);
  for (int i = 0; i < 16; ++i) CHECK(a.next() == b.next());
  Pcg64 c(42), d(43);
  bool differ = false;
  for (int i = 0; i < 4; ++i) differ = differ || (c.next() != d.next());
  CHECK(differ);
}
