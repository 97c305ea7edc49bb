#include <doctest.h>

#include "detflop/points.hpp"
#include "detflop/tensor.hpp"

using namespace detflop;

TEST_CASE("random instances are deterministic functions of their parameters") {
  Instance a = random_instance(1, 2, 0, 9);
  Instance b = random_instance(1, 2, 0, 9);
  CHECK(a.tensor.entries == b.tensor.entries);
  CHECK(a.tensor.entries.size() == 8);
  for (long long e : a.tensor.entries) {
    CHECK(e >= -9);
    CHECK(e <= 9);
  }
  Instance c = random_instance(1, 2, 1, 9);
  CHECK(a.tensor.entries != c.tensor.entries);
}

TEST_CASE("dimension formula") {
  CHECK(random_instance(1, 5, 42, 9).dim_x() == 3);
  CHECK(random_instance(2, 2, 7, 9).dim_x() == 1);
  CHECK(random_instance(1, 2, 0, 9).dim_x() == 0);
  CHECK(random_instance(1, 5, 42, 9).num_models() == 6);
  CHECK_THROWS_AS(random_instance(0, 2, 0, 9), Error);
  CHECK_THROWS_AS(random_instance(1, 1, 0, 9), Error);
}

TEST_CASE("diagonal tensor model equations") {
  Instance d = diagonal_instance(1, 2);
  auto eqs0 = model_equations(d, 0);
  REQUIRE(eqs0.size() == 2);
  std::vector<int> slots{1, 2};
  auto expect0 = MultiPoly::variable(slots, 2, 1, 0) * MultiPoly::variable(slots, 2, 2, 0);
  auto expect1 = MultiPoly::variable(slots, 2, 1, 1) * MultiPoly::variable(slots, 2, 2, 1);
  CHECK(eqs0[0] == expect0);
  CHECK(eqs0[1] == expect1);

  // symmetry of the diagonal tensor under relabeling
  auto eqs1 = model_equations(d, 1);
  std::vector<int> slots1{0, 2};
  CHECK(eqs1[0] == MultiPoly::variable(slots1, 2, 0, 0) * MultiPoly::variable(slots1, 2, 2, 0));
  CHECK(eqs1[1] == MultiPoly::variable(slots1, 2, 0, 1) * MultiPoly::variable(slots1, 2, 2, 1));
}

TEST_CASE("zero tensor is degenerate") {
  Instance z = diagonal_instance(1, 2);
  std::fill(z.tensor.entries.begin(), z.tensor.entries.end(), 0);
  CHECK(is_degenerate(z));
  for (const auto& eq : model_equations(z, 0)) CHECK(eq.is_zero());
  CHECK_FALSE(is_degenerate(diagonal_instance(1, 2)));
  CHECK_FALSE(is_degenerate(random_instance(1, 3, 11, 9)));
}

TEST_CASE("diagonal slice matrices") {
  Instance d = diagonal_instance(1, 2);
  Field q = Field::rationals();
  std::map<int, std::vector<FieldElem>> coords{{2, {q.one(), q.one()}}};
  DenseMatrix m = slice_matrix(d, 0, 1, q, coords);
  CHECK(m.at(0, 0) == q.one());
  CHECK(m.at(1, 1) == q.one());
  CHECK(q.is_zero(m.at(0, 1)));
  CHECK(q.is_zero(m.at(1, 0)));

  std::map<int, std::vector<FieldElem>> coords2{{2, {q.zero(), q.one()}}};
  DenseMatrix m2 = slice_matrix(d, 0, 1, q, coords2);
  CHECK(q.is_zero(m2.at(0, 0)));
  CHECK(m2.at(1, 1) == q.one());
  CHECK(matrix_rank(m2) == 1);

  CHECK_THROWS_AS(slice_matrix(d, 0, 0, q, coords), SlotMismatchError);
  std::map<int, std::vector<FieldElem>> bad{{1, {q.one(), q.one()}}};
  CHECK_THROWS_AS(slice_matrix(d, 0, 1, q, bad), SlotMismatchError);
}

TEST_CASE("transpose duality of slices") {
  Pcg64 rng(314);
  std::vector<Field> fields{Field::prime(5), Field::prime(7), Field::rationals()};
  for (int t = 0; t < 12; ++t) {
    int n = 1 + static_cast<int>(rng.bounded(2));
    int N = 2 + static_cast<int>(rng.bounded(3));
    Instance inst = random_instance(n, N, rng.next(), 9);
    const Field& F = fields[t % fields.size()];
    for (int j = 0; j <= N; ++j)
      for (int i = 0; i <= N; ++i) {
        if (i == j) continue;
        std::map<int, std::vector<FieldElem>> coords;
        for (int s = 0; s <= N; ++s) {
          if (s == i || s == j) continue;
          std::vector<FieldElem> v;
          for (int c = 0; c <= n; ++c)
            v.push_back(F.is_rationals() ? F.from_int(static_cast<long long>(rng.bounded(19)) - 9)
                                         : F.elem_at(rng.bounded(F.size())));
          coords[s] = v;
        }
        CHECK(slice_matrix(inst, j, i, F, coords) ==
              slice_matrix(inst, i, j, F, coords).transposed());
      }
  }
}

TEST_CASE("determinant form of the diagonal pair") {
  Instance d = diagonal_instance(1, 2);
  BaseLocusSpec spec = determinant_form(d, 0, 1);
  std::vector<int> slots{2};
  auto expect = MultiPoly::variable(slots, 2, 2, 0) * MultiPoly::variable(slots, 2, 2, 1);
  CHECK(spec.defining_form == expect);
  CHECK(spec.factors == std::vector<int>{2});
  CHECK(spec.defining_form.multidegree() == std::vector<int>{2});
  CHECK_FALSE(spec.degenerate);

  // pair-order independence
  CHECK(determinant_form(d, 1, 0).defining_form == spec.defining_form);

  Instance z = d;
  std::fill(z.tensor.entries.begin(), z.tensor.entries.end(), 0);
  CHECK(determinant_form(z, 0, 1).degenerate);
}

TEST_CASE("determinant form is pair-order independent on random instances") {
  Pcg64 rng(2718);
  for (int t = 0; t < 6; ++t) {
    Instance inst = random_instance(1, 3, rng.next(), 9);
    for (int j = 0; j <= 3; ++j)
      for (int i = j + 1; i <= 3; ++i)
        CHECK(determinant_form(inst, j, i).defining_form ==
              determinant_form(inst, i, j).defining_form);
  }
}

TEST_CASE("determinant form multidegree is (n+1,...,n+1)") {
  Instance inst = random_instance(1, 5, 42, 9);
  BaseLocusSpec spec = determinant_form(inst, 0, 1);
  CHECK(spec.defining_form.multidegree() == std::vector<int>{2, 2, 2, 2});
  Instance inst2 = random_instance(2, 2, 7, 9);
  CHECK(determinant_form(inst2, 0, 2).defining_form.multidegree() == std::vector<int>{3});
}

TEST_CASE("symbolic determinant evaluates like the numeric slice determinant") {
  // full-grid identity test: per-variable grid size exceeds the degree bound
  Instance inst = random_instance(1, 3, 5, 9);
  BaseLocusSpec spec = determinant_form(inst, 0, 2);
  Field q = Field::rationals();
  std::vector<int> rest = spec.factors;  // {1, 3}
  for (long long a = 0; a <= 2; ++a)
    for (long long b = 0; b <= 2; ++b)
      for (long long c = 0; c <= 2; ++c)
        for (long long d = 0; d <= 2; ++d) {
          std::map<int, std::vector<FieldElem>> coords{
              {rest[0], {q.from_int(a), q.from_int(b)}},
              {rest[1], {q.from_int(c), q.from_int(d)}},
          };
          FieldElem direct = matrix_det(slice_matrix(inst, 0, 2, q, coords));
          CHECK(spec.defining_form.evaluate(q, coords) == direct);
        }
}

TEST_CASE("point membership is slice-kernel annihilation") {
  Instance inst = random_instance(1, 3, 23, 9);
  Field f3 = Field::prime(3);
  auto pts = enumerate_points(inst, 0, f3, 1 << 20);
  for (const auto& pt : pts) {
    for (int i = 1; i <= 3; ++i) {
      std::map<int, std::vector<FieldElem>> others;
      for (int s = 1; s <= 3; ++s)
        if (s != i) others[s] = pt.coord(s);
      DenseMatrix m = slice_matrix(inst, 0, i, f3, others);
      for (const auto& v : m.mat_vec(pt.coord(i))) CHECK(f3.is_zero(v));
    }
  }
}
