#include <doctest.h>

#include "detflop/flops.hpp"

using namespace detflop;

namespace {

MultiProjPoint diag_source(const Field& F) {
  // ([1:0], [0:1]) on X_0 of the diagonal N=2 instance
  return make_point(F, {1, 2}, {{F.one(), F.zero()}, {F.zero(), F.one()}});
}

// Tensor with the {0,1}-slice coefficients at (m2,m3)=(0,0) zeroed out: the
// base point x2=x3=[1:0] has a vanishing slice matrix, so the flop has an
// exceptional point there.
Instance exceptional_fixture() {
  Instance inst = random_instance(1, 3, 77, 9);
  for (int m0 = 0; m0 < 2; ++m0)
    for (int m1 = 0; m1 < 2; ++m1) {
      std::size_t flat = 0;
      for (int v : {m0, m1, 0, 0}) flat = flat * 2 + static_cast<std::size_t>(v);
      inst.tensor.entries[flat] = 0;
    }
  return inst;
}

}  // namespace

TEST_CASE("diagonal flop moves the closed-form point as computed by hand") {
  Instance d = diagonal_instance(1, 2);
  Field f3 = Field::prime(3);
  FlopMap phi01(d, 0, 1);
  MultiProjPoint src = diag_source(f3);

  MultiProjPoint img = apply_flop(phi01, src);
  CHECK(img.slots == std::vector<int>{0, 2});
  CHECK(img.coord(0) == std::vector<FieldElem>{f3.one(), f3.zero()});
  CHECK(img.coord(2) == std::vector<FieldElem>{f3.zero(), f3.one()});
  CHECK(on_model(d, 1, img));

  // round trip is the identity
  FlopMap phi10(d, 1, 0);
  MultiProjPoint back = apply_flop(phi10, img);
  CHECK(back.same_as(src));
}

TEST_CASE("projection to the base locus") {
  Instance d = diagonal_instance(1, 2);
  Field f3 = Field::prime(3);
  FlopMap phi01(d, 0, 1);
  MultiProjPoint base = project_to_base(phi01, diag_source(f3));
  CHECK(base.slots == std::vector<int>{2});
  CHECK(base.coord(2) == std::vector<FieldElem>{f3.zero(), f3.one()});

  MultiProjPoint off = make_point(f3, {1, 2}, {{f3.one(), f3.zero()}, {f3.one(), f3.zero()}});
  CHECK_THROWS_AS(project_to_base(phi01, off), NotOnVarietyError);
  CHECK_THROWS_AS(apply_flop(phi01, off), NotOnVarietyError);
}

TEST_CASE("exceptional points raise instead of answering") {
  Instance inst = exceptional_fixture();
  Field f3 = Field::prime(3);
  // x2 = x3 = [1:0]; the whole slice vanishes, so any x1 lies on X_0
  MultiProjPoint pt = make_point(
      f3, {1, 2, 3},
      {{f3.one(), f3.from_int(2)}, {f3.one(), f3.zero()}, {f3.one(), f3.zero()}});
  REQUIRE(on_model(inst, 0, pt));
  FlopMap phi01(inst, 0, 1);
  CHECK_THROWS_AS(apply_flop(phi01, pt), ExceptionalPointError);
}

TEST_CASE("transpose duality at the map level") {
  // the kernel solved from slice(i, j) coincides with the kernel of the
  // transposed slice(j, i), entry for entry
  Instance inst = random_instance(1, 3, 13, 9);
  Field f7 = Field::prime(7);
  Pcg64 rng(4);
  FlopMap phi(inst, 0, 2);
  for (int t = 0; t < 12; ++t) {
    MultiProjPoint src = sample_point(inst, 0, f7, rng);
    MultiProjPoint img = [&] {
      try {
        return apply_flop(phi, src);
      } catch (const ExceptionalPointError&) {
        return src;
      }
    }();
    if (img.same_as(src)) continue;
    std::map<int, std::vector<FieldElem>> shared;
    for (int s : phi.shared_factors()) shared[s] = src.coord(s);
    DenseMatrix direct = slice_matrix(inst, 2, 0, f7, shared);
    DenseMatrix via_transpose = slice_matrix(inst, 0, 2, f7, shared).transposed();
    CHECK(direct == via_transpose);
    CHECK(corank1_kernel(direct) == corank1_kernel(via_transpose));
    CHECK(corank1_kernel(direct) == img.coord(0));
  }
}

TEST_CASE("diagram check on full diagonal enumeration") {
  Instance d = diagonal_instance(1, 2);
  Field f3 = Field::prime(3);
  FlopMap phi01(d, 0, 1);
  auto pts = enumerate_points(d, 0, f3, 100);
  DiagramReport rep = check_diagram(phi01, pts);
  CHECK(rep.tested == 2);
  CHECK(rep.exceptional_skipped == 0);
  CHECK(rep.failures.empty());
}

TEST_CASE("diagram check catches a corrupted target side") {
  Instance inst = random_instance(1, 3, 19, 9);
  Instance corrupted = inst;
  corrupted.tensor.entries[0] += 1;
  Field f7 = Field::prime(7);
  Pcg64 rng(6);
  std::vector<MultiProjPoint> pts;
  for (int t = 0; t < 32; ++t) pts.push_back(sample_point(inst, 0, f7, rng));
  FlopMap phi01(inst, 0, 1);
  DiagramReport clean = check_diagram(phi01, pts);
  CHECK(clean.failures.empty());
  DiagramReport broken = check_diagram(phi01, pts, &corrupted);
  CHECK(!broken.failures.empty());
}

TEST_CASE("word composition") {
  Instance inst = random_instance(1, 3, 19, 9);
  Field f7 = Field::prime(7);
  Pcg64 rng(8);

  WordMap ident = compose_word(inst, {0});
  MultiProjPoint pt = sample_point(inst, 0, f7, rng);
  CHECK(ident.apply(pt).same_as(pt));

  // involution words act as the identity wherever defined
  for (int i = 1; i <= 3; ++i) {
    WordMap loop = compose_word(inst, {0, i, 0});
    for (int t = 0; t < 8; ++t) {
      MultiProjPoint p = sample_point(inst, 0, f7, rng);
      try {
        CHECK(loop.apply(p).same_as(p));
      } catch (const ExceptionalPointError&) {
      }
    }
  }

  CHECK_THROWS_AS(compose_word(inst, {0, 0}), SlotMismatchError);
  CHECK_THROWS_AS(compose_word(inst, {}), Error);
}

TEST_CASE("a loop word through two flops moves some point") {
  Instance inst = random_instance(1, 5, 42, 9);
  Field f7 = Field::prime(7);
  Pcg64 rng(11);
  WordMap loop = compose_word(inst, {0, 1, 2, 0});
  int moved = 0, tried = 0;
  for (int t = 0; t < 24 && moved == 0; ++t) {
    MultiProjPoint p = sample_point(inst, 0, f7, rng);
    try {
      MultiProjPoint q = loop.apply(p);
      ++tried;
      if (!q.same_as(p)) ++moved;
    } catch (const ExceptionalPointError&) {
    }
  }
  CHECK(tried > 0);
  CHECK(moved > 0);
}

TEST_CASE("involution across all pairs of a seeded instance") {
  Instance inst = random_instance(1, 3, 57, 9);
  Field f5 = Field::prime(5);
  Pcg64 rng(12);
  for (int j = 0; j <= 3; ++j)
    for (int i = 0; i <= 3; ++i) {
      if (i == j) continue;
      FlopMap fwd(inst, j, i), bwd(inst, i, j);
      for (int t = 0; t < 4; ++t) {
        MultiProjPoint p = sample_point(inst, j, f5, rng);
        try {
          CHECK(apply_flop(bwd, apply_flop(fwd, p)).same_as(p));
        } catch (const ExceptionalPointError&) {
        }
      }
    }
}
