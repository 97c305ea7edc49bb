#include "detflop/lattice.hpp"

#include <algorithm>
#include <set>

#include "detflop/rng.hpp"

namespace detflop {

long long intersection_number(const Instance& inst, int ell, const std::map<int, int>& exponents) {
  std::vector<int> factors = inst.model_factors(ell);
  long long total = 0;
  for (int f : factors) {
    auto it = exponents.find(f);
    int e = it == exponents.end() ? 0 : it->second;
    if (e < 0) throw DimensionMismatchError("negative exponent");
    total += e;
  }
  for (const auto& [slot, e] : exponents) {
    (void)e;
    if (std::find(factors.begin(), factors.end(), slot) == factors.end())
      throw SlotMismatchError("exponent on a non-factor slot");
  }
  if (total != inst.dim_x()) throw DimensionMismatchError("exponents must sum to dim X");

  // multinomial (n+1)! / prod (n - e_k)! over the complementary exponents
  long long remaining = inst.n + 1;
  long long result = 1;
  for (int f : factors) {
    auto it = exponents.find(f);
    int e = it == exponents.end() ? 0 : it->second;
    int a = inst.n - e;
    if (a < 0) return 0;  // H^(n+1) vanishes on P^n
    // choose(remaining, a) accumulated into the multinomial
    long long choose = 1;
    for (int t = 0; t < a; ++t)
      choose = mul_ck(choose, remaining - t) / (t + 1);
    result = mul_ck(result, choose);
    remaining -= a;
  }
  if (remaining != 0) return 0;
  return result;
}

ConeRP nef_cone(const Instance& inst, int ell) {
  std::vector<IVec> gens;
  for (int k = 0; k < inst.N; ++k) {
    IVec e(static_cast<std::size_t>(inst.N), 0);
    e[static_cast<std::size_t>(k)] = 1;
    gens.push_back(std::move(e));
  }
  (void)ell;  // every model's nef cone is the simplicial cone on its basis
  return cone_from_generators(inst.N, gens);
}

namespace {

int basis_pos(const std::vector<int>& basis, int slot) {
  auto it = std::find(basis.begin(), basis.end(), slot);
  if (it == basis.end()) throw SlotMismatchError("slot not in basis");
  return static_cast<int>(it - basis.begin());
}

PushforwardMatrix build_pushforward(const Instance& inst, int j, int i, const IVec& shared_coeffs,
                                    std::string provenance,
                                    std::vector<std::uint32_t> primes) {
  // shared_coeffs: coefficient of each shared class in the image of the
  // exchanged class, indexed in sorted shared order
  PushforwardMatrix P;
  P.j = j;
  P.i = i;
  P.src_basis = inst.model_factors(j);
  P.dst_basis = inst.model_factors(i);
  P.provenance = std::move(provenance);
  P.primes = std::move(primes);
  const int N = inst.N;
  P.m.assign(static_cast<std::size_t>(N), IVec(static_cast<std::size_t>(N), 0));
  std::vector<int> shared;
  for (int s = 0; s <= N; ++s)
    if (s != i && s != j) shared.push_back(s);
  for (int col = 0; col < N; ++col) {
    int src_class = P.src_basis[static_cast<std::size_t>(col)];
    if (src_class != i) {
      P.m[static_cast<std::size_t>(basis_pos(P.dst_basis, src_class))][static_cast<std::size_t>(col)] = 1;
    } else {
      P.m[static_cast<std::size_t>(basis_pos(P.dst_basis, j))][static_cast<std::size_t>(col)] = -1;
      for (std::size_t t = 0; t < shared.size(); ++t)
        P.m[static_cast<std::size_t>(basis_pos(P.dst_basis, shared[t]))][static_cast<std::size_t>(col)] =
            shared_coeffs[t];
    }
  }
  return P;
}

}  // namespace

PushforwardMatrix structural_pushforward(const Instance& inst, int j, int i) {
  if (j == i) throw SlotMismatchError("flop needs distinct models");
  std::size_t nshared = static_cast<std::size_t>(inst.N) - 1;
  IVec coeffs(nshared, inst.n);  // adjugate multidegree value, provisional
  return build_pushforward(inst, j, i, coeffs, "structural", {});
}

void verify_pushforward_pair(const Instance& inst, const PushforwardMatrix& mji,
                             const PushforwardMatrix& mij) {
  const int N = inst.N;
  long long det = imat_det(mji.m);
  if (det != 1 && det != -1) throw InconsistentFanError("pushforward is not unimodular");
  // identity on shared classes
  for (int col = 0; col < N; ++col) {
    int src_class = mji.src_basis[static_cast<std::size_t>(col)];
    if (src_class == mji.i) continue;
    for (int row = 0; row < N; ++row) {
      long long want = mji.dst_basis[static_cast<std::size_t>(row)] == src_class ? 1 : 0;
      if (mji.m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] != want)
        throw InconsistentFanError("pushforward moves a shared class");
    }
  }
  // involution: the reverse matrix must be the inverse
  IMat prod = imat_mul(mij.m, mji.m);
  if (prod != imat_identity(N)) throw InconsistentFanError("pushforward pair is not an involution");
  // forced coefficient at the exchanged slot
  int col_i = basis_pos(mji.src_basis, mji.i);
  int row_j = basis_pos(mji.dst_basis, mji.j);
  if (mji.m[static_cast<std::size_t>(row_j)][static_cast<std::size_t>(col_i)] != -1)
    throw InconsistentFanError("exchanged class misses the forced -1");
  // wall adjacency: the transported nef cone meets the target nef cone in
  // exactly the facet spanned by the shared classes
  ConeRP target = nef_cone(inst, mji.i);
  ConeRP image = apply_matrix(mji.m, nef_cone(inst, mji.j));
  ConeRP wall = cone_intersect(image, target);
  std::vector<IVec> shared_gens;
  for (int row = 0; row < N; ++row) {
    if (mji.dst_basis[static_cast<std::size_t>(row)] == mji.j) continue;
    IVec e(static_cast<std::size_t>(N), 0);
    e[static_cast<std::size_t>(row)] = 1;
    shared_gens.push_back(std::move(e));
  }
  ConeRP facet = cone_from_generators(N, shared_gens);
  if (!cone_equal(wall, facet) || wall.rank != N - 1)
    throw InconsistentFanError("transported nef cone misses the shared facet");
}

namespace {

// One tower count: geometric zeros (degree <= height) of lambda . s on the
// curve, where s(x) is the kernel column of the flop at x and points with a
// deeper rank drop are excluded as base points. Returns -1 when the tower
// arithmetic is inconsistent (non-reduced or hidden zeros).
long long tower_zero_count(const Instance& inst, int j, int i,
                           const std::map<int, std::vector<FieldElem>>& frozen_base,
                           const IVec& lambda, std::uint32_t p, int height, long long cap) {
  std::vector<long long> level_counts;  // N_k = #zeros over F_{p^k}
  for (int k = 1; k <= height; ++k) {
    Field F = k == 1 ? Field::prime(p) : Field::extension(p, static_cast<std::uint32_t>(k));
    std::map<int, std::vector<FieldElem>> frozen;
    for (const auto& [slot, vec] : frozen_base) {
      std::vector<FieldElem> lifted;
      for (const auto& e : vec) lifted.push_back(F.from_int(static_cast<long long>(e.c[0])));
      frozen[slot] = lifted;
    }
    long long count = 0;
    enumerate_model_points(inst, j, F, frozen, [&](const MultiProjPoint& pt) {
      std::map<int, std::vector<FieldElem>> shared;
      for (int s = 0; s <= inst.N; ++s)
        if (s != i && s != j) shared[s] = pt.coord(s);
      DenseMatrix M = slice_matrix(inst, i, j, F, shared);
      std::vector<FieldElem> kern;
      try {
        kern = corank1_kernel(M);
      } catch (const WrongRankError&) {
        return;  // base point of the moving system
      }
      FieldElem acc = F.zero();
      for (std::size_t t = 0; t < kern.size(); ++t)
        acc = F.add(acc, F.mul(F.from_int(lambda[t]), kern[t]));
      if (F.is_zero(acc)) ++count;
    });
    level_counts.push_back(count);
  }
  // closed points of degree e from N_k = sum_{e | k} e * a_e; the geometric
  // count (up to degree = height) is sum e * a_e
  std::vector<long long> a(static_cast<std::size_t>(height) + 1, 0);
  long long total = 0;
  for (int k = 1; k <= height; ++k) {
    long long rest = level_counts[static_cast<std::size_t>(k - 1)];
    for (int e = 1; e < k; ++e)
      if (k % e == 0) rest -= e * a[static_cast<std::size_t>(e)];
    if (rest < 0 || rest % k != 0) return -1;
    a[static_cast<std::size_t>(k)] = rest / k;
    total += rest;
  }
  if (total > cap) return -1;
  return total;
}

struct SliceSpec {
  std::vector<int> frozen_slots;
  std::map<int, std::vector<long long>> frozen_points;  // integer representatives
  std::map<int, int> degree_exponents;                  // exponent map of the slice monomial
};

}  // namespace

IVec degree_count_pullback(const Instance& inst, int j, int i, int target_slot,
                           const std::vector<std::uint32_t>& primes, int tower_height,
                           std::uint64_t seed) {
  if (inst.n != 1)
    throw CalibrationUnavailableError("degree oracle needs n = 1 models");
  if (j == i) throw SlotMismatchError("flop needs distinct models");
  std::vector<int> src_basis = inst.model_factors(j);
  if (std::find(src_basis.begin(), src_basis.end(), target_slot) == src_basis.end() &&
      target_slot != j)
    throw SlotMismatchError("target class not in the target basis");

  // shared target classes pull back identically
  if (target_slot != j) {
    if (target_slot == i) throw SlotMismatchError("target class not in the target basis");
    IVec cls(src_basis.size(), 0);
    cls[static_cast<std::size_t>(basis_pos(src_basis, target_slot))] = 1;
    return cls;
  }

  std::vector<int> shared;
  for (int s = 0; s <= inst.N; ++s)
    if (s != i && s != j) shared.push_back(s);
  const int dim = inst.dim_x();
  if (dim < 1)
    throw CalibrationUnavailableError("oracle needs a positive-dimensional model");
  const int slice_size = dim - 1;

  // candidate boxes for the shared coefficients
  std::vector<IVec> box;
  {
    IVec cur(shared.size(), 0);
    while (true) {
      box.push_back(cur);
      std::size_t t = 0;
      while (t < cur.size()) {
        if (++cur[t] <= inst.n) break;
        cur[t] = 0;
        ++t;
      }
      if (t == cur.size()) break;
    }
  }

  IVec agreed;
  bool have_agreed = false;
  for (std::uint32_t p : primes) {
    Field Fp = Field::prime(p);
    const std::uint64_t q = Fp.size();
    // slice index sets: all (dim-1)-subsets of the shared slots
    std::vector<std::vector<int>> slice_sets;
    {
      std::vector<int> pick(static_cast<std::size_t>(slice_size), 0);
      std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t at, std::size_t from) {
        if (at == pick.size()) {
          std::vector<int> s;
          for (std::size_t t = 0; t < pick.size(); ++t) s.push_back(shared[static_cast<std::size_t>(pick[t])]);
          slice_sets.push_back(s);
          return;
        }
        for (std::size_t f = from; f < shared.size(); ++f) {
          pick[at] = static_cast<int>(f);
          rec(at + 1, f + 1);
        }
      };
      if (slice_size == 0)
        slice_sets.push_back({});
      else
        rec(0, 0);
    }

    std::vector<IVec> survivors = box;
    Pcg64 rng(inst.seed ^ seed ^ (static_cast<std::uint64_t>(p) << 40) ^
                  (static_cast<std::uint64_t>(j) << 8) ^ static_cast<std::uint64_t>(i),
              kStreamOracle);
    for (const auto& sl : slice_sets) {
      // degrees of the basis classes on the slice curve
      std::map<int, int> slice_exp;
      for (int a : sl) slice_exp[a] = 1;
      auto curve_degree = [&](int k) {
        std::map<int, int> e = slice_exp;
        e[k] += 1;
        return intersection_number(inst, j, e);
      };
      long long d_exchanged = curve_degree(i);
      long long ub = -d_exchanged;
      for (int k : shared) ub += static_cast<long long>(inst.n) * curve_degree(k);

      // seeded slice points stay F_p-rational so every tower level lifts them
      bool slice_done = false;
      for (int redraw = 0; redraw < 8 && !slice_done; ++redraw) {
        std::map<int, std::vector<FieldElem>> frozen;
        for (int a : sl) {
          std::vector<FieldElem> v;
          for (int c = 0; c <= inst.n; ++c) v.push_back(Fp.elem_at(rng.bounded(q)));
          bool zero = std::all_of(v.begin(), v.end(),
                                  [&](const FieldElem& e) { return Fp.is_zero(e); });
          if (zero) v[0] = Fp.one();
          frozen[a] = normalize_projective(Fp, std::move(v));
        }
        // lambda pool: every F_p hyperplane section of the kernel coordinates
        long long best = -1;
        for (std::uint64_t li = 0; li < proj_point_count(Fp, inst.n); ++li) {
          auto lam = proj_point_at(Fp, inst.n, li);
          IVec lambda;
          for (const auto& e : lam) lambda.push_back(static_cast<long long>(e.c[0]));
          int height = std::min<long long>(tower_height, std::max<long long>(2, ub));
          long long cnt = tower_zero_count(inst, j, i, frozen, lambda, p, height, ub);
          best = std::max(best, cnt);
          if (best == ub) break;  // saturated the structural bound: exact
        }
        if (best < 0) continue;  // inconsistent tower; redraw the slice
        // keep the box candidates matching this slice's count equation
        std::vector<IVec> next;
        for (const auto& cand : survivors) {
          long long lhs = 0;
          for (std::size_t t = 0; t < shared.size(); ++t)
            lhs += cand[t] * curve_degree(shared[t]);
          if (lhs == best + d_exchanged) next.push_back(cand);
        }
        if (!next.empty()) {
          survivors = std::move(next);
          slice_done = true;
        }
        // empty survivor set: the count must have missed zeros; redraw
      }
      if (!slice_done)
        throw OracleInconclusiveError("no consistent count for a slice of pair (" +
                                      std::to_string(j) + "," + std::to_string(i) + ") at p = " +
                                      std::to_string(p));
    }
    if (survivors.size() != 1)
      throw OracleInconclusiveError("coefficients of pair (" + std::to_string(j) + "," +
                                    std::to_string(i) + ") undetermined at p = " +
                                    std::to_string(p) + " (" +
                                    std::to_string(survivors.size()) + " candidates)");
    if (have_agreed && survivors[0] != agreed)
      throw OracleInconclusiveError("primes disagree for pair (" + std::to_string(j) + "," +
                                    std::to_string(i) + ")");
    agreed = survivors[0];
    have_agreed = true;
  }
  if (!have_agreed) throw OracleInconclusiveError("no primes supplied");

  // assemble the pullback class: -H_i + sum e_k H_k in the source basis
  IVec cls(src_basis.size(), 0);
  cls[static_cast<std::size_t>(basis_pos(src_basis, i))] = -1;
  for (std::size_t t = 0; t < shared.size(); ++t)
    cls[static_cast<std::size_t>(basis_pos(src_basis, shared[t]))] = agreed[t];
  return cls;
}

PushforwardMatrix calibrated_pushforward(const Instance& inst, int j, int i,
                                         const std::vector<std::uint32_t>& primes,
                                         int tower_height) {
  // the pullback of the exchanged target class, counted on the source, gives
  // the shared coefficients; counting the reverse direction must agree
  IVec cls = degree_count_pullback(inst, j, i, j, primes, tower_height, 0);
  IVec cls_rev = degree_count_pullback(inst, i, j, i, primes, tower_height, 0);
  std::vector<int> shared;
  for (int s = 0; s <= inst.N; ++s)
    if (s != i && s != j) shared.push_back(s);
  std::vector<int> src = inst.model_factors(j);
  std::vector<int> src_rev = inst.model_factors(i);
  IVec coeffs, coeffs_rev;
  for (int k : shared) {
    coeffs.push_back(cls[static_cast<std::size_t>(basis_pos(src, k))]);
    coeffs_rev.push_back(cls_rev[static_cast<std::size_t>(basis_pos(src_rev, k))]);
  }
  if (coeffs != coeffs_rev)
    throw OracleInconclusiveError("forward and reverse counts disagree for pair (" +
                                  std::to_string(j) + "," + std::to_string(i) + ")");
  std::vector<std::uint32_t> used(primes.begin(), primes.end());
  PushforwardMatrix mji = build_pushforward(inst, j, i, coeffs, "oracle-calibrated", used);
  PushforwardMatrix mij = build_pushforward(inst, i, j, coeffs_rev, "oracle-calibrated", used);
  verify_pushforward_pair(inst, mji, mij);
  verify_pushforward_pair(inst, mij, mji);
  return mji;
}

PushforwardSet structural_pushforward_set(const Instance& inst) {
  PushforwardSet set;
  for (int j = 0; j <= inst.N; ++j)
    for (int i = 0; i <= inst.N; ++i) {
      if (i == j) continue;
      set[{j, i}] = structural_pushforward(inst, j, i);
    }
  for (int j = 0; j <= inst.N; ++j)
    for (int i = 0; i <= inst.N; ++i)
      if (i != j) verify_pushforward_pair(inst, set.at({j, i}), set.at({i, j}));
  return set;
}

PushforwardSet calibrated_pushforward_set(const Instance& inst,
                                          const std::vector<std::uint32_t>& primes,
                                          int tower_height) {
  PushforwardSet set;
  for (int j = 0; j <= inst.N; ++j)
    for (int i = j + 1; i <= inst.N; ++i) {
      PushforwardMatrix mji = calibrated_pushforward(inst, j, i, primes, tower_height);
      // the reverse matrix shares the counted coefficients
      std::vector<int> shared;
      for (int s = 0; s <= inst.N; ++s)
        if (s != i && s != j) shared.push_back(s);
      IVec coeffs;
      for (int k : shared)
        coeffs.push_back(
            mji.m[static_cast<std::size_t>(basis_pos(mji.dst_basis, k))]
                 [static_cast<std::size_t>(basis_pos(mji.src_basis, i))]);
      set[{j, i}] = mji;
      set[{i, j}] = build_pushforward(inst, i, j, coeffs, "oracle-calibrated", mji.primes);
    }
  for (int j = 0; j <= inst.N; ++j)
    for (int i = 0; i <= inst.N; ++i)
      if (i != j) verify_pushforward_pair(inst, set.at({j, i}), set.at({i, j}));
  return set;
}

}  // namespace detflop
