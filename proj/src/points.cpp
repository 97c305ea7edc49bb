#include "detflop/points.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace detflop {

namespace {

using u128 = unsigned __int128;

std::uint64_t clamp_u128(u128 v) {
  const u128 cap = static_cast<u128>(~0ULL);
  return v > cap ? ~0ULL : static_cast<std::uint64_t>(v);
}

u128 ambient_count_u128(const Field& F, int n, int factors) {
  u128 per = static_cast<u128>(proj_point_count(F, n));
  u128 total = 1;
  for (int i = 0; i < factors; ++i) total *= per;
  return total;
}

}  // namespace

const std::vector<FieldElem>& MultiProjPoint::coord(int slot) const {
  auto it = std::find(slots.begin(), slots.end(), slot);
  if (it == slots.end()) throw SlotMismatchError("point has no slot " + std::to_string(slot));
  return coords[static_cast<std::size_t>(it - slots.begin())];
}

std::map<int, std::vector<FieldElem>> MultiProjPoint::coord_map() const {
  std::map<int, std::vector<FieldElem>> m;
  for (std::size_t i = 0; i < slots.size(); ++i) m[slots[i]] = coords[i];
  return m;
}

std::string MultiProjPoint::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    os << "x" << slots[i] << "=[";
    for (std::size_t v = 0; v < coords[i].size(); ++v) {
      if (v) os << ":";
      os << F.to_string(coords[i][v]);
    }
    os << "]";
    if (i + 1 < slots.size()) os << " ";
  }
  return os.str();
}

MultiProjPoint make_point(const Field& F, const std::vector<int>& slots,
                          std::vector<std::vector<FieldElem>> coords) {
  if (slots.size() != coords.size()) throw SlotMismatchError("point slot/coord arity");
  MultiProjPoint pt;
  pt.F = F;
  pt.slots = slots;
  pt.coords.reserve(coords.size());
  for (auto& c : coords) pt.coords.push_back(normalize_projective(F, std::move(c)));
  return pt;
}

std::uint64_t proj_point_count(const Field& F, int n) {
  std::uint64_t q = F.size();
  if (q == 0) throw Error("cannot enumerate projective space over the rationals");
  u128 total = 0;
  u128 block = 1;
  for (int t = 0; t <= n; ++t) {
    total += block;
    block *= q;
  }
  return clamp_u128(total);
}

std::vector<FieldElem> proj_point_at(const Field& F, int n, std::uint64_t idx) {
  const std::uint64_t q = F.size();
  // pivot t descending: (0,...,0,1,suffix), suffix lexicographic with the
  // coordinate right after the pivot most significant
  std::uint64_t block = 1;
  for (int t = n; t >= 0; --t) {
    if (idx < block) {
      std::vector<FieldElem> v(static_cast<std::size_t>(n + 1), F.zero());
      v[static_cast<std::size_t>(t)] = F.one();
      std::uint64_t rest = idx;
      for (int c = n; c > t; --c) {
        v[static_cast<std::size_t>(c)] = F.elem_at(rest % q);
        rest /= q;
      }
      return v;
    }
    idx -= block;
    block *= q;
  }
  throw Error("projective point index out of range");
}

bool on_model(const Instance& inst, int ell, const MultiProjPoint& pt) {
  auto vals = model_equation_values(inst, ell, pt.F, pt.coord_map());
  for (const auto& v : vals)
    if (!pt.F.is_zero(v)) return false;
  return true;
}

std::vector<MultiProjPoint> enumerate_points(const Instance& inst, int ell, const Field& F,
                                             std::uint64_t budget) {
  std::vector<int> factors = inst.model_factors(ell);
  u128 total = ambient_count_u128(F, inst.n, static_cast<int>(factors.size()));
  if (total > static_cast<u128>(budget)) throw BudgetExceededError(clamp_u128(total));

  const std::uint64_t per = proj_point_count(F, inst.n);
  FieldTensor base = FieldTensor::from_instance(inst, F);
  std::vector<MultiProjPoint> out;
  std::vector<std::uint64_t> odo(factors.size(), 0);
  while (true) {
    std::vector<std::vector<FieldElem>> coords;
    coords.reserve(factors.size());
    for (std::size_t f = 0; f < factors.size(); ++f)
      coords.push_back(proj_point_at(F, inst.n, odo[f]));
    FieldTensor t = base;
    for (std::size_t f = 0; f < factors.size(); ++f) t = t.contract(factors[f], coords[f]);
    bool zero = true;
    for (const auto& v : t.as_vector(ell))
      if (!F.is_zero(v)) {
        zero = false;
        break;
      }
    if (zero) out.push_back(make_point(F, factors, std::move(coords)));
    // odometer, last factor fastest
    std::size_t f = factors.size();
    while (f > 0) {
      --f;
      if (++odo[f] < per) break;
      odo[f] = 0;
      if (f == 0) return out;
    }
  }
}

void enumerate_model_points(const Instance& inst, int ell, const Field& F,
                            const std::map<int, std::vector<FieldElem>>& frozen,
                            const std::function<void(const MultiProjPoint&)>& cb) {
  std::vector<int> factors = inst.model_factors(ell);
  std::vector<int> free;
  for (int f : factors)
    if (!frozen.count(f)) free.push_back(f);
  if (free.empty()) throw SlotMismatchError("no free factor to enumerate");
  int pivot = free.back();
  std::vector<int> scan(free.begin(), free.end() - 1);

  FieldTensor base = FieldTensor::from_instance(inst, F);
  for (const auto& [slot, vec] : frozen) base = base.contract(slot, vec);

  const std::uint64_t per = proj_point_count(F, inst.n);
  std::vector<std::uint64_t> odo(scan.size(), 0);
  while (true) {
    std::vector<std::vector<FieldElem>> scan_coords;
    scan_coords.reserve(scan.size());
    FieldTensor t = base;
    for (std::size_t f = 0; f < scan.size(); ++f) {
      scan_coords.push_back(proj_point_at(F, inst.n, odo[f]));
      t = t.contract(scan[f], scan_coords.back());
    }
    DenseMatrix M = t.as_matrix(ell, pivot);
    auto kernel = nullspace_basis(M);
    if (!kernel.empty()) {
      // kernel directions = pivot coordinates of model points over this tuple
      std::uint64_t kcount = proj_point_count(F, static_cast<int>(kernel.size()) - 1);
      for (std::uint64_t kidx = 0; kidx < kcount; ++kidx) {
        std::vector<FieldElem> mix = proj_point_at(F, static_cast<int>(kernel.size()) - 1, kidx);
        std::vector<FieldElem> pv(static_cast<std::size_t>(inst.n + 1), F.zero());
        for (std::size_t b = 0; b < kernel.size(); ++b)
          for (std::size_t c = 0; c < pv.size(); ++c)
            pv[c] = F.add(pv[c], F.mul(mix[b], kernel[b][c]));
        std::vector<std::vector<FieldElem>> coords;
        for (int f : factors) {
          if (f == pivot) {
            coords.push_back(pv);
          } else if (frozen.count(f)) {
            coords.push_back(frozen.at(f));
          } else {
            std::size_t si = static_cast<std::size_t>(
                std::find(scan.begin(), scan.end(), f) - scan.begin());
            coords.push_back(scan_coords[si]);
          }
        }
        cb(make_point(F, factors, std::move(coords)));
      }
    }
    if (scan.empty()) return;
    std::size_t f = scan.size();
    while (f > 0) {
      --f;
      if (++odo[f] < per) break;
      odo[f] = 0;
      if (f == 0) return;
    }
  }
}

namespace {

// Cache of subfield-embedding roots keyed by (sub spec, super spec).
FieldElem embedding_cached(const Field& sup, const Field& sub, const FieldElem& a) {
  return sup.embed(sub, a);
}

std::vector<FieldElem> embed_vec(const Field& sup, const Field& sub,
                                 const std::vector<FieldElem>& v) {
  std::vector<FieldElem> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(embedding_cached(sup, sub, e));
  return out;
}

std::vector<FieldElem> random_vector(const Field& F, int len, Pcg64& rng) {
  const std::uint64_t q = F.size();
  std::vector<FieldElem> v(static_cast<std::size_t>(len));
  for (auto& e : v) e = F.elem_at(rng.bounded(q));
  return v;
}

bool all_zero(const Field& F, const std::vector<FieldElem>& v) {
  return std::all_of(v.begin(), v.end(), [&](const FieldElem& e) { return F.is_zero(e); });
}

}  // namespace

MultiProjPoint sample_point(const Instance& inst, int ell, const Field& F, Pcg64& rng,
                            int retries) {
  if (is_degenerate(inst)) throw SampleFailureError("degenerate instance");
  if (F.is_rationals()) throw SampleFailureError("sampling needs a finite field");
  std::vector<int> factors = inst.model_factors(ell);
  if (factors.size() < 2) throw SampleFailureError("model needs at least two factors");
  const std::uint64_t q = F.size();

  for (int attempt = 0; attempt < retries; ++attempt) {
    // Pivot factor cycles deterministically with the attempt counter.
    int pivot = factors[static_cast<std::size_t>(attempt) % factors.size()];
    int line_factor = factors[(static_cast<std::size_t>(attempt) + 1) % factors.size()];

    std::map<int, std::vector<FieldElem>> fixed;
    bool bad = false;
    for (int f : factors) {
      if (f == pivot || f == line_factor) continue;
      auto v = random_vector(F, inst.n + 1, rng);
      if (all_zero(F, v)) {
        bad = true;
        break;
      }
      fixed[f] = v;
    }
    if (bad) continue;
    std::vector<FieldElem> u = random_vector(F, inst.n + 1, rng);
    std::vector<FieldElem> w = random_vector(F, inst.n + 1, rng);

    FieldTensor base = FieldTensor::from_instance(inst, F);
    for (const auto& [slot, vec] : fixed) base = base.contract(slot, vec);

    auto det_at = [&](const Field& FF, const FieldTensor& bb, const std::vector<FieldElem>& uu,
                      const std::vector<FieldElem>& ww, const FieldElem& s) {
      std::vector<FieldElem> line(uu.size());
      for (std::size_t c = 0; c < uu.size(); ++c) line[c] = FF.add(uu[c], FF.mul(s, ww[c]));
      FieldTensor t = bb.contract(line_factor, line);
      return std::make_pair(matrix_det(t.as_matrix(ell, pivot)), line);
    };

    // Root of the restricted determinant over F_q, then over F_{q^2}.
    std::optional<std::vector<FieldElem>> found_line;
    Field field_used = F;
    FieldTensor tensor_used = base;
    std::map<int, std::vector<FieldElem>> fixed_used = fixed;
    for (std::uint64_t si = 0; si < q && !found_line; ++si) {
      auto [d, line] = det_at(F, base, u, w, F.elem_at(si));
      if (F.is_zero(d) && !all_zero(F, line)) found_line = line;
    }
    if (!found_line) {
      // escalate to the quadratic extension when it stays enumerable
      u128 q2 = static_cast<u128>(q) * q;
      if (q2 <= 1000000) {
        Field F2 = Field::extension(F.p(), 2 * F.k());
        auto u2 = embed_vec(F2, F, u);
        auto w2 = embed_vec(F2, F, w);
        FieldTensor base2 = FieldTensor::from_instance(inst, F2);
        std::map<int, std::vector<FieldElem>> fixed2;
        for (const auto& [slot, vec] : fixed) fixed2[slot] = embed_vec(F2, F, vec);
        for (const auto& [slot, vec] : fixed2) base2 = base2.contract(slot, vec);
        for (std::uint64_t si = 0; si < static_cast<std::uint64_t>(q2) && !found_line; ++si) {
          auto [d, line] = det_at(F2, base2, u2, w2, F2.elem_at(si));
          if (F2.is_zero(d) && !all_zero(F2, line)) found_line = line;
        }
        if (found_line) {
          field_used = F2;
          tensor_used = base2;
          fixed_used = fixed2;
        }
      }
    }
    if (!found_line) continue;

    FieldTensor t = tensor_used.contract(line_factor, *found_line);
    DenseMatrix M = t.as_matrix(ell, pivot);
    std::vector<FieldElem> pv;
    try {
      pv = corank1_kernel(M);
    } catch (const WrongRankError&) {
      continue;  // exceptional tuple; redraw
    }
    std::vector<std::vector<FieldElem>> coords;
    for (int f : factors) {
      if (f == pivot)
        coords.push_back(pv);
      else if (f == line_factor)
        coords.push_back(*found_line);
      else
        coords.push_back(fixed_used.at(f));
    }
    MultiProjPoint pt = make_point(field_used, factors, std::move(coords));
    if (!on_model(inst, ell, pt)) throw Error("internal: sampled point fails the equations");
    return pt;
  }
  throw SampleFailureError("retry budget exhausted for model " + std::to_string(ell));
}

int jacobian_rank(const Instance& inst, int ell, const MultiProjPoint& pt,
                  const std::map<int, int>& charts) {
  if (!on_model(inst, ell, pt)) throw NotOnVarietyError("jacobian at off-model point");
  const Field& F = pt.F;
  std::vector<int> factors = inst.model_factors(ell);

  // Rescale the representative so the chart coordinate is 1 per factor.
  std::vector<std::vector<FieldElem>> scaled = pt.coords;
  std::vector<int> chart_pos(factors.size(), 0);
  for (std::size_t f = 0; f < factors.size(); ++f) {
    int pos = -1;
    if (auto it = charts.find(factors[f]); it != charts.end()) {
      pos = it->second;
      if (pos < 0 || pos > inst.n || F.is_zero(scaled[f][static_cast<std::size_t>(pos)]))
        throw Error("chart coordinate vanishes at the point");
      FieldElem s = F.inv(scaled[f][static_cast<std::size_t>(pos)]);
      for (auto& c : scaled[f]) c = F.mul(c, s);
    } else {
      for (int v = 0; v <= inst.n; ++v)
        if (!F.is_zero(scaled[f][static_cast<std::size_t>(v)])) {
          pos = v;
          break;
        }
    }
    chart_pos[f] = pos;
  }

  std::map<int, std::vector<FieldElem>> cmap;
  for (std::size_t f = 0; f < factors.size(); ++f) cmap[factors[f]] = scaled[f];

  // Jacobian block for factor s is the slice matrix contracted with all other
  // factors; multilinearity makes this exact. Chart columns are dropped.
  DenseMatrix J(F, inst.n + 1, static_cast<int>(factors.size()) * inst.n);
  int col = 0;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    std::map<int, std::vector<FieldElem>> others;
    for (const auto& [slot, vec] : cmap)
      if (slot != factors[f]) others[slot] = vec;
    DenseMatrix block = slice_matrix(inst, ell, factors[f], F, others);
    for (int c = 0; c <= inst.n; ++c) {
      if (c == chart_pos[f]) continue;
      for (int r = 0; r <= inst.n; ++r) J.at(r, col) = block.at(r, c);
      ++col;
    }
  }
  return matrix_rank(J);
}

SmoothnessReport smoothness_scan(const Instance& inst, int ell, const std::vector<Field>& fields,
                                 std::uint64_t budget, int samples, int threads) {
  SmoothnessReport rep;
  rep.model = ell;
  for (const auto& F : fields) rep.fields.push_back(F.spec());
  if (is_degenerate(inst)) {
    rep.verdict = "degenerate";
    return rep;
  }
  std::vector<int> factors = inst.model_factors(ell);
  for (const auto& F : fields) {
    u128 total = ambient_count_u128(F, inst.n, static_cast<int>(factors.size()));
    if (total <= static_cast<u128>(budget)) {
      // Full enumeration, partitioned into disjoint scan ranges per thread
      // and merged in range order.
      const std::uint64_t per = proj_point_count(F, inst.n);
      std::uint64_t amb = clamp_u128(total);
      int nthreads = std::max(1, std::min<int>(threads, 8));
      std::vector<std::vector<MultiProjPoint>> wit(static_cast<std::size_t>(nthreads));
      std::vector<std::uint64_t> cnt(static_cast<std::size_t>(nthreads), 0);
      auto work = [&](int tid) {
        std::uint64_t lo = amb * static_cast<std::uint64_t>(tid) / static_cast<std::uint64_t>(nthreads);
        std::uint64_t hi = amb * static_cast<std::uint64_t>(tid + 1) / static_cast<std::uint64_t>(nthreads);
        FieldTensor base = FieldTensor::from_instance(inst, F);
        for (std::uint64_t a = lo; a < hi; ++a) {
          std::uint64_t rest = a;
          std::vector<std::vector<FieldElem>> coords(factors.size());
          for (std::size_t f = factors.size(); f-- > 0;) {
            coords[f] = proj_point_at(F, inst.n, rest % per);
            rest /= per;
          }
          FieldTensor t = base;
          for (std::size_t f = 0; f < factors.size(); ++f) t = t.contract(factors[f], coords[f]);
          bool zero = true;
          for (const auto& v : t.as_vector(ell))
            if (!F.is_zero(v)) {
              zero = false;
              break;
            }
          if (!zero) continue;
          MultiProjPoint pt = make_point(F, factors, coords);
          ++cnt[static_cast<std::size_t>(tid)];
          if (jacobian_rank(inst, ell, pt) < inst.n + 1)
            wit[static_cast<std::size_t>(tid)].push_back(pt);
        }
      };
      if (nthreads == 1) {
        work(0);
      } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
      }
      for (int t = 0; t < nthreads; ++t) {
        rep.tested += cnt[static_cast<std::size_t>(t)];
        for (auto& w : wit[static_cast<std::size_t>(t)]) rep.witnesses.push_back(std::move(w));
      }
    } else {
      Pcg64 rng(inst.seed ^ (static_cast<std::uint64_t>(ell) << 32), kStreamSampling);
      for (int s = 0; s < samples; ++s) {
        try {
          MultiProjPoint pt = sample_point(inst, ell, F, rng);
          ++rep.tested;
          if (jacobian_rank(inst, ell, pt) < inst.n + 1) rep.witnesses.push_back(pt);
        } catch (const SampleFailureError&) {
          break;  // too-small field; the report just shows fewer tested points
        }
      }
    }
  }
  rep.verdict = rep.witnesses.empty() ? "no-singular-point-found" : "singular-witness";
  return rep;
}

namespace {

// Quadratic-solve helper for the n = 1 rank-locus fast path: common
// projective zeros over P^1 x P^1 of the four bilinear entry forms, given the
// 2x2 coefficient matrices C[r] of the forms u^T C[r] v.
void bilinear_common_zeros(const Field& F, const std::vector<DenseMatrix>& C,
                           const std::function<void(const std::vector<FieldElem>&,
                                                    const std::vector<FieldElem>&)>& cb) {
  // With u fixed, the forms become the rows of a 4x2 matrix S(u); a common v
  // exists iff rank S(u) <= 1, i.e. all 6 pairwise 2x2 minors vanish. Each
  // minor is a binary quadratic in u.
  struct Quad {
    FieldElem a, b, c;  // a u0^2 + b u0 u1 + c u1^2
  };
  std::vector<Quad> quads;
  auto s_entry = [&](std::size_t r, int vcol) {
    // coefficient pair of s_r(u)[vcol] = u0*C[r](0,vcol) + u1*C[r](1,vcol)
    return std::make_pair(C[r].at(0, vcol), C[r].at(1, vcol));
  };
  for (std::size_t r1 = 0; r1 < C.size(); ++r1)
    for (std::size_t r2 = r1 + 1; r2 < C.size(); ++r2) {
      auto [a0, b0] = s_entry(r1, 0);
      auto [a1, b1] = s_entry(r1, 1);
      auto [c0, d0] = s_entry(r2, 0);
      auto [c1, d1] = s_entry(r2, 1);
      // minor = s1[0]*s2[1] - s1[1]*s2[0], expanded in u0, u1
      Quad qd;
      qd.a = F.sub(F.mul(a0, c1), F.mul(a1, c0));
      qd.b = F.sub(F.add(F.mul(a0, d1), F.mul(b0, c1)), F.add(F.mul(a1, d0), F.mul(b1, c0)));
      qd.c = F.sub(F.mul(b0, d1), F.mul(b1, d0));
      quads.push_back(qd);
    }

  auto try_u = [&](const std::vector<FieldElem>& u) {
    // rows of S(u)
    std::vector<std::pair<FieldElem, FieldElem>> rows;
    for (std::size_t r = 0; r < C.size(); ++r) {
      FieldElem s0 = F.add(F.mul(u[0], C[r].at(0, 0)), F.mul(u[1], C[r].at(1, 0)));
      FieldElem s1 = F.add(F.mul(u[0], C[r].at(0, 1)), F.mul(u[1], C[r].at(1, 1)));
      rows.emplace_back(s0, s1);
    }
    std::vector<FieldElem> v;
    bool any_nonzero = false;
    for (auto& [s0, s1] : rows) {
      if (F.is_zero(s0) && F.is_zero(s1)) continue;
      any_nonzero = true;
      std::vector<FieldElem> cand{F.neg(s1), s0};
      // candidate must kill every row
      bool ok = true;
      for (auto& [t0, t1] : rows)
        if (!F.is_zero(F.add(F.mul(t0, cand[0]), F.mul(t1, cand[1])))) {
          ok = false;
          break;
        }
      if (ok) v = cand;
      break;
    }
    if (!any_nonzero) {
      // whole pencil vanishes at u: every v works
      std::uint64_t pc = proj_point_count(F, 1);
      for (std::uint64_t i = 0; i < pc; ++i) cb(u, proj_point_at(F, 1, i));
      return;
    }
    if (!v.empty()) cb(u, v);
  };

  auto eval_quad = [&](const Quad& qd, const FieldElem& u0, const FieldElem& u1) {
    return F.add(F.add(F.mul(qd.a, F.mul(u0, u0)), F.mul(qd.b, F.mul(u0, u1))),
                 F.mul(qd.c, F.mul(u1, u1)));
  };

  // u = (0,1)
  {
    std::vector<FieldElem> u{F.zero(), F.one()};
    bool zero = true;
    for (const auto& qd : quads)
      if (!F.is_zero(eval_quad(qd, u[0], u[1]))) {
        zero = false;
        break;
      }
    if (zero) try_u(u);
  }
  // u = (1,t): solve the gcd of the dehomogenized quadratics a + b t + c t^2
  // (a at u0^2). Degrees <= 2, so roots come from linear/quadratic formulas.
  {
    std::vector<std::vector<FieldElem>> polys;  // coefficients c0 + c1 t + c2 t^2
    bool all_zero_polys = true;
    for (const auto& qd : quads) {
      std::vector<FieldElem> p{qd.a, qd.b, qd.c};
      while (!p.empty() && F.is_zero(p.back())) p.pop_back();
      if (!p.empty()) {
        polys.push_back(p);
        all_zero_polys = false;
      }
    }
    auto roots_of = [&](const std::vector<FieldElem>& p) {
      std::vector<FieldElem> roots;
      if (p.size() == 2) {
        roots.push_back(F.neg(F.div(p[0], p[1])));
      } else if (p.size() == 3) {
        // t = (-b ± sqrt(b^2 - 4ac)) / 2a
        FieldElem a = p[2], b = p[1], c = p[0];
        FieldElem disc = F.sub(F.mul(b, b), F.mul(F.from_int(4), F.mul(a, c)));
        auto sq = field_sqrt(F, disc);
        if (sq) {
          FieldElem inv2a = F.inv(F.mul(F.from_int(2), a));
          roots.push_back(F.mul(F.sub(*sq, b), inv2a));
          if (!F.is_zero(*sq)) roots.push_back(F.mul(F.sub(F.neg(*sq), b), inv2a));
        }
      }
      return roots;
    };
    if (all_zero_polys) {
      // every u on the affine chart satisfies the rank condition
      const std::uint64_t q = F.size();
      for (std::uint64_t i = 0; i < q; ++i) try_u({F.one(), F.elem_at(i)});
    } else {
      // candidate roots from the lowest-degree polynomial, checked against all
      std::size_t best = 0;
      for (std::size_t i = 1; i < polys.size(); ++i)
        if (polys[i].size() < polys[best].size()) best = i;
      for (const auto& t : roots_of(polys[best])) {
        bool ok = true;
        for (const auto& p : polys) {
          FieldElem acc = F.zero();
          FieldElem tp = F.one();
          for (const auto& coef : p) {
            acc = F.add(acc, F.mul(coef, tp));
            tp = F.mul(tp, t);
          }
          if (!F.is_zero(acc)) {
            ok = false;
            break;
          }
        }
        if (ok) try_u({F.one(), t});
      }
    }
  }
}

}  // namespace

std::optional<FieldElem> field_sqrt(const Field& F, const FieldElem& a) {
  if (F.is_rationals()) throw Error("field_sqrt needs a finite field");
  const std::uint64_t q = F.size();
  if (q % 2 == 0) throw Error("characteristic 2 unsupported");
  if (F.is_zero(a)) return F.zero();
  // Euler criterion
  FieldElem leg = F.pow(a, (q - 1) / 2);
  if (!(leg == F.one())) return std::nullopt;
  if (q % 4 == 3) return F.pow(a, (q + 1) / 4);
  // Tonelli-Shanks; the nonresidue is the smallest-index one.
  std::uint64_t s = 0;
  std::uint64_t qq = q - 1;
  while (qq % 2 == 0) {
    qq /= 2;
    ++s;
  }
  FieldElem z;
  for (std::uint64_t i = 2; i < q; ++i) {
    z = F.elem_at(i);
    if (F.is_zero(z)) continue;
    if (!(F.pow(z, (q - 1) / 2) == F.one())) break;
  }
  FieldElem m_exp = F.pow(z, qq);
  FieldElem c = m_exp;
  FieldElem t = F.pow(a, qq);
  FieldElem r = F.pow(a, (qq + 1) / 2);
  std::uint64_t m = s;
  while (!(t == F.one())) {
    // find least 0 < i < m with t^{2^i} = 1
    std::uint64_t i = 0;
    FieldElem tt = t;
    while (!(tt == F.one())) {
      tt = F.mul(tt, tt);
      ++i;
      if (i == m) return std::nullopt;  // defensive; cannot happen for residues
    }
    FieldElem b = c;
    for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = F.mul(b, b);
    m = i;
    c = F.mul(b, b);
    t = F.mul(t, c);
    r = F.mul(r, b);
  }
  return r;
}

RankLocusReport rank_locus_scan(const Instance& inst, int j, int i,
                                const std::vector<Field>& fields, std::uint64_t budget,
                                int threads) {
  (void)threads;
  RankLocusReport rep;
  rep.j = j;
  rep.i = i;
  for (const auto& F : fields) rep.fields.push_back(F.spec());
  std::vector<int> rest;
  for (int s = 0; s <= inst.N; ++s)
    if (s != j && s != i) rest.push_back(s);
  const std::size_t witness_cap = 8;

  for (const auto& F : fields) {
    if (inst.n == 1 && rest.size() >= 2) {
      // Scan all but the last two remaining factors; the tail pair is solved
      // exactly through the rank <= 1 criterion on the stacked linear forms.
      std::vector<int> scan(rest.begin(), rest.end() - 2);
      int d1 = rest[rest.size() - 2], d2 = rest[rest.size() - 1];
      u128 scans = ambient_count_u128(F, inst.n, static_cast<int>(scan.size()));
      if (scans > static_cast<u128>(budget)) continue;
      const std::uint64_t per = proj_point_count(F, inst.n);
      FieldTensor base = FieldTensor::from_instance(inst, F);
      std::vector<std::uint64_t> odo(scan.size(), 0);
      bool done = false;
      while (!done) {
        std::vector<std::vector<FieldElem>> scan_coords;
        FieldTensor t = base;
        for (std::size_t f = 0; f < scan.size(); ++f) {
          scan_coords.push_back(proj_point_at(F, inst.n, odo[f]));
          t = t.contract(scan[f], scan_coords.back());
        }
        ++rep.tested;
        // entry forms M[a][b](u, v): C matrices over the (d1, d2) pair
        std::vector<DenseMatrix> C;
        for (int a = 0; a <= inst.n; ++a)
          for (int b = 0; b <= inst.n; ++b) {
            FieldTensor e = t;
            std::vector<FieldElem> ea(static_cast<std::size_t>(inst.n + 1), F.zero());
            ea[static_cast<std::size_t>(a)] = F.one();
            std::vector<FieldElem> eb(static_cast<std::size_t>(inst.n + 1), F.zero());
            eb[static_cast<std::size_t>(b)] = F.one();
            e = e.contract(j, ea);
            e = e.contract(i, eb);
            C.push_back(e.as_matrix(d1, d2));
          }
        bilinear_common_zeros(F, C, [&](const std::vector<FieldElem>& u,
                                        const std::vector<FieldElem>& v) {
          if (rep.witnesses.size() >= witness_cap) return;
          std::vector<std::vector<FieldElem>> coords;
          for (int f : rest) {
            if (f == d1)
              coords.push_back(u);
            else if (f == d2)
              coords.push_back(v);
            else {
              std::size_t si = static_cast<std::size_t>(
                  std::find(scan.begin(), scan.end(), f) - scan.begin());
              coords.push_back(scan_coords[si]);
            }
          }
          MultiProjPoint pt = make_point(F, rest, std::move(coords));
          DenseMatrix M = slice_matrix(inst, j, i, F, pt.coord_map());
          if (matrix_rank(M) <= inst.n - 1) {
            for (const auto& wpt : rep.witnesses)
              if (wpt.F == F && wpt.same_as(pt)) return;
            rep.witnesses.push_back(pt);
          }
        });
        if (scan.empty()) break;
        std::size_t f = scan.size();
        while (f > 0) {
          --f;
          if (++odo[f] < per) break;
          odo[f] = 0;
          if (f == 0) done = true;
        }
      }
    } else {
      u128 total = ambient_count_u128(F, inst.n, static_cast<int>(rest.size()));
      if (total > static_cast<u128>(budget)) continue;
      const std::uint64_t per = proj_point_count(F, inst.n);
      FieldTensor base = FieldTensor::from_instance(inst, F);
      std::vector<std::uint64_t> odo(rest.size(), 0);
      bool done = false;
      while (!done) {
        std::vector<std::vector<FieldElem>> coords;
        FieldTensor t = base;
        for (std::size_t f = 0; f < rest.size(); ++f) {
          coords.push_back(proj_point_at(F, inst.n, odo[f]));
          t = t.contract(rest[f], coords.back());
        }
        ++rep.tested;
        if (matrix_rank(t.as_matrix(j, i)) <= inst.n - 1 && rep.witnesses.size() < witness_cap)
          rep.witnesses.push_back(make_point(F, rest, coords));
        std::size_t f = rest.size();
        while (f > 0) {
          --f;
          if (++odo[f] < per) break;
          odo[f] = 0;
          if (f == 0) done = true;
        }
      }
    }
    if (!rep.witnesses.empty()) break;  // escalation stops at the first field with a witness
  }
  rep.verdict = rep.witnesses.empty() ? "none-found" : "exceptional-locus-nonempty";
  return rep;
}

}  // namespace detflop
