#include "detflop/cones.hpp"

#include <algorithm>
#include <set>

namespace detflop {

namespace {

using XVec = std::vector<Int>;

Int dot(const XVec& a, const XVec& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool is_zero_vec(const XVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

// Bitsets over the processed constraints, one word-packed row per ray.
struct TightSet {
  std::vector<std::uint64_t> w;
  void resize_bits(std::size_t bits) { w.resize((bits + 63) / 64, 0); }
  void set(std::size_t i) { w[i / 64] |= (1ULL << (i % 64)); }
  bool get(std::size_t i) const { return (w[i / 64] >> (i % 64)) & 1ULL; }
};

bool subset_of(const TightSet& a, const TightSet& b) {
  for (std::size_t i = 0; i < a.w.size(); ++i)
    if ((a.w[i] & ~b.w[i]) != 0) return false;
  return true;
}

TightSet intersect(const TightSet& a, const TightSet& b) {
  TightSet r;
  r.w.resize(a.w.size());
  for (std::size_t i = 0; i < a.w.size(); ++i) r.w[i] = a.w[i] & b.w[i];
  return r;
}

struct DDState {
  int dim;
  std::vector<XVec> lineality;
  std::vector<XVec> rays;
  std::vector<TightSet> tight;
  std::vector<XVec> processed;

  // extreme-ray test within the current cone: the constraints tight at the
  // ray, together with the annihilator of the cone's span, must cut out a
  // space of dimension lineality + 1.
  bool ray_extreme(std::size_t ri, const std::vector<XVec>& spanperp) const {
    std::vector<XVec> sys = spanperp;
    for (std::size_t c = 0; c < processed.size(); ++c)
      if (tight[ri].get(c)) sys.push_back(processed[c]);
    int rank = sys.empty() ? 0 : int_rank(sys);
    return dim - rank == static_cast<int>(lineality.size()) + 1;
  }

  void prune_nonextreme() {
    std::vector<XVec> span_rows = rays;
    for (const auto& l : lineality) span_rows.push_back(l);
    std::vector<XVec> spanperp =
        span_rows.empty() ? std::vector<XVec>{} : int_nullspace(span_rows);
    for (std::size_t i = rays.size(); i-- > 0;) {
      if (!ray_extreme(i, spanperp)) {
        rays.erase(rays.begin() + static_cast<std::ptrdiff_t>(i));
        tight.erase(tight.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
  }

  void insert(const XVec& a) {
    // lineality not orthogonal to a: rotate one basis vector into a ray
    int hit = -1;
    for (std::size_t li = 0; li < lineality.size(); ++li)
      if (dot(a, lineality[li]) != 0) {
        hit = static_cast<int>(li);
        break;
      }
    const std::size_t cidx = processed.size();
    if (hit >= 0) {
      XVec l0 = lineality[static_cast<std::size_t>(hit)];
      Int d0 = dot(a, l0);
      if (d0 < 0) {
        for (auto& x : l0) x = -x;
        d0 = -d0;
      }
      std::vector<XVec> new_lin;
      for (std::size_t li = 0; li < lineality.size(); ++li) {
        if (li == static_cast<std::size_t>(hit)) continue;
        XVec l = lineality[li];
        Int dl = dot(a, l);
        for (std::size_t t = 0; t < l.size(); ++t) l[t] = l[t] * d0 - l0[t] * dl;
        new_lin.push_back(primitive(std::move(l)));
      }
      lineality = std::move(new_lin);
      // project existing rays into the hyperplane of a along l0;
      // tightness against earlier constraints is unchanged because they all
      // vanish on l0
      for (std::size_t ri = 0; ri < rays.size(); ++ri) {
        Int dr = dot(a, rays[ri]);
        if (dr == 0) continue;
        XVec r = rays[ri];
        for (std::size_t t = 0; t < r.size(); ++t) r[t] = r[t] * d0 - l0[t] * dr;
        rays[ri] = primitive(std::move(r));
      }
      for (auto& ts : tight) {
        ts.resize_bits(cidx + 1);
        ts.set(cidx);  // all projected rays lie on the new hyperplane
      }
      TightSet t0;
      t0.resize_bits(cidx + 1);
      for (std::size_t c = 0; c < cidx; ++c) t0.set(c);  // l0 was lineality: tight everywhere
      rays.push_back(std::move(l0));
      tight.push_back(std::move(t0));
      processed.push_back(a);
      // projection can leave zero, duplicate, or redundant rays behind;
      // dedup, recompute exact zero sets, and restore minimality
      std::sort(rays.begin(), rays.end());
      rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
      for (std::size_t ri = rays.size(); ri-- > 0;)
        if (is_zero_vec(rays[ri])) rays.erase(rays.begin() + static_cast<std::ptrdiff_t>(ri));
      tight.assign(rays.size(), TightSet{});
      for (std::size_t ri = 0; ri < rays.size(); ++ri) {
        tight[ri].resize_bits(processed.size());
        for (std::size_t c = 0; c < processed.size(); ++c)
          if (dot(processed[c], rays[ri]) == 0) tight[ri].set(c);
      }
      prune_nonextreme();
      return;
    }

    // classic double-description step
    std::vector<Int> vals(rays.size());
    bool any_neg = false, any_pos = false;
    for (std::size_t ri = 0; ri < rays.size(); ++ri) {
      vals[ri] = dot(a, rays[ri]);
      any_neg = any_neg || vals[ri] < 0;
      any_pos = any_pos || vals[ri] > 0;
    }
    if (!any_neg) {  // constraint is redundant on the pointed part
      processed.push_back(a);
      for (std::size_t ri = 0; ri < rays.size(); ++ri) {
        tight[ri].resize_bits(cidx + 1);
        if (vals[ri] == 0) tight[ri].set(cidx);
      }
      return;
    }
    // adjacent (+,-) pairs spawn the boundary rays first (while the old list
    // is intact); Fukuda-Prodon combinatorial adjacency is exact on a
    // minimal extreme-ray list with exact zero sets
    std::vector<XVec> spawned;
    std::vector<TightSet> spawned_tight;
    for (std::size_t p = 0; p < rays.size(); ++p) {
      if (vals[p] <= 0) continue;
      for (std::size_t q = 0; q < rays.size(); ++q) {
        if (vals[q] >= 0) continue;
        TightSet common = intersect(tight[p], tight[q]);
        bool adjacent = true;
        for (std::size_t o = 0; o < rays.size(); ++o) {
          if (o == p || o == q) continue;
          if (subset_of(common, tight[o])) {
            adjacent = false;
            break;
          }
        }
        if (!adjacent) continue;
        XVec w(rays[p].size());
        for (std::size_t t = 0; t < w.size(); ++t)
          w[t] = rays[p][t] * (-vals[q]) + rays[q][t] * vals[p];
        w = primitive(std::move(w));
        TightSet ts;
        ts.resize_bits(cidx + 1);
        ts.set(cidx);
        for (std::size_t c = 0; c < cidx; ++c)
          if (dot(processed[c], w) == 0) ts.set(c);
        spawned.push_back(std::move(w));
        spawned_tight.push_back(std::move(ts));
      }
    }
    std::vector<XVec> new_rays;
    std::vector<TightSet> new_tight;
    for (std::size_t ri = 0; ri < rays.size(); ++ri) {
      if (vals[ri] < 0) continue;
      tight[ri].resize_bits(cidx + 1);
      if (vals[ri] == 0) tight[ri].set(cidx);
      new_rays.push_back(std::move(rays[ri]));
      new_tight.push_back(std::move(tight[ri]));
    }
    for (std::size_t s = 0; s < spawned.size(); ++s) {
      new_rays.push_back(std::move(spawned[s]));
      new_tight.push_back(std::move(spawned_tight[s]));
    }
    rays = std::move(new_rays);
    tight = std::move(new_tight);
    processed.push_back(a);
  }
};

std::vector<IVec> canonical_llvecs(std::vector<XVec> vecs) {
  std::vector<IVec> out;
  out.reserve(vecs.size());
  for (auto& v : vecs) out.push_back(to_llvec(primitive(std::move(v))));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

DDResult dd_from_constraints(int dim, const std::vector<std::vector<Int>>& constraints) {
  DDState st;
  st.dim = dim;
  for (int i = 0; i < dim; ++i) {
    XVec e(static_cast<std::size_t>(dim), Int(0));
    e[static_cast<std::size_t>(i)] = 1;
    st.lineality.push_back(std::move(e));
  }
  // dedup constraints to keep tight-set bitsets small
  std::set<std::vector<Int>> seen;
  for (const auto& c : constraints) {
    std::vector<Int> p = primitive(c);
    if (is_zero_vec(p)) continue;
    if (!seen.insert(p).second) continue;
    st.insert(p);
  }
  DDResult res;
  res.rays = st.rays;
  res.lineality = st.lineality;
  return res;
}

ConeRP cone_from_generators(int dim, const std::vector<IVec>& gens) {
  std::vector<XVec> g;
  for (const auto& v : gens) {
    if (static_cast<int>(v.size()) != dim) throw DimensionMismatchError("generator length");
    XVec x = to_intvec(v);
    if (!is_zero_vec(x)) g.push_back(primitive(std::move(x)));
  }
  // facets = extreme rays of the dual; a lineality l of the dual means the
  // cone spans only l-perp, cut out by the pair +-l
  DDResult dual = dd_from_constraints(dim, g);
  // pointedness: the dual must span the ambient space
  std::vector<XVec> dual_span = dual.rays;
  for (const auto& l : dual.lineality) dual_span.push_back(l);
  int dual_rank = dual_span.empty() ? 0 : int_rank(dual_span);
  if (dual_rank < dim) throw NotPointedError();

  std::vector<XVec> facet_vecs = dual.rays;
  for (const auto& l : dual.lineality) {
    facet_vecs.push_back(l);
    XVec neg = l;
    for (auto& x : neg) x = -x;
    facet_vecs.push_back(std::move(neg));
  }

  ConeRP c;
  c.dim = dim;
  c.facets = canonical_llvecs(facet_vecs);
  // canonical minimal generator list comes from the facet description
  std::vector<std::vector<Int>> fcons;
  for (const auto& f : c.facets) fcons.push_back(to_intvec(f));
  DDResult primal = dd_from_constraints(dim, fcons);
  if (!primal.lineality.empty()) throw NotPointedError();
  c.generators = canonical_llvecs(primal.rays);
  c.rank = c.generators.empty() ? 0
                                : int_rank([&] {
                                    std::vector<XVec> rows;
                                    for (const auto& v : c.generators) rows.push_back(to_intvec(v));
                                    return rows;
                                  }());
  return c;
}

ConeRP cone_from_facets(int dim, const std::vector<IVec>& facets) {
  std::vector<std::vector<Int>> cons;
  for (const auto& f : facets) {
    if (static_cast<int>(f.size()) != dim) throw DimensionMismatchError("facet length");
    cons.push_back(to_intvec(f));
  }
  DDResult res = dd_from_constraints(dim, cons);
  if (!res.lineality.empty()) throw NotPointedError();
  std::vector<IVec> gens;
  for (const auto& r : res.rays) gens.push_back(to_llvec(r));
  return cone_from_generators(dim, gens);
}

ConeRP cone_intersect(const ConeRP& a, const ConeRP& b) {
  if (a.dim != b.dim) throw DimensionMismatchError("cone dimensions");
  std::vector<IVec> facets = a.facets;
  facets.insert(facets.end(), b.facets.begin(), b.facets.end());
  return cone_from_facets(a.dim, facets);
}

ConeRP cone_cut(const ConeRP& c, const IVec& w) {
  std::vector<IVec> facets = c.facets;
  facets.push_back(w);
  return cone_from_facets(c.dim, facets);
}

bool cone_contains(const ConeRP& c, const IVec& x) {
  XVec xv = to_intvec(x);
  for (const auto& f : c.facets)
    if (dot(to_intvec(f), xv) < 0) return false;
  return true;
}

bool cone_contains_interior(const ConeRP& c, const IVec& x) {
  if (!cone_contains(c, x)) return false;
  XVec xv = to_intvec(x);
  for (const auto& f : c.facets) {
    XVec fv = to_intvec(f);
    if (dot(fv, xv) != 0) continue;
    // a facet vanishing on x must vanish on the whole cone, otherwise x sits
    // on the relative boundary
    bool whole = true;
    for (const auto& g : c.generators)
      if (dot(fv, to_intvec(g)) != 0) {
        whole = false;
        break;
      }
    if (!whole) return false;
  }
  return true;
}

bool cone_equal(const ConeRP& a, const ConeRP& b) { return a == b; }

bool is_face_of(const ConeRP& face, const ConeRP& c) {
  if (face.dim != c.dim) return false;
  for (const auto& g : face.generators)
    if (!cone_contains(c, g)) return false;
  // facets of c vanishing on all of face; the face must be the slice they cut
  std::vector<IVec> cuts = c.facets;
  for (const auto& f : c.facets) {
    bool vanishes = true;
    for (const auto& g : face.generators)
      if (dot(to_intvec(f), to_intvec(g)) != 0) {
        vanishes = false;
        break;
      }
    if (face.generators.empty()) vanishes = true;
    if (vanishes) {
      IVec neg = f;
      for (auto& x : neg) x = -x;
      cuts.push_back(std::move(neg));
    }
  }
  ConeRP slice = cone_from_facets(c.dim, cuts);
  return cone_equal(slice, face);
}

IVec cone_interior_point(const ConeRP& c) {
  IVec p(static_cast<std::size_t>(c.dim), 0);
  for (const auto& g : c.generators)
    for (std::size_t t = 0; t < p.size(); ++t) p[t] = add_ck(p[t], g[t]);
  return p;
}

ConeRP conical_hull(int dim, const std::vector<ConeRP>& cones) {
  std::vector<IVec> gens;
  for (const auto& c : cones) gens.insert(gens.end(), c.generators.begin(), c.generators.end());
  return cone_from_generators(dim, gens);
}

ConeRP apply_matrix(const IMat& t, const ConeRP& c) {
  std::vector<IVec> gens;
  gens.reserve(c.generators.size());
  for (const auto& g : c.generators) gens.push_back(imat_vec(t, g));
  return cone_from_generators(c.dim, gens);
}

ConeRP apply_unimodular(const IMat& t, const IMat& t_inv, const ConeRP& c) {
  ConeRP out;
  out.dim = c.dim;
  out.rank = c.rank;
  IMat t_inv_T = imat_transpose(t_inv);
  for (const auto& g : c.generators) out.generators.push_back(imat_vec(t, g));
  for (const auto& f : c.facets) out.facets.push_back(imat_vec(t_inv_T, f));
  std::sort(out.generators.begin(), out.generators.end());
  std::sort(out.facets.begin(), out.facets.end());
  return out;
}

std::vector<ConeRP> cone_subtract(const ConeRP& piece, const ConeRP& other) {
  std::vector<ConeRP> out;
  ConeRP cur = piece;
  for (const auto& w : other.facets) {
    IVec neg = w;
    for (auto& x : neg) x = -x;
    ConeRP outside = cone_cut(cur, neg);
    if (outside.rank == piece.dim) out.push_back(outside);
    cur = cone_cut(cur, w);
    if (cur.rank < piece.dim) break;  // nothing full-dimensional left inside
  }
  return out;
}

}  // namespace detflop
