#include "detflop/chambers.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "detflop/rng.hpp"

namespace detflop {

namespace {

ConeRP chamber_cone(int N, const IMat& transport) {
  std::vector<IVec> gens;
  for (int c = 0; c < N; ++c) {
    IVec col(static_cast<std::size_t>(N), 0);
    for (int r = 0; r < N; ++r) col[static_cast<std::size_t>(r)] = transport[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    gens.push_back(std::move(col));
  }
  return cone_from_generators(N, gens);
}

std::vector<int> loop_word(const std::vector<int>& rep_word, const std::vector<int>& node_word) {
  // rep path from 0, then the node path walked backwards to 0
  std::vector<int> w = rep_word;
  for (std::size_t t = node_word.size() - 1; t-- > 0;) w.push_back(node_word[t]);
  return w;
}

std::string classify_order(const IMat& m, int bound) {
  IMat acc = m;
  for (int k = 1; k <= bound; ++k) {
    if (acc == imat_identity(static_cast<int>(m.size())))
      return std::to_string(k);
    acc = imat_mul(acc, m);
  }
  return "infinite (>" + std::to_string(bound) + ")";
}

}  // namespace

TilingCertificate chamber_bfs(const Instance& inst, const PushforwardSet& pushforwards,
                              int depth_limit) {
  const int N = inst.N;
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i <= N; ++i) {
      if (i == j) continue;
      if (!pushforwards.count({j, i}))
        throw InconsistentFanError("missing pushforward for pair (" + std::to_string(j) + "," +
                                   std::to_string(i) + ")");
    }

  TilingCertificate cert;
  cert.N = N;
  cert.inst = &inst;
  cert.pushforwards = pushforwards;
  cert.status = "closed";

  ChamberNode root;
  root.model = 0;
  root.transport = imat_identity(N);
  root.word = {0};
  root.chamber = chamber_cone(N, root.transport);
  root.orbit_rep = true;
  cert.chambers.push_back(root);
  cert.orbit_reps.push_back(0);

  std::map<std::vector<IVec>, int> by_cone;
  by_cone[root.chamber.generators] = 0;
  std::map<int, int> rep_by_model{{0, 0}};
  std::map<std::vector<IVec>, int> generator_index;  // keyed by matrix rows

  auto add_generator = [&](const IMat& g, std::vector<int> word) {
    auto it = generator_index.find(g);
    if (it != generator_index.end()) return it->second;
    GroupElement ge;
    ge.m = g;
    ge.word = std::move(word);
    ge.order = classify_order(g, 24);
    cert.generators.push_back(std::move(ge));
    int idx = static_cast<int>(cert.generators.size()) - 1;
    generator_index[g] = idx;
    return idx;
  };

  std::deque<std::pair<int, int>> queue;  // chamber index, depth
  queue.emplace_back(0, 0);
  while (!queue.empty()) {
    auto [ci, depth] = queue.front();
    queue.pop_front();
    if (depth >= depth_limit) {
      cert.status = "frontier-open";
      continue;
    }
    cert.explored_depth = std::max(cert.explored_depth, depth + 1);
    // expansion reads a copy: chamber storage may reallocate below
    ChamberNode cur = cert.chambers[static_cast<std::size_t>(ci)];
    for (int wall_class : inst.model_factors(cur.model)) {
      const PushforwardMatrix& step = pushforwards.at({wall_class, cur.model});
      IMat t_next = imat_mul(cur.transport, step.m);
      ConeRP cone_next = chamber_cone(N, t_next);

      // exact wall adjacency across the crossed facet
      std::vector<IVec> shared_gens;
      for (int c = 0; c < N; ++c) {
        if (inst.model_factors(cur.model)[static_cast<std::size_t>(c)] == wall_class) continue;
        IVec col(static_cast<std::size_t>(N), 0);
        for (int r = 0; r < N; ++r)
          col[static_cast<std::size_t>(r)] = cur.transport[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        shared_gens.push_back(std::move(col));
      }
      ConeRP wall_facet = cone_from_generators(N, shared_gens);
      ConeRP met = cone_intersect(cur.chamber, cone_next);
      if (!(cone_equal(met, wall_facet) && met.rank == N - 1))
        throw InconsistentFanError("wall crossing from model " + std::to_string(cur.model) +
                                   " through class " + std::to_string(wall_class) +
                                   " does not meet in the shared facet");

      auto seen = by_cone.find(cone_next.generators);
      if (seen != by_cone.end()) {
        int cj = seen->second;
        const ChamberNode& other = cert.chambers[static_cast<std::size_t>(cj)];
        IMat g = imat_mul(t_next, imat_inverse_unimodular(other.transport));
        int gi = -1;
        if (g != imat_identity(N)) {
          if (other.model != wall_class)
            throw InconsistentFanError("equal chambers carry different models");
          gi = add_generator(g, loop_word(other.word, [&] {
                 std::vector<int> w = cur.word;
                 w.push_back(wall_class);
                 return w;
               }()));
        }
        cert.walls.push_back({ci, wall_class, cj, gi});
        continue;
      }

      ChamberNode node;
      node.model = wall_class;
      node.transport = t_next;
      node.word = cur.word;
      node.word.push_back(wall_class);
      node.chamber = cone_next;
      int idx = static_cast<int>(cert.chambers.size());
      int gi = -1;
      auto rep = rep_by_model.find(wall_class);
      if (rep == rep_by_model.end()) {
        node.orbit_rep = true;
        cert.chambers.push_back(node);
        by_cone[cone_next.generators] = idx;
        rep_by_model[wall_class] = idx;
        cert.orbit_reps.push_back(idx);
        queue.emplace_back(idx, depth + 1);
      } else {
        const ChamberNode& r = cert.chambers[static_cast<std::size_t>(rep->second)];
        IMat g = imat_mul(t_next, imat_inverse_unimodular(r.transport));
        gi = add_generator(g, loop_word(r.word, node.word));
        node.identified_with = rep->second;
        node.generator_index = gi;
        cert.chambers.push_back(node);
        by_cone[cone_next.generators] = idx;
      }
      cert.walls.push_back({ci, wall_class, idx, gi});
    }
  }

  // exact fan property over every explored pair
  for (std::size_t a = 0; a < cert.chambers.size(); ++a)
    for (std::size_t b = a + 1; b < cert.chambers.size(); ++b) {
      ConeRP inter = cone_intersect(cert.chambers[a].chamber, cert.chambers[b].chamber);
      if (inter.rank == N && !cone_equal(cert.chambers[a].chamber, cert.chambers[b].chamber))
        throw InconsistentFanError("chambers overlap in full dimension");
      if (!is_face_of(inter, cert.chambers[a].chamber) ||
          !is_face_of(inter, cert.chambers[b].chamber))
        throw InconsistentFanError("chamber intersection is not a common face");
    }
  return cert;
}

std::optional<std::pair<int, IMat>> locate_chamber(const TilingCertificate& cert,
                                                   const IVec& target_interior, int step_limit) {
  const Instance& inst = *cert.inst;
  const int N = cert.N;
  // exact segment walk from the reference chamber toward the target
  IVec x0 = cone_interior_point(cert.chambers[0].chamber);
  std::vector<Int> z = to_intvec(target_interior);
  std::vector<Int> x = to_intvec(x0);
  int model = 0;
  IMat T = imat_identity(N);
  ConeRP cone = cert.chambers[0].chamber;
  Rat t_cur = 0;
  for (int step = 0; step < step_limit; ++step) {
    // exit parameter through each facet along x0 -> z
    bool inside = true;
    Rat best_t;
    const IVec* best_f = nullptr;
    for (const auto& f : cone.facets) {
      std::vector<Int> fv = to_intvec(f);
      Int a = 0, b = 0;
      for (std::size_t k = 0; k < fv.size(); ++k) {
        a += fv[k] * x[k];
        b += fv[k] * z[k];
      }
      if (b >= 0) continue;  // target side never exits through f
      // <f, x0 + t (z - x0)> = 0  =>  t = a / (a - b)
      Rat tf = Rat(a) / Rat(a - b);
      if (tf < t_cur) continue;
      inside = false;
      if (best_f == nullptr || tf < best_t) {
        best_t = tf;
        best_f = &f;
      }
    }
    if (inside) return std::make_pair(model, T);
    // wall class = the unique transport column with positive pairing
    std::vector<int> factors = inst.model_factors(model);
    int wall_class = -1;
    std::vector<Int> fv = to_intvec(*best_f);
    for (int c = 0; c < N; ++c) {
      Int d = 0;
      for (int r = 0; r < N; ++r)
        d += fv[static_cast<std::size_t>(r)] * Int(T[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
      if (d > 0) {
        wall_class = factors[static_cast<std::size_t>(c)];
        break;
      }
    }
    if (wall_class < 0) return std::nullopt;
    const PushforwardMatrix& stepm = cert.pushforwards.at({wall_class, model});
    T = imat_mul(T, stepm.m);
    model = wall_class;
    cone = chamber_cone(N, T);
    t_cur = best_t;
  }
  return std::nullopt;
}

std::vector<GroupElement> bir_generators(const TilingCertificate& cert) {
  if (cert.status != "closed") throw NotClosedError();
  std::vector<GroupElement> gens;
  std::set<IMat> seen;
  for (const auto& g : cert.generators) {
    if (imat_det(g.m) != 1 && imat_det(g.m) != -1)
      throw InconsistentFanError("identification element is not unimodular");
    if (seen.insert(g.m).second) gens.push_back(g);
  }
  // closure check: products of two generators land on a located chamber
  for (const auto& ga : gens)
    for (const auto& gb : gens) {
      IMat p = imat_mul(ga.m, gb.m);
      IVec z = imat_vec(p, cone_interior_point(cert.chambers[0].chamber));
      if (!locate_chamber(cert, z))
        throw InconsistentFanError("generator product walks outside the tiling");
    }
  return gens;
}

namespace {

struct BallElement {
  IMat m;
  IMat inv;
  int word_length = 0;
};

std::vector<BallElement> group_ball(const std::vector<GroupElement>& gens, int radius, int N,
                                    std::size_t cap) {
  std::vector<BallElement> ball;
  std::set<IMat> seen;
  BallElement id{imat_identity(N), imat_identity(N), 0};
  ball.push_back(id);
  seen.insert(id.m);
  std::vector<std::pair<IMat, IMat>> steps;  // generator and inverse
  for (const auto& g : gens) {
    IMat gi = imat_inverse_unimodular(g.m);
    steps.emplace_back(g.m, gi);
    steps.emplace_back(gi, g.m);
  }
  std::size_t level_start = 0;
  for (int r = 1; r <= radius; ++r) {
    std::size_t level_end = ball.size();
    for (std::size_t e = level_start; e < level_end; ++e) {
      for (const auto& [s, si] : steps) {
        IMat m = imat_mul(ball[e].m, s);
        if (seen.count(m)) continue;
        if (ball.size() >= cap)
          throw Error("group ball exceeds the element budget at radius " + std::to_string(r));
        seen.insert(m);
        ball.push_back({m, imat_mul(si, ball[e].inv), r});
      }
    }
    level_start = level_end;
  }
  return ball;
}

}  // namespace

FundamentalDomainCandidate fundamental_domain(const TilingCertificate& cert, int ball_radius) {
  if (cert.status != "closed") throw NotClosedError();
  const int N = cert.N;
  FundamentalDomainCandidate out;
  out.ball_radius = ball_radius;

  std::vector<ConeRP> rep_cones;
  for (int idx : cert.orbit_reps) rep_cones.push_back(cert.chambers[static_cast<std::size_t>(idx)].chamber);
  ConeRP pi0 = conical_hull(N, rep_cones);

  std::vector<GroupElement> gens = bir_generators(cert);
  std::vector<BallElement> ball = group_ball(gens, ball_radius, N, 20000);

  // chamber stabilizers inside the ball are an obstruction to the trim
  for (const auto& be : ball) {
    if (be.word_length == 0) continue;
    for (const auto& ch : cert.chambers) {
      std::vector<IVec> moved;
      for (const auto& g : ch.chamber.generators) moved.push_back(imat_vec(be.m, g));
      std::sort(moved.begin(), moved.end());
      if (moved == ch.chamber.generators && be.m != imat_identity(N))
        throw StabilizerObstructionError(be.m);
    }
  }
  out.stabilizer_assumption = true;

  // eta candidates: invariant covectors first, then seeded positive
  // combinations of the hull facets
  std::vector<IVec> etas;
  {
    std::vector<std::vector<Int>> rows;
    for (const auto& g : gens) {
      IMat gt = imat_transpose(g.m);
      for (int r = 0; r < N; ++r) {
        std::vector<Int> row;
        for (int c = 0; c < N; ++c)
          row.push_back(Int(gt[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) -
                        Int(r == c ? 1 : 0));
        rows.push_back(std::move(row));
      }
    }
    if (!rows.empty()) {
      for (const auto& v : int_nullspace(rows)) {
        IVec cand = to_llvec(v);
        etas.push_back(cand);
        IVec neg = cand;
        for (auto& x : neg) x = -x;
        etas.push_back(neg);
      }
    }
    Pcg64 rng(cert.inst->seed, kStreamDomain);
    for (int draw = 0; draw < 24; ++draw) {
      IVec eta(static_cast<std::size_t>(N), 0);
      for (const auto& f : pi0.facets) {
        long long w = 1 + static_cast<long long>(rng.bounded(9));
        for (std::size_t t = 0; t < eta.size(); ++t) eta[t] = add_ck(eta[t], mul_ck(w, f[t]));
      }
      etas.push_back(eta);
    }
  }
  auto strictly_positive_on_hull = [&](const IVec& eta) {
    for (const auto& g : pi0.generators) {
      long long d = 0;
      for (std::size_t t = 0; t < eta.size(); ++t) d = add_ck(d, mul_ck(eta[t], g[t]));
      if (d <= 0) return false;
    }
    return true;
  };

  ConeRP pi;
  bool built = false;
  for (const auto& eta : etas) {
    if (!strictly_positive_on_hull(eta)) continue;
    // Dirichlet cuts <gamma^T eta - eta, x> >= 0, skipping the vacuous and
    // the non-binding ones
    ConeRP cand = pi0;
    std::set<IVec> cut_seen;
    bool degenerate = false;
    for (const auto& be : ball) {
      if (be.word_length == 0) continue;
      IMat gt = imat_transpose(be.m);
      IVec cut = imat_vec(gt, eta);
      for (std::size_t t = 0; t < cut.size(); ++t) cut[t] = sub_ck(cut[t], eta[t]);
      if (std::all_of(cut.begin(), cut.end(), [](long long x) { return x == 0; })) continue;
      if (!cut_seen.insert(cut).second) continue;
      bool binding = false;
      for (const auto& g : cand.generators) {
        long long d = 0;
        for (std::size_t t = 0; t < cut.size(); ++t) d = add_ck(d, mul_ck(cut[t], g[t]));
        if (d < 0) {
          binding = true;
          break;
        }
      }
      if (!binding) continue;
      cand = cone_cut(cand, cut);
      if (cand.rank < N) {
        degenerate = true;
        break;
      }
    }
    if (degenerate) continue;
    if (cone_intersect(cand, cert.chambers[0].chamber).rank < N) continue;
    pi = cand;
    built = true;
    break;
  }
  if (!built) {
    out.certifications.push_back("FAILED: no eta yields a full-dimensional trimmed domain");
    out.all_passed = false;
    out.pi = pi0;
    return out;
  }
  out.pi = pi;
  out.certifications.push_back("pi-rational-polyhedral: " + std::to_string(pi.generators.size()) +
                               " generators, " + std::to_string(pi.facets.size()) + " facets");
  out.certifications.push_back("pi-full-dimensional");
  out.certifications.push_back("pi-meets-reference-nef-interior");

  // covering of the explored region by ball translates, exact subtraction
  bool covering_ok = true;
  for (const auto& ch : cert.chambers) {
    std::deque<ConeRP> pieces{ch.chamber};
    int guard = 0;
    while (!pieces.empty() && ++guard < 4096) {
      ConeRP piece = pieces.front();
      pieces.pop_front();
      if (piece.rank < N) continue;
      IVec ip = cone_interior_point(piece);
      const BallElement* host = nullptr;
      for (const auto& be : ball) {
        IVec pre = imat_vec(be.inv, ip);
        if (cone_contains(pi, pre)) {
          host = &be;
          break;
        }
      }
      if (!host) {
        covering_ok = false;
        break;
      }
      ConeRP translate = apply_unimodular(host->m, host->inv, pi);
      for (auto& rest : cone_subtract(piece, translate)) pieces.push_back(std::move(rest));
    }
    if (!pieces.empty()) covering_ok = false;
    if (!covering_ok) break;
  }
  out.certifications.push_back(std::string(covering_ok ? "" : "FAILED: ") +
                               "ball-translates-cover-explored-region");

  // pairwise interior disjointness: quotients gamma_a^{-1} gamma_b
  bool disjoint_ok = true;
  std::size_t pair_budget = 200000;
  std::set<IMat> quotients;
  bool full_pairs = ball.size() * ball.size() <= pair_budget;
  if (full_pairs) {
    for (const auto& a : ball)
      for (const auto& b : ball) {
        IMat q = imat_mul(a.inv, b.m);
        if (q == imat_identity(N)) continue;
        quotients.insert(q);
      }
  } else {
    for (const auto& b : ball)
      if (b.word_length > 0) quotients.insert(b.m);
  }
  for (const auto& q : quotients) {
    ConeRP moved = apply_unimodular(q, imat_inverse_unimodular(q), pi);
    if (cone_intersect(pi, moved).rank == N) {
      disjoint_ok = false;
      break;
    }
  }
  out.certifications.push_back(std::string(disjoint_ok ? "" : "FAILED: ") +
                               (full_pairs ? "pairwise-interior-disjoint-in-ball"
                                           : "interior-disjoint-from-ball-translates"));

  out.all_passed = covering_ok && disjoint_ok;
  return out;
}

}  // namespace detflop
