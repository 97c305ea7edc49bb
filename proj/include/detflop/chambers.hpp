#pragma once

#include <optional>
#include <string>
#include <vector>

#include "detflop/lattice.hpp"

namespace detflop {

// A marked chamber: the nef cone of model `model` transported into the
// reference lattice N^1(X_0) along a flop word.
struct ChamberNode {
  int model = 0;
  IMat transport;          // unimodular, N^1(X_model) -> N^1(X_0)
  std::vector<int> word;   // BFS path of model indices, starts at 0
  ConeRP chamber;          // transport . nef cone
  bool orbit_rep = false;
  int identified_with = -1;   // chamber index this one maps to (-1 for reps)
  int generator_index = -1;   // group element realizing the identification
};

struct GroupElement {
  IMat m;                  // unimodular action on N^1(X_0)
  std::vector<int> word;   // flop loop based at model 0
  std::string order;       // "1", "2", ..., or "infinite (>24)"
};

struct WallRecord {
  int from = 0;       // chamber index
  int wall = 0;       // basis class whose facet is crossed
  int to = 0;         // neighbor chamber index
  int generator = -1; // identification element when the neighbor closed a loop
};

struct TilingCertificate {
  int N = 0;
  const Instance* inst = nullptr;
  PushforwardSet pushforwards;
  std::vector<ChamberNode> chambers;  // [0] is the reference nef chamber
  std::vector<int> orbit_reps;        // indices into chambers, one per model seen
  std::vector<GroupElement> generators;
  std::vector<WallRecord> walls;
  int explored_depth = 0;
  std::string status;  // "closed" | "frontier-open"
};

// Breadth-first chamber walk from Nef(X_0). Every wall crossing is checked
// for exact facet adjacency, every pair of explored chambers for the fan
// property; violations raise InconsistentFanError. A frontier chamber whose
// model already has a representative is identified through the group element
// carrying the representative onto it and is not expanded further.
TilingCertificate chamber_bfs(const Instance& inst, const PushforwardSet& pushforwards,
                              int depth_limit);

// Deduplicated identification elements with loop words and order data;
// NotClosedError unless the certificate closed. Each pairwise product is
// located in the tiling by an exact wall walk as a closure check.
std::vector<GroupElement> bir_generators(const TilingCertificate& cert);

struct FundamentalDomainCandidate {
  ConeRP pi;
  int ball_radius = 0;
  bool stabilizer_assumption = false;  // true: no chamber stabilizer found in the ball
  std::vector<std::string> certifications;
  bool all_passed = false;
};

// Dirichlet-style candidate: the hull of the orbit representatives trimmed by
// the half-space cuts <eta, x> <= <gamma^T eta, x> over the word ball B_R.
// Certifies full dimension, covering of the explored region by ball
// translates, and pairwise interior disjointness inside the ball, all in
// exact arithmetic. StabilizerObstructionError when a nontrivial ball element
// fixes a chamber setwise.
FundamentalDomainCandidate fundamental_domain(const TilingCertificate& cert, int ball_radius);

// Exact chamber location by wall walking: the chamber of the tiling whose
// interior contains the target direction, returned as (model, transport).
// Used by the closure check and exposed for tests.
std::optional<std::pair<int, IMat>> locate_chamber(const TilingCertificate& cert,
                                                   const IVec& target_interior,
                                                   int step_limit = 256);

}  // namespace detflop
