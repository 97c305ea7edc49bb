#pragma once

#include <vector>

#include "detflop/intlin.hpp"

namespace detflop {

// Rational polyhedral pointed cone with both descriptions kept in sync:
// generators are the primitive extreme rays, facets a minimal valid
// H-description {x : <f, x> >= 0 for all f}. For cones of less than full
// dimension the facet list contains opposite pairs cutting out the span.
// Both lists are sorted, which makes equality a plain comparison.
struct ConeRP {
  int dim = 0;    // ambient dimension
  int rank = 0;   // dimension of the linear span
  std::vector<IVec> generators;
  std::vector<IVec> facets;

  bool operator==(const ConeRP& o) const {
    return dim == o.dim && rank == o.rank && generators == o.generators;
  }
};

// Extreme rays + lineality of {x : <a, x> >= 0 for every constraint}.
struct DDResult {
  std::vector<std::vector<Int>> rays;
  std::vector<std::vector<Int>> lineality;
};
DDResult dd_from_constraints(int dim, const std::vector<std::vector<Int>>& constraints);

// NotPointedError when the generated cone contains a line.
ConeRP cone_from_generators(int dim, const std::vector<IVec>& gens);
// NotPointedError when the inequality system admits a line. The trivial cone
// is fine.
ConeRP cone_from_facets(int dim, const std::vector<IVec>& facets);

ConeRP cone_intersect(const ConeRP& a, const ConeRP& b);
// Intersection with a single halfspace {<w, x> >= 0}.
ConeRP cone_cut(const ConeRP& c, const IVec& w);

bool cone_contains(const ConeRP& c, const IVec& x);
// x in the relative interior: on the span, strictly inside every facet that
// does not vanish on the whole cone.
bool cone_contains_interior(const ConeRP& c, const IVec& x);
bool cone_equal(const ConeRP& a, const ConeRP& b);
bool is_face_of(const ConeRP& face, const ConeRP& c);

// Sum of the generators: a relative-interior point.
IVec cone_interior_point(const ConeRP& c);

ConeRP conical_hull(int dim, const std::vector<ConeRP>& cones);
ConeRP apply_matrix(const IMat& t, const ConeRP& c);
// Transform by a unimodular matrix with known inverse: generators map by t,
// facets by the inverse transpose, no re-derivation needed.
ConeRP apply_unimodular(const IMat& t, const IMat& t_inv, const ConeRP& c);

// Full-dimensional pieces covering closure(piece \ other). Empty result
// means piece is contained in other up to lower-dimensional boundary.
std::vector<ConeRP> cone_subtract(const ConeRP& piece, const ConeRP& other);

}  // namespace detflop
