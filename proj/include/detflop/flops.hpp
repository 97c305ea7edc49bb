#pragma once

#include <string>
#include <vector>

#include "detflop/points.hpp"

namespace detflop {

// The birational map from model j to model i over the base locus {j, i}.
// Shared factors are {0..N} \ {i, j}; the slot-j coordinates of the image are
// the corank-1 kernel of the evaluated slice matrix.
struct FlopMap {
  const Instance* inst = nullptr;
  int j = 0;
  int i = 0;

  FlopMap(const Instance& instance, int from, int to) : inst(&instance), j(from), i(to) {
    if (from == to) throw SlotMismatchError("flop needs distinct models");
  }
  std::vector<int> shared_factors() const;
};

// Drops the factor-i coordinates of a point of X_j; the image lies on the
// determinantal base locus (the slice matrix is singular there by
// construction, which is asserted).
MultiProjPoint project_to_base(const FlopMap& flop, const MultiProjPoint& pt);

// Evaluates the flop: shared coordinates are kept, slot-j coordinates are the
// kernel of the slice matrix with row slot i and column slot j.
// ExceptionalPointError when the slice rank drops below n; NotOnVarietyError
// when the input misses X_j.
MultiProjPoint apply_flop(const FlopMap& flop, const MultiProjPoint& pt);

struct DiagramReport {
  int j = 0, i = 0;
  int tested = 0;
  int exceptional_skipped = 0;
  std::vector<std::pair<MultiProjPoint, std::string>> failures;
};

// Checks the commutative diagram through the base locus on the given source
// points: the image must satisfy the target model's equations and project to
// the same base point. `verify_instance` lets a mutation harness check the
// target side against different coefficients.
DiagramReport check_diagram(const FlopMap& flop, const std::vector<MultiProjPoint>& points,
                            const Instance* verify_instance = nullptr);

// Pointwise evaluator for a composition of flops along a word of model
// indices (consecutive indices distinct). ExceptionalPointError carries the
// failing step.
struct WordMap {
  const Instance* inst = nullptr;
  std::vector<int> word;

  MultiProjPoint apply(const MultiProjPoint& pt) const;
};

WordMap compose_word(const Instance& inst, std::vector<int> word);

}  // namespace detflop
