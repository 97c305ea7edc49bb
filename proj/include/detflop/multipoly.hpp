#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "detflop/field.hpp"

namespace detflop {

// Multihomogeneous polynomial over labeled projective factors. Every factor
// carries n+1 variables; terms are kept in a sorted map from exponent vector
// (concatenated per-factor blocks, factors ordered by slot label) to a
// nonzero rational coefficient. Every term of a valid polynomial has per-
// factor degree equal to the declared multidegree.
class MultiPoly {
 public:
  MultiPoly() = default;
  MultiPoly(std::vector<int> factor_slots, int vars_per_factor, std::vector<int> multidegree);

  static MultiPoly zero(std::vector<int> factor_slots, int vars_per_factor,
                        std::vector<int> multidegree);
  // Single variable x^{slot}_{var} as a polynomial of multidegree e_slot.
  static MultiPoly variable(const std::vector<int>& factor_slots, int vars_per_factor, int slot,
                            int var);
  static MultiPoly constant(std::vector<int> factor_slots, int vars_per_factor, const Rat& c);

  const std::vector<int>& factor_slots() const { return factor_slots_; }
  int vars_per_factor() const { return vars_; }
  const std::vector<int>& multidegree() const { return multidegree_; }
  const std::map<std::vector<std::uint8_t>, Rat>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  void add_term(const std::vector<std::uint8_t>& exponents, const Rat& coeff);

  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator*(const MultiPoly& o) const;  // multidegrees add
  MultiPoly negated() const;

  bool operator==(const MultiPoly& o) const {
    return factor_slots_ == o.factor_slots_ && vars_ == o.vars_ && terms_ == o.terms_;
  }

  // Exact evaluation; coords maps every factor slot to a coordinate vector of
  // length vars_per_factor over F.
  FieldElem evaluate(const Field& F, const std::map<int, std::vector<FieldElem>>& coords) const;

  // Partial derivative with respect to x^{slot}_{var}.
  MultiPoly derivative(int slot, int var) const;

  std::string to_string() const;

 private:
  std::vector<int> factor_slots_;
  int vars_ = 0;
  std::vector<int> multidegree_;
  std::map<std::vector<std::uint8_t>, Rat> terms_;

  void check_compatible(const MultiPoly& o) const;
  int factor_pos(int slot) const;
};

// Expanded determinant of a square matrix of polynomials of equal
// multidegree; SizeBudgetExceededError when the expansion exceeds term_cap.
MultiPoly poly_det(const std::vector<std::vector<MultiPoly>>& m, std::size_t term_cap = 10000000);

}  // namespace detflop
