#include "detflop/multipoly.hpp"

#include <algorithm>
#include <sstream>

namespace detflop {

MultiPoly::MultiPoly(std::vector<int> factor_slots, int vars_per_factor,
                     std::vector<int> multidegree)
    : factor_slots_(std::move(factor_slots)), vars_(vars_per_factor),
      multidegree_(std::move(multidegree)) {
  if (!std::is_sorted(factor_slots_.begin(), factor_slots_.end()))
    throw SlotMismatchError("factor slots must be sorted");
  if (multidegree_.size() != factor_slots_.size())
    throw DimensionMismatchError("multidegree length");
}

MultiPoly MultiPoly::zero(std::vector<int> factor_slots, int vars_per_factor,
                          std::vector<int> multidegree) {
  return MultiPoly(std::move(factor_slots), vars_per_factor, std::move(multidegree));
}

MultiPoly MultiPoly::constant(std::vector<int> factor_slots, int vars_per_factor, const Rat& c) {
  std::vector<int> deg(factor_slots.size(), 0);
  MultiPoly p(std::move(factor_slots), vars_per_factor, std::move(deg));
  if (c != 0) {
    std::vector<std::uint8_t> e(p.factor_slots_.size() * static_cast<std::size_t>(vars_per_factor), 0);
    p.terms_[e] = c;
  }
  return p;
}

MultiPoly MultiPoly::variable(const std::vector<int>& factor_slots, int vars_per_factor, int slot,
                              int var) {
  std::vector<int> deg(factor_slots.size(), 0);
  auto it = std::find(factor_slots.begin(), factor_slots.end(), slot);
  if (it == factor_slots.end()) throw SlotMismatchError("variable slot not among factors");
  deg[static_cast<std::size_t>(it - factor_slots.begin())] = 1;
  MultiPoly p(factor_slots, vars_per_factor, deg);
  std::vector<std::uint8_t> e(factor_slots.size() * static_cast<std::size_t>(vars_per_factor), 0);
  e[static_cast<std::size_t>(it - factor_slots.begin()) * vars_per_factor + var] = 1;
  p.terms_[e] = 1;
  return p;
}

int MultiPoly::factor_pos(int slot) const {
  auto it = std::find(factor_slots_.begin(), factor_slots_.end(), slot);
  if (it == factor_slots_.end()) throw SlotMismatchError("unknown factor slot");
  return static_cast<int>(it - factor_slots_.begin());
}

void MultiPoly::add_term(const std::vector<std::uint8_t>& exponents, const Rat& coeff) {
  if (coeff == 0) return;
  if (exponents.size() != factor_slots_.size() * static_cast<std::size_t>(vars_))
    throw DimensionMismatchError("exponent vector length");
  // multihomogeneity: per-factor degree must match the declared multidegree
  for (std::size_t f = 0; f < factor_slots_.size(); ++f) {
    int d = 0;
    for (int v = 0; v < vars_; ++v) d += exponents[f * static_cast<std::size_t>(vars_) + v];
    if (d != multidegree_[f]) throw DimensionMismatchError("term breaks multihomogeneity");
  }
  auto it = terms_.find(exponents);
  if (it == terms_.end()) {
    terms_[exponents] = coeff;
  } else {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

void MultiPoly::check_compatible(const MultiPoly& o) const {
  if (factor_slots_ != o.factor_slots_ || vars_ != o.vars_)
    throw SlotMismatchError("polynomials over different factor sets");
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  check_compatible(o);
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  if (multidegree_ != o.multidegree_) throw DimensionMismatchError("adding mixed multidegrees");
  MultiPoly r = *this;
  for (const auto& [e, c] : o.terms_) {
    auto it = r.terms_.find(e);
    if (it == r.terms_.end()) {
      r.terms_[e] = c;
    } else {
      it->second += c;
      if (it->second == 0) r.terms_.erase(it);
    }
  }
  return r;
}

MultiPoly MultiPoly::negated() const {
  MultiPoly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const { return *this + o.negated(); }

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  check_compatible(o);
  std::vector<int> deg(multidegree_.size());
  for (std::size_t f = 0; f < deg.size(); ++f) deg[f] = multidegree_[f] + o.multidegree_[f];
  MultiPoly r(factor_slots_, vars_, deg);
  if (is_zero() || o.is_zero()) return r;
  std::vector<std::uint8_t> e(factor_slots_.size() * static_cast<std::size_t>(vars_));
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      for (std::size_t t = 0; t < e.size(); ++t)
        e[t] = static_cast<std::uint8_t>(ea[t] + eb[t]);
      auto it = r.terms_.find(e);
      if (it == r.terms_.end()) {
        Rat c = ca * cb;
        if (c != 0) r.terms_[e] = c;
      } else {
        it->second += ca * cb;
        if (it->second == 0) r.terms_.erase(it);
      }
    }
  }
  return r;
}

FieldElem MultiPoly::evaluate(const Field& F,
                              const std::map<int, std::vector<FieldElem>>& coords) const {
  for (std::size_t f = 0; f < factor_slots_.size(); ++f) {
    auto it = coords.find(factor_slots_[f]);
    if (it == coords.end() || static_cast<int>(it->second.size()) != vars_)
      throw SlotMismatchError("evaluation coordinates for slot " +
                              std::to_string(factor_slots_[f]));
  }
  FieldElem acc = F.zero();
  for (const auto& [e, c] : terms_) {
    FieldElem t = F.from_rat(c);
    for (std::size_t f = 0; f < factor_slots_.size(); ++f) {
      const auto& vec = coords.at(factor_slots_[f]);
      for (int v = 0; v < vars_; ++v) {
        std::uint8_t exp = e[f * static_cast<std::size_t>(vars_) + v];
        for (std::uint8_t r = 0; r < exp; ++r) t = F.mul(t, vec[static_cast<std::size_t>(v)]);
      }
    }
    acc = F.add(acc, t);
  }
  return acc;
}

MultiPoly MultiPoly::derivative(int slot, int var) const {
  int fp = factor_pos(slot);
  std::vector<int> deg = multidegree_;
  deg[static_cast<std::size_t>(fp)] = std::max(0, deg[static_cast<std::size_t>(fp)] - 1);
  MultiPoly r(factor_slots_, vars_, deg);
  std::size_t pos = static_cast<std::size_t>(fp) * vars_ + static_cast<std::size_t>(var);
  for (const auto& [e, c] : terms_) {
    if (e[pos] == 0) continue;
    std::vector<std::uint8_t> e2 = e;
    e2[pos] -= 1;
    r.add_term(e2, c * e[pos]);
  }
  return r;
}

std::string MultiPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c << ")";
    for (std::size_t f = 0; f < factor_slots_.size(); ++f)
      for (int v = 0; v < vars_; ++v) {
        std::uint8_t exp = e[f * static_cast<std::size_t>(vars_) + v];
        if (exp == 0) continue;
        os << "*x" << factor_slots_[f] << "_" << v;
        if (exp > 1) os << "^" << static_cast<int>(exp);
      }
  }
  return os.str();
}

namespace {

MultiPoly det_recursive(const std::vector<std::vector<MultiPoly>>& m, std::vector<int> cols,
                        int row, std::size_t term_cap, std::size_t& budget_used) {
  const std::size_t k = cols.size();
  if (k == 1) return m[static_cast<std::size_t>(row)][static_cast<std::size_t>(cols[0])];
  MultiPoly acc;
  bool acc_set = false;
  for (std::size_t ci = 0; ci < k; ++ci) {
    std::vector<int> rest;
    rest.reserve(k - 1);
    for (std::size_t t = 0; t < k; ++t)
      if (t != ci) rest.push_back(cols[t]);
    MultiPoly minor = det_recursive(m, rest, row + 1, term_cap, budget_used);
    MultiPoly prod = m[static_cast<std::size_t>(row)][static_cast<std::size_t>(cols[ci])] * minor;
    if (ci % 2 == 1) prod = prod.negated();
    budget_used += prod.term_count();
    if (budget_used > term_cap) throw SizeBudgetExceededError(budget_used);
    if (!acc_set) {
      acc = prod;
      acc_set = true;
    } else {
      acc = acc + prod;
    }
  }
  return acc;
}

}  // namespace

MultiPoly poly_det(const std::vector<std::vector<MultiPoly>>& m, std::size_t term_cap) {
  const std::size_t k = m.size();
  if (k == 0) throw NonSquareError(0, 0);
  for (const auto& row : m)
    if (row.size() != k) throw NonSquareError(static_cast<int>(k), static_cast<int>(row.size()));
  std::vector<int> cols(k);
  for (std::size_t i = 0; i < k; ++i) cols[i] = static_cast<int>(i);
  std::size_t used = 0;
  return det_recursive(m, cols, 0, term_cap, used);
}

}  // namespace detflop
