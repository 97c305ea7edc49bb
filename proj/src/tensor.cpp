#include "detflop/tensor.hpp"

#include <algorithm>

namespace detflop {

std::size_t CoefficientTensor::flat_size() const {
  std::size_t s = 1;
  for (int i = 0; i <= N; ++i) s *= static_cast<std::size_t>(n + 1);
  return s;
}

long long CoefficientTensor::at(const std::vector<int>& idx) const {
  if (static_cast<int>(idx.size()) != N + 1) throw DimensionMismatchError("tensor index arity");
  std::size_t flat = 0;
  for (int s = 0; s <= N; ++s) flat = flat * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(idx[static_cast<std::size_t>(s)]);
  return entries[flat];
}

std::vector<int> Instance::model_factors(int ell) const {
  std::vector<int> f;
  for (int s = 0; s <= N; ++s)
    if (s != ell) f.push_back(s);
  return f;
}

Instance random_instance(int n, int N, std::uint64_t seed, int bound) {
  if (n < 1) throw Error("n must be >= 1");
  if (N < 2) throw Error("N must be >= 2");
  if (bound < 1) throw Error("coefficient bound must be positive");
  Instance inst;
  inst.n = n;
  inst.N = N;
  inst.seed = seed;
  inst.bound = bound;
  inst.tensor.n = n;
  inst.tensor.N = N;
  inst.tensor.entries.resize(inst.tensor.flat_size());
  Pcg64 rng(seed);
  for (auto& e : inst.tensor.entries) e = rng.symmetric(static_cast<unsigned>(bound));
  return inst;
}

Instance diagonal_instance(int n, int N) {
  Instance inst;
  inst.n = n;
  inst.N = N;
  inst.seed = 0;
  inst.bound = 1;
  inst.tensor.n = n;
  inst.tensor.N = N;
  inst.tensor.entries.assign(inst.tensor.flat_size(), 0);
  for (int d = 0; d <= n; ++d) {
    std::size_t flat = 0;
    for (int s = 0; s <= N; ++s) flat = flat * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(d);
    inst.tensor.entries[flat] = 1;
  }
  return inst;
}

Instance duplicated_slice_instance(int n, int N, std::uint64_t seed, int bound) {
  Instance inst = random_instance(n, N, seed, bound);
  // Copy the m_0 = 0 slice over the m_0 = 1 slice.
  std::size_t block = inst.tensor.flat_size() / static_cast<std::size_t>(n + 1);
  for (std::size_t t = 0; t < block; ++t)
    inst.tensor.entries[block + t] = inst.tensor.entries[t];
  return inst;
}

FieldTensor FieldTensor::from_instance(const Instance& inst, const Field& F) {
  FieldTensor t;
  t.F = F;
  t.n = inst.n;
  for (int s = 0; s <= inst.N; ++s) t.slots.push_back(s);
  t.data.reserve(inst.tensor.entries.size());
  for (long long e : inst.tensor.entries) t.data.push_back(F.from_int(e));
  return t;
}

FieldTensor FieldTensor::contract(int slot, const std::vector<FieldElem>& v) const {
  auto it = std::find(slots.begin(), slots.end(), slot);
  if (it == slots.end()) throw SlotMismatchError("contracting absent slot");
  if (static_cast<int>(v.size()) != n + 1) throw DimensionMismatchError("contraction vector");
  const std::size_t pos = static_cast<std::size_t>(it - slots.begin());
  const std::size_t width = static_cast<std::size_t>(n + 1);
  std::size_t inner = 1;  // stride of the contracted slot
  for (std::size_t s = pos + 1; s < slots.size(); ++s) inner *= width;
  const std::size_t outer = data.size() / (inner * width);

  FieldTensor out;
  out.F = F;
  out.n = n;
  out.slots = slots;
  out.slots.erase(out.slots.begin() + static_cast<std::ptrdiff_t>(pos));
  out.data.assign(outer * inner, F.zero());
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t m = 0; m < width; ++m) {
      const FieldElem& vm = v[m];
      if (F.is_zero(vm)) continue;
      const std::size_t src = (o * width + m) * inner;
      const std::size_t dst = o * inner;
      for (std::size_t in = 0; in < inner; ++in)
        out.data[dst + in] = F.add(out.data[dst + in], F.mul(data[src + in], vm));
    }
  }
  return out;
}

DenseMatrix FieldTensor::as_matrix(int row_slot, int col_slot) const {
  if (slots.size() != 2) throw SlotMismatchError("tensor is not a matrix");
  const std::size_t width = static_cast<std::size_t>(n + 1);
  DenseMatrix m(F, n + 1, n + 1);
  bool row_first = slots[0] == row_slot && slots[1] == col_slot;
  bool col_first = slots[0] == col_slot && slots[1] == row_slot;
  if (!row_first && !col_first) throw SlotMismatchError("matrix slot labels");
  for (std::size_t a = 0; a < width; ++a)
    for (std::size_t b = 0; b < width; ++b)
      m.at(static_cast<int>(a), static_cast<int>(b)) =
          row_first ? data[a * width + b] : data[b * width + a];
  return m;
}

std::vector<FieldElem> FieldTensor::as_vector(int slot) const {
  if (slots.size() != 1 || slots[0] != slot) throw SlotMismatchError("tensor is not a vector over the slot");
  return data;
}

FieldElem FieldTensor::as_scalar() const {
  if (!slots.empty()) throw SlotMismatchError("tensor is not a scalar");
  return data[0];
}

std::vector<FieldElem> model_equation_values(const Instance& inst, int ell, const Field& F,
                                             const std::map<int, std::vector<FieldElem>>& coords) {
  std::vector<int> expected = inst.model_factors(ell);
  if (coords.size() != expected.size()) throw SlotMismatchError("model coordinate count");
  for (int s : expected)
    if (!coords.count(s)) throw SlotMismatchError("missing coordinates for slot " + std::to_string(s));
  FieldTensor t = FieldTensor::from_instance(inst, F);
  for (int s : expected) t = t.contract(s, coords.at(s));
  return t.as_vector(ell);
}

std::vector<MultiPoly> model_equations(const Instance& inst, int ell) {
  std::vector<int> factors = inst.model_factors(ell);
  std::vector<int> deg(factors.size(), 1);
  std::vector<MultiPoly> eqs;
  std::vector<int> idx(static_cast<std::size_t>(inst.N) + 1, 0);
  for (int m = 0; m <= inst.n; ++m)
    eqs.push_back(MultiPoly::zero(factors, inst.n + 1, deg));
  // One pass over the tensor: each entry contributes a monomial to equation m_ell.
  const std::size_t total = inst.tensor.flat_size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    long long coeff = inst.tensor.entries[flat];
    if (coeff == 0) continue;
    std::size_t rest = flat;
    for (int s = inst.N; s >= 0; --s) {
      idx[static_cast<std::size_t>(s)] = static_cast<int>(rest % static_cast<std::size_t>(inst.n + 1));
      rest /= static_cast<std::size_t>(inst.n + 1);
    }
    std::vector<std::uint8_t> expo(factors.size() * static_cast<std::size_t>(inst.n + 1), 0);
    for (std::size_t f = 0; f < factors.size(); ++f)
      expo[f * static_cast<std::size_t>(inst.n + 1) +
           static_cast<std::size_t>(idx[static_cast<std::size_t>(factors[f])])] = 1;
    eqs[static_cast<std::size_t>(idx[static_cast<std::size_t>(ell)])].add_term(expo, coeff);
  }
  return eqs;
}

bool is_degenerate(const Instance& inst) {
  for (int ell = 0; ell <= inst.N; ++ell) {
    // Equation m of model ell is identically zero iff the tensor slice
    // m_ell = m vanishes.
    const std::size_t total = inst.tensor.flat_size();
    std::vector<bool> nonzero(static_cast<std::size_t>(inst.n) + 1, false);
    std::size_t below = 1;
    for (int s = inst.N; s > ell; --s) below *= static_cast<std::size_t>(inst.n + 1);
    for (std::size_t flat = 0; flat < total; ++flat) {
      if (inst.tensor.entries[flat] == 0) continue;
      std::size_t m = (flat / below) % static_cast<std::size_t>(inst.n + 1);
      nonzero[m] = true;
    }
    for (bool nz : nonzero)
      if (!nz) return true;
  }
  return false;
}

DenseMatrix slice_matrix(const Instance& inst, int row_slot, int col_slot, const Field& F,
                         const std::map<int, std::vector<FieldElem>>& coords) {
  if (row_slot == col_slot) throw SlotMismatchError("row and column slots coincide");
  if (static_cast<int>(coords.size()) != inst.N - 1)
    throw SlotMismatchError("slice coordinates must cover exactly the complement");
  for (const auto& [slot, vec] : coords) {
    if (slot == row_slot || slot == col_slot || slot < 0 || slot > inst.N)
      throw SlotMismatchError("unexpected slot " + std::to_string(slot));
    if (static_cast<int>(vec.size()) != inst.n + 1)
      throw DimensionMismatchError("coordinate vector length");
  }
  FieldTensor t = FieldTensor::from_instance(inst, F);
  for (const auto& [slot, vec] : coords) t = t.contract(slot, vec);
  return t.as_matrix(row_slot, col_slot);
}

std::vector<std::vector<MultiPoly>> slice_matrix_symbolic(const Instance& inst, int row_slot,
                                                          int col_slot) {
  if (row_slot == col_slot) throw SlotMismatchError("row and column slots coincide");
  std::vector<int> factors;
  for (int s = 0; s <= inst.N; ++s)
    if (s != row_slot && s != col_slot) factors.push_back(s);
  std::vector<int> deg(factors.size(), 1);
  std::vector<std::vector<MultiPoly>> m(
      static_cast<std::size_t>(inst.n + 1),
      std::vector<MultiPoly>(static_cast<std::size_t>(inst.n + 1),
                             MultiPoly::zero(factors, inst.n + 1, deg)));
  std::vector<int> idx(static_cast<std::size_t>(inst.N) + 1, 0);
  const std::size_t total = inst.tensor.flat_size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    long long coeff = inst.tensor.entries[flat];
    if (coeff == 0) continue;
    std::size_t rest = flat;
    for (int s = inst.N; s >= 0; --s) {
      idx[static_cast<std::size_t>(s)] = static_cast<int>(rest % static_cast<std::size_t>(inst.n + 1));
      rest /= static_cast<std::size_t>(inst.n + 1);
    }
    std::vector<std::uint8_t> expo(factors.size() * static_cast<std::size_t>(inst.n + 1), 0);
    for (std::size_t f = 0; f < factors.size(); ++f)
      expo[f * static_cast<std::size_t>(inst.n + 1) +
           static_cast<std::size_t>(idx[static_cast<std::size_t>(factors[f])])] = 1;
    m[static_cast<std::size_t>(idx[static_cast<std::size_t>(row_slot)])]
     [static_cast<std::size_t>(idx[static_cast<std::size_t>(col_slot)])]
         .add_term(expo, coeff);
  }
  return m;
}

BaseLocusSpec determinant_form(const Instance& inst, int j, int i, std::size_t term_cap) {
  if (j == i) throw SlotMismatchError("base locus needs a pair of distinct slots");
  BaseLocusSpec spec;
  spec.j = std::min(j, i);
  spec.i = std::max(j, i);
  for (int s = 0; s <= inst.N; ++s)
    if (s != j && s != i) spec.factors.push_back(s);
  auto m = slice_matrix_symbolic(inst, spec.j, spec.i);
  spec.defining_form = poly_det(m, term_cap);
  spec.degenerate = spec.defining_form.is_zero();
  if (!spec.degenerate) {
    for (int d : spec.defining_form.multidegree())
      if (d != inst.n + 1) throw DimensionMismatchError("determinant form multidegree");
  }
  return spec;
}

}  // namespace detflop
