#include "detflop/flops.hpp"

namespace detflop {

std::vector<int> FlopMap::shared_factors() const {
  std::vector<int> shared;
  for (int s = 0; s <= inst->N; ++s)
    if (s != i && s != j) shared.push_back(s);
  return shared;
}

MultiProjPoint project_to_base(const FlopMap& flop, const MultiProjPoint& pt) {
  const Instance& inst = *flop.inst;
  if (!on_model(inst, flop.j, pt)) throw NotOnVarietyError("source of projection");
  const Field& F = pt.F;
  std::vector<int> shared = flop.shared_factors();
  std::vector<std::vector<FieldElem>> coords;
  std::map<int, std::vector<FieldElem>> cmap;
  for (int s : shared) {
    coords.push_back(pt.coord(s));
    cmap[s] = pt.coord(s);
  }
  // factor-i coordinates of the point are a kernel vector, so the slice
  // matrix must be singular at the image
  DenseMatrix M = slice_matrix(inst, flop.j, flop.i, F, cmap);
  if (!F.is_zero(matrix_det(M))) throw Error("internal: base image misses the determinant locus");
  return make_point(F, shared, std::move(coords));
}

MultiProjPoint apply_flop(const FlopMap& flop, const MultiProjPoint& pt) {
  const Instance& inst = *flop.inst;
  if (!on_model(inst, flop.j, pt)) throw NotOnVarietyError("source of flop");
  const Field& F = pt.F;
  std::vector<int> shared = flop.shared_factors();
  std::map<int, std::vector<FieldElem>> cmap;
  for (int s : shared) cmap[s] = pt.coord(s);

  DenseMatrix M = slice_matrix(inst, flop.i, flop.j, F, cmap);
  std::vector<FieldElem> new_j;
  try {
    new_j = corank1_kernel(M);
  } catch (const WrongRankError& e) {
    if (e.rank <= inst.n - 1) throw ExceptionalPointError(0);
    throw;  // rank n+1 cannot happen on the variety
  }

  std::vector<int> target_factors = inst.model_factors(flop.i);
  std::vector<std::vector<FieldElem>> coords;
  for (int s : target_factors) coords.push_back(s == flop.j ? new_j : pt.coord(s));
  MultiProjPoint out = make_point(F, target_factors, std::move(coords));
  if (!on_model(inst, flop.i, out)) throw Error("internal: flop image misses the target model");
  return out;
}

DiagramReport check_diagram(const FlopMap& flop, const std::vector<MultiProjPoint>& points,
                            const Instance* verify_instance) {
  const Instance& vinst = verify_instance ? *verify_instance : *flop.inst;
  DiagramReport rep;
  rep.j = flop.j;
  rep.i = flop.i;
  std::vector<int> shared = flop.shared_factors();
  for (const auto& pt : points) {
    MultiProjPoint img = pt;  // placeholder
    try {
      img = apply_flop(flop, pt);
    } catch (const ExceptionalPointError&) {
      ++rep.exceptional_skipped;
      continue;
    }
    ++rep.tested;
    if (!on_model(vinst, flop.i, img)) {
      rep.failures.emplace_back(pt, "image fails the target model equations");
      continue;
    }
    bool base_ok = true;
    for (int s : shared)
      if (!(pt.coord(s) == img.coord(s))) {
        base_ok = false;
        break;
      }
    if (!base_ok) rep.failures.emplace_back(pt, "base projection not preserved");
  }
  return rep;
}

MultiProjPoint WordMap::apply(const MultiProjPoint& pt) const {
  MultiProjPoint cur = pt;
  for (std::size_t s = 0; s + 1 < word.size(); ++s) {
    FlopMap step(*inst, word[s], word[s + 1]);
    try {
      cur = apply_flop(step, cur);
    } catch (const ExceptionalPointError&) {
      throw ExceptionalPointError(static_cast<int>(s));
    }
  }
  return cur;
}

WordMap compose_word(const Instance& inst, std::vector<int> word) {
  if (word.empty()) throw Error("empty word");
  for (int m : word)
    if (m < 0 || m > inst.N) throw SlotMismatchError("word index out of range");
  for (std::size_t s = 0; s + 1 < word.size(); ++s)
    if (word[s] == word[s + 1]) throw SlotMismatchError("consecutive word indices must differ");
  WordMap w;
  w.inst = &inst;
  w.word = std::move(word);
  return w;
}

}  // namespace detflop
