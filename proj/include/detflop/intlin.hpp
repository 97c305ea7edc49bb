#pragma once

#include <vector>

#include "detflop/common.hpp"

namespace detflop {

using IVec = std::vector<long long>;
using IMat = std::vector<IVec>;  // row-major

IMat imat_identity(int n);
IMat imat_mul(const IMat& a, const IMat& b);
IVec imat_vec(const IMat& a, const IVec& v);
IMat imat_transpose(const IMat& a);
long long imat_det(const IMat& a);
// Inverse of a matrix with determinant +-1; Error otherwise.
IMat imat_inverse_unimodular(const IMat& a);

// Exact rank / right-nullspace over the integers (computed rationally).
int int_rank(const std::vector<std::vector<Int>>& rows);
std::vector<std::vector<Int>> int_nullspace(const std::vector<std::vector<Int>>& rows);

// Divide out the gcd; canonical primitive representative keeps the sign of
// the first nonzero entry.
std::vector<Int> primitive(std::vector<Int> v);

long long to_ll(const Int& v);
IVec to_llvec(const std::vector<Int>& v);
std::vector<Int> to_intvec(const IVec& v);

}  // namespace detflop
