#pragma once

#include "dfs/types.hpp"

namespace dfs {

/// m = u * diag(sigma) * v.adjoint(); u, v unitary, sigma nonincreasing >= 0.
struct SvdResult {
  CMat u;
  RVec sigma;
  CMat v;
};

SvdResult svd(const CMat& m);

/// Number of singular values above max(tol_rel * sigma_max, abs_floor).
/// A matrix with sigma_max <= abs_floor has rank 0.
int numerical_rank(const CMat& m, const Tolerance& tol = default_tolerance());
int numerical_rank(const CMat& m, double tol_rel, double abs_floor = 1e-14);

/// m = vectors * diag(values) * vectors.adjoint(); values ascending.
/// Rejects inputs with ||m - m^H|| > contract * (1 + ||m||).
struct EigResult {
  RVec values;
  CMat vectors;
};

EigResult hermitian_eig(const CMat& m, const Tolerance& tol = default_tolerance());

/// Joint triangularization of a pencil: u, v unitary with u*a*v and u*b*v
/// both upper triangular. Sizes up to 8x8.
struct GenSchurResult {
  CMat u;
  CMat v;
  CMat ta;  // u*a*v
  CMat tb;  // u*b*v
};

GenSchurResult generalized_schur(const CMat& a, const CMat& b,
                                 const Tolerance& tol = default_tolerance());

/// Orthonormal basis of the right null space, one column per kernel vector.
/// Zero-column matrix when the kernel is trivial.
CMat kernel(const CMat& m, const Tolerance& tol = default_tolerance());

/// Orthonormal basis of the left null space: columns y with y^H m = 0.
CMat cokernel(const CMat& m, const Tolerance& tol = default_tolerance());

}  // namespace dfs
