#pragma once

#include "dfs/linalg.hpp"
#include "dfs/types.hpp"

namespace dfs {

/// Pure state of a bipartite register; amps(k*d2 + l) is the coefficient of
/// the basis vector |k>|l>.
struct PureState {
  Eigen::Index d1 = 0;
  Eigen::Index d2 = 0;
  CVec amps;
};

PureState make_state(Eigen::Index d1, Eigen::Index d2, CVec amps);

bool is_normalized(const PureState& psi, double tol = 1e-10);
PureState normalized(const PureState& psi);

/// The d1 x d2 coefficient matrix c with c(k, l) = amps(k*d2 + l). Inner
/// products become trace pairings and local rotations one-sided products,
/// which is what every rank argument in this library runs on.
CMat to_schmidt(const PureState& psi);
PureState from_schmidt(const CMat& c);

/// <a|b> = tr(Ca^H Cb).
Cx overlap(const PureState& a, const PureState& b);

/// (u1 (x) u2)|psi>; the coefficient matrix maps to u1 * C * u2^T.
PureState local_rotate(const PureState& psi, const CMat& u1, const CMat& u2);

/// Number of nonzero Schmidt coefficients = rank of the coefficient matrix.
int schmidt_rank(const PureState& psi, const Tolerance& tol = default_tolerance());

}  // namespace dfs
