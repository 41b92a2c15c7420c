#include "dfs/schmidt.hpp"

namespace dfs {

PureState make_state(Eigen::Index d1, Eigen::Index d2, CVec amps) {
  ensure(d1 >= 1 && d2 >= 1, "make_state: dimensions must be positive");
  ensure(amps.size() == d1 * d2, "make_state: amplitude length must be d1*d2");
  ensure(amps.allFinite(), "make_state: non-finite amplitudes");
  return {d1, d2, std::move(amps)};
}

bool is_normalized(const PureState& psi, double tol) {
  return std::abs(psi.amps.norm() - 1.0) <= tol;
}

PureState normalized(const PureState& psi) {
  const double n = psi.amps.norm();
  ensure(n > 0, "normalized: zero state");
  return {psi.d1, psi.d2, psi.amps / n};
}

CMat to_schmidt(const PureState& psi) {
  ensure(psi.amps.size() == psi.d1 * psi.d2, "to_schmidt: malformed state");
  CMat c(psi.d1, psi.d2);
  for (Eigen::Index k = 0; k < psi.d1; ++k)
    for (Eigen::Index l = 0; l < psi.d2; ++l) c(k, l) = psi.amps(k * psi.d2 + l);
  return c;
}

PureState from_schmidt(const CMat& c) {
  ensure(c.rows() >= 1 && c.cols() >= 1, "from_schmidt: empty matrix");
  ensure_finite(c, "from_schmidt");
  CVec amps(c.rows() * c.cols());
  for (Eigen::Index k = 0; k < c.rows(); ++k)
    for (Eigen::Index l = 0; l < c.cols(); ++l) amps(k * c.cols() + l) = c(k, l);
  return {c.rows(), c.cols(), std::move(amps)};
}

Cx overlap(const PureState& a, const PureState& b) {
  ensure(a.d1 == b.d1 && a.d2 == b.d2, "overlap: dimension mismatch");
  return (to_schmidt(a).adjoint() * to_schmidt(b)).trace();
}

PureState local_rotate(const PureState& psi, const CMat& u1, const CMat& u2) {
  ensure(u1.rows() == psi.d1 && u1.cols() == psi.d1, "local_rotate: u1 must be d1 x d1");
  ensure(u2.rows() == psi.d2 && u2.cols() == psi.d2, "local_rotate: u2 must be d2 x d2");
  ensure((u1.adjoint() * u1 - CMat::Identity(psi.d1, psi.d1)).norm() <= 1e-10 * psi.d1,
         "local_rotate: u1 is not unitary");
  ensure((u2.adjoint() * u2 - CMat::Identity(psi.d2, psi.d2)).norm() <= 1e-10 * psi.d2,
         "local_rotate: u2 is not unitary");
  return from_schmidt(u1 * to_schmidt(psi) * u2.transpose());
}

int schmidt_rank(const PureState& psi, const Tolerance& tol) {
  return numerical_rank(to_schmidt(psi), tol);
}

}  // namespace dfs
