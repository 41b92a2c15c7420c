#include "dfs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace dfs {

SvdResult svd(const CMat& m) {
  ensure(m.rows() >= 1 && m.cols() >= 1, "svd: empty matrix");
  ensure_finite(m, "svd");
  Eigen::JacobiSVD<CMat> dec(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

int numerical_rank(const CMat& m, double tol_rel, double abs_floor) {
  ensure_finite(m, "numerical_rank");
  Eigen::JacobiSVD<CMat> dec(m);
  const RVec& s = dec.singularValues();
  if (s.size() == 0 || s(0) <= abs_floor) return 0;
  const double cut = tol_rel * s(0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

int numerical_rank(const CMat& m, const Tolerance& tol) {
  return numerical_rank(m, tol.rank_rel, tol.abs_floor);
}

EigResult hermitian_eig(const CMat& m, const Tolerance& tol) {
  ensure(m.rows() == m.cols(), "hermitian_eig: matrix must be square");
  ensure_finite(m, "hermitian_eig");
  const double dev = (m - m.adjoint()).norm();
  ensure(dev <= tol.contract * (1.0 + m.norm()),
         "hermitian_eig: input is not hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> dec(0.5 * (m + m.adjoint()));
  ensure(dec.info() == Eigen::Success, "hermitian_eig: solver failed");
  return {dec.eigenvalues(), dec.eigenvectors()};
}

CMat kernel(const CMat& m, const Tolerance& tol) {
  const SvdResult d = svd(m);
  const int r = numerical_rank(m, tol);
  return d.v.rightCols(m.cols() - r);
}

CMat cokernel(const CMat& m, const Tolerance& tol) {
  return kernel(CMat(m.adjoint()), tol);
}

// ---------------------------------------------------------------------------
// Joint triangularization by deflation.
//
// One pair (x, w) per step: x spans a joint invariant direction of the pencil
// a - z b (a generalized eigenvector), w the common image direction of a*x and
// b*x. Rotating x into e1 on the right and w into e1 on the left zeroes the
// first column of both matrices below the diagonal; recurse on the trailing
// block. Eigenvalues come from the roots of det(a - z b), interpolated on a
// scaled circle, and are sharpened by two-sided Rayleigh iteration, so the
// per-step defect stays near machine precision.
// ---------------------------------------------------------------------------

namespace {

// Unitary whose first column equals x (x need not be normalized).
CMat unitary_with_first_column(CVec x) {
  const double nx = x.norm();
  ensure(nx > 0, "unitary_with_first_column: zero vector");
  x /= nx;
  const Eigen::Index n = x.size();
  CMat m = CMat::Identity(n, n);
  m.col(0) = x;
  Eigen::HouseholderQR<CMat> qr(m);
  CMat q = qr.householderQ();
  const Cx s = q.col(0).dot(x);  // phase defect between q*e1 and x
  q.col(0) *= s;
  return q;
}

Cx det_of(const CMat& m) { return Eigen::FullPivLU<CMat>(m).determinant(); }

struct SmallestPair {
  double sigma;  // smallest singular value
  CVec right;    // its right singular vector
  CVec left;
};

SmallestPair smallest_singular(const CMat& m) {
  Eigen::JacobiSVD<CMat> dec(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Index last = m.cols() - 1;
  return {dec.singularValues()(last), dec.matrixV().col(last),
          dec.matrixU().col(last)};
}

// det(a - z b) as a polynomial in z, coefficients low to high, via inverse
// DFT on a circle of radius rho (balances the two norms).
std::vector<Cx> pencil_det_poly(const CMat& a, const CMat& b, double rho) {
  const int n = static_cast<int>(a.rows());
  const int nodes = n + 1;
  std::vector<Cx> samples(nodes);
  for (int j = 0; j < nodes; ++j) {
    const double ang = 2.0 * M_PI * j / nodes;
    const Cx z = rho * Cx(std::cos(ang), std::sin(ang));
    samples[j] = det_of(a - z * b);
  }
  std::vector<Cx> coeff(nodes);
  for (int k = 0; k < nodes; ++k) {
    Cx acc(0, 0);
    for (int j = 0; j < nodes; ++j) {
      const double ang = -2.0 * M_PI * j * k / nodes;
      acc += samples[j] * Cx(std::cos(ang), std::sin(ang));
    }
    coeff[k] = acc / (double(nodes) * std::pow(rho, k));
  }
  return coeff;
}

std::vector<Cx> poly_roots(const std::vector<Cx>& coeff, int degree) {
  if (degree < 1) return {};
  CMat comp = CMat::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) comp(i, degree - 1) = -coeff[i] / coeff[degree];
  Eigen::ComplexEigenSolver<CMat> dec(comp);
  std::vector<Cx> roots;
  for (Eigen::Index i = 0; i < degree; ++i) {
    const Cx z = dec.eigenvalues()(i);
    if (std::isfinite(z.real()) && std::isfinite(z.imag())) roots.push_back(z);
  }
  std::sort(roots.begin(), roots.end(), [](const Cx& p, const Cx& q) {
    if (p.real() != q.real()) return p.real() < q.real();
    return p.imag() < q.imag();
  });
  return roots;
}

// Two-sided Rayleigh sharpening of a generalized eigenvalue estimate.
Cx polish_eigenvalue(const CMat& a, const CMat& b, Cx z) {
  for (int it = 0; it < 3; ++it) {
    const SmallestPair p = smallest_singular(a - z * b);
    const Cx den = p.left.dot(b * p.right);
    const Cx num = p.left.dot(a * p.right);
    if (std::abs(den) < 1e-300) break;
    const Cx next = num / den;
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
    z = next;
  }
  return z;
}

// Joint invariant direction for one deflation step.
CVec deflation_vector(const CMat& a, const CMat& b) {
  const int n = static_cast<int>(a.rows());
  const double na = a.norm(), nb = b.norm();
  double rho = (nb > 0) ? na / nb : 1.0;
  rho = std::clamp(rho, 1e-8, 1e8);
  if (rho == 0 || !std::isfinite(rho)) rho = 1.0;

  const std::vector<Cx> coeff = pencil_det_poly(a, b, rho);
  double cmax = 0;
  for (const Cx& c : coeff) cmax = std::max(cmax, std::abs(c));
  int degree = 0;
  for (int k = n; k >= 0; --k) {
    if (std::abs(coeff[k]) > 1e-12 * cmax) {
      degree = k;
      break;
    }
  }

  struct Candidate {
    bool infinite;
    Cx z;
  };
  std::vector<Candidate> cands;
  if (cmax > 0) {
    for (const Cx& z : poly_roots(coeff, degree))
      if (std::abs(z) <= 1e12 * rho) cands.push_back({false, z});
  }
  if (degree < n && nb > 0) cands.push_back({true, Cx(0, 0)});
  // Last-resort probe; for a pencil singular at every z it succeeds anywhere.
  cands.push_back({false, rho * Cx(0.8319584, 0.5548795)});

  double best_score = std::numeric_limits<double>::infinity();
  CVec best_x;
  for (const Candidate& c : cands) {
    double score;
    CVec x;
    if (c.infinite) {
      const SmallestPair p = smallest_singular(b);
      score = (nb > 0) ? p.sigma / nb : 0.0;
      x = p.right;
    } else {
      const Cx z = polish_eigenvalue(a, b, c.z);
      const SmallestPair p = smallest_singular(a - z * b);
      score = p.sigma / (na + std::abs(z) * nb + 1e-300);
      x = p.right;
    }
    if (score < best_score) {
      best_score = score;
      best_x = x;
    }
    if (best_score < 1e-14) break;
  }
  return best_x;
}

}  // namespace

GenSchurResult generalized_schur(const CMat& a, const CMat& b, const Tolerance& tol) {
  ensure(a.rows() == a.cols() && b.rows() == b.cols() && a.rows() == b.rows(),
         "generalized_schur: need two square matrices of the same size");
  ensure(a.rows() >= 1 && a.rows() <= 8, "generalized_schur: size must be 1..8");
  ensure_finite(a, "generalized_schur");
  ensure_finite(b, "generalized_schur");

  const Eigen::Index d = a.rows();
  CMat u = CMat::Identity(d, d);
  CMat v = CMat::Identity(d, d);
  CMat ta = a;
  CMat tb = b;
  const double scale = a.norm() + b.norm();

  for (Eigen::Index k = 0; k + 1 < d; ++k) {
    const Eigen::Index n = d - k;
    const CMat ak = ta.block(k, k, n, n);
    const CMat bk = tb.block(k, k, n, n);

    // A numerically vanished block pair: any unitaries keep it triangular.
    if (ak.norm() + bk.norm() <= tol.abs_floor * (1.0 + scale)) break;

    // One factor gone: the singular value decomposition of the other finishes
    // the whole trailing block in a single stroke.
    if (bk.norm() <= tol.abs_floor * (1.0 + scale) ||
        ak.norm() <= tol.abs_floor * (1.0 + scale)) {
      const SvdResult s = svd(bk.norm() > ak.norm() ? bk : ak);
      const CMat uk = s.u.adjoint();
      const CMat vk = s.v;
      ta.bottomRows(n) = uk * ta.bottomRows(n);
      tb.bottomRows(n) = uk * tb.bottomRows(n);
      ta.rightCols(n) = ta.rightCols(n) * vk;
      tb.rightCols(n) = tb.rightCols(n) * vk;
      u.bottomRows(n) = uk * u.bottomRows(n);
      v.rightCols(n) = v.rightCols(n) * vk;
      break;
    }

    const CVec x = deflation_vector(ak, bk);
    const CMat vk = unitary_with_first_column(x);
    const CVec ax = ak * x;
    const CVec bx = bk * x;
    CMat uk;
    const double nax = ax.norm(), nbx = bx.norm();
    if (std::max(nax, nbx) <= tol.abs_floor * (1.0 + scale)) {
      uk = CMat::Identity(n, n);
    } else {
      uk = unitary_with_first_column(nax >= nbx ? ax : bx).adjoint();
    }

    ta.bottomRows(n) = uk * ta.bottomRows(n);
    tb.bottomRows(n) = uk * tb.bottomRows(n);
    ta.rightCols(n) = ta.rightCols(n) * vk;
    tb.rightCols(n) = tb.rightCols(n) * vk;
    u.bottomRows(n) = uk * u.bottomRows(n);
    v.rightCols(n) = v.rightCols(n) * vk;
  }

  // Honest output: the defect below the diagonal is whatever the deflation
  // achieved; callers assert it against their own tolerance.
  double defect = 0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      defect = std::max(defect, std::max(std::abs(ta(i, j)), std::abs(tb(i, j))));
  if (defect > 1e-6 * (1.0 + scale))
    throw NumericalFailure("generalized_schur: triangularization defect " +
                           std::to_string(defect));
  return {u, v, ta, tb};
}

}  // namespace dfs
