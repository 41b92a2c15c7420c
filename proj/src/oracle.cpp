#include "dfs/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "dfs/optim.hpp"

namespace dfs {
namespace {

// The routines here stay deliberately elementary: singular values, plain
// loops and a derivative-free optimizer, nothing from the exact layers.

std::vector<CMat> local_orthonormal(const MatrixSpace& sp, const Tolerance& tol) {
  std::vector<CMat> out;
  if (sp.basis.empty()) return out;
  CMat g(sp.rows * sp.cols, static_cast<Eigen::Index>(sp.basis.size()));
  for (std::size_t i = 0; i < sp.basis.size(); ++i)
    g.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const CVec>(sp.basis[i].data(), g.rows());
  SvdResult sv = svd(g);
  const int r = numerical_rank(g, tol);
  for (int i = 0; i < r; ++i) {
    CVec col = sv.u.col(i);
    out.push_back(Eigen::Map<const CMat>(col.data(), sp.rows, sp.cols));
  }
  return out;
}

double max_norm(const std::vector<CMat>& basis) {
  double m = 0;
  for (const auto& b : basis) m = std::max(m, b.norm());
  return m;
}

CMat stack_rows(const std::vector<CMat>& basis, const CMat& v1) {
  const auto q = static_cast<Eigen::Index>(basis.size());
  const Eigen::Index m = v1.rows(), b = basis.front().cols();
  CMat s(q * m, b);
  for (Eigen::Index i = 0; i < q; ++i) s.middleRows(i * m, m) = v1 * basis[static_cast<std::size_t>(i)];
  return s;
}

double sig_at(const RVec& sig, Eigen::Index idx) {
  return idx < sig.size() ? sig(idx) : 0.0;
}

/// Relative sigma_{b-n+1} of the stacked compressed rows; zero means the
/// kernel is wide enough to hold v2.
double stack_score(const std::vector<CMat>& basis, const CMat& v1, int n) {
  const RVec sig = svd(stack_rows(basis, v1)).sigma;
  const Eigen::Index jdx = basis.front().cols() - n;
  const double top = sig_at(sig, 0);
  if (top <= 1e-300) return 0.0;
  return sig_at(sig, jdx) / top;
}

/// Eigenvalues of a 3x3 hermitian matrix, descending, by the trigonometric
/// closed form; cheap enough for a dense grid sweep.
std::array<double, 3> eig3_desc(const CMat& g) {
  const double q = std::real(g(0, 0) + g(1, 1) + g(2, 2)) / 3.0;
  const double p1 = std::norm(g(0, 1)) + std::norm(g(0, 2)) + std::norm(g(1, 2));
  const double p2 = std::pow(std::real(g(0, 0)) - q, 2) + std::pow(std::real(g(1, 1)) - q, 2) +
                    std::pow(std::real(g(2, 2)) - q, 2) + 2.0 * p1;
  if (p2 <= 1e-300) return {q, q, q};
  const double p = std::sqrt(p2 / 6.0);
  CMat b = (g - q * CMat::Identity(3, 3)) / p;
  double detb = std::real(b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                          b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                          b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0)));
  const double r = std::clamp(detb / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double two_pi_3 = 2.0 * std::numbers::pi / 3.0;
  const double l1 = q + 2.0 * p * std::cos(phi);
  const double l3 = q + 2.0 * p * std::cos(phi + two_pi_3);
  return {l1, 3.0 * q - l1 - l3, l3};
}

CVec sphere_point(double t1, double t2, double f1, double f2) {
  CVec u(3);
  u(0) = Cx(std::cos(t1), 0);
  u(1) = std::sin(t1) * std::cos(t2) * Cx(std::cos(f1), std::sin(f1));
  u(2) = std::sin(t1) * std::sin(t2) * Cx(std::cos(f2), std::sin(f2));
  return u;
}

/// v1 = orthogonal complement of the line u, as two orthonormal rows.
CMat complement_rows(const CVec& u) {
  SvdResult sv = svd(CMat(u));
  return sv.u.rightCols(2).adjoint();
}

CMat rows_from_raw(const CMat& raw, int m) {
  // orthonormal rows spanning the row space of raw
  SvdResult sv = svd(raw);
  return sv.v.leftCols(m).adjoint();
}

struct Polished {
  CMat u1, v2;
  double residual = std::numeric_limits<double>::infinity();
};

Polished polish(const std::vector<CMat>& basis, CMat v1, int n, int sweeps, double maxn) {
  const Eigen::Index a = basis.front().rows();
  const auto q = static_cast<Eigen::Index>(basis.size());
  const Eigen::Index m = v1.rows();
  Polished out;
  for (int it = 0; it < sweeps; ++it) {
    CMat v2 = svd(stack_rows(basis, v1)).v.rightCols(n);
    CMat cols(a, q * n);
    for (Eigen::Index i = 0; i < q; ++i) cols.middleCols(i * n, n) = basis[static_cast<std::size_t>(i)] * v2;
    v1 = svd(cols).u.rightCols(m).adjoint();
    double resid = 0;
    for (const auto& c : basis) resid = std::max(resid, (v1 * c * v2).norm());
    resid /= maxn;
    if (resid < out.residual) {
      out.residual = resid;
      out.u1 = v1;
      out.v2 = v2;
    }
    if (resid < 1e-15) break;
  }
  return out;
}

}  // namespace

SearchOutcome search_zero_block(const MatrixSpace& sp, int m, int n, const SearchBudget& budget,
                                const Tolerance& tol) {
  const Eigen::Index a = sp.rows, b = sp.cols;
  if (m < 1 || m > a || n < 1 || n > b)
    throw ContractViolation("search_zero_block: block outside matrix shape");

  SearchOutcome out;
  if (sp.basis.empty()) {
    DecompCertificate cert;
    cert.t = static_cast<int>(a) - m;
    cert.s = static_cast<int>(b) - n;
    cert.u1 = CMat::Identity(a, a).topRows(m);
    cert.v2 = CMat::Identity(b, b).leftCols(n);
    out.found = cert;
    out.min_score = 0;
    return out;
  }

  const std::vector<CMat> basis = local_orthonormal(sp, tol);
  const double maxn = std::max(max_norm(sp.basis), 1e-300);
  const auto q = static_cast<Eigen::Index>(basis.size());

  struct Candidate {
    double score;
    CMat v1;
  };
  std::vector<Candidate> top;
  auto offer = [&](double score, const CMat& v1) {
    out.min_score = std::min(out.min_score, score);
    top.push_back({score, v1});
    std::sort(top.begin(), top.end(),
              [](const Candidate& x, const Candidate& y) { return x.score < y.score; });
    if (top.size() > 12) top.pop_back();
  };

  const bool grid_mode = (a == 3 && m == 2);
  Rng rng(budget.seed);

  if (grid_mode) {
    // Fubini-Study sweep of the complement line u: two polar angles against
    // the grid, two phases, and the score read off the 3x3 Gram matrix
    // G0 - W W^H in closed form.
    CMat g0 = CMat::Zero(3, 3);
    for (const auto& c : basis) g0 += c.adjoint() * c;
    const int den = std::max(4, budget.grid_density);
    const double half_pi = std::numbers::pi / 2.0;
    const Eigen::Index jdx = b - n;  // 0-based index of sigma_{b-n+1}
    std::vector<CMat> adjc;
    adjc.reserve(basis.size());
    for (const auto& c : basis) adjc.push_back(c.adjoint());
    std::vector<double> tv(static_cast<std::size_t>(den)), ctv(static_cast<std::size_t>(den)),
        stv(static_cast<std::size_t>(den)), fv(static_cast<std::size_t>(den));
    std::vector<Cx> phv(static_cast<std::size_t>(den));
    for (int i = 0; i < den; ++i) {
      tv[static_cast<std::size_t>(i)] = (i + 0.5) * half_pi / den;
      ctv[static_cast<std::size_t>(i)] = std::cos(tv[static_cast<std::size_t>(i)]);
      stv[static_cast<std::size_t>(i)] = std::sin(tv[static_cast<std::size_t>(i)]);
      fv[static_cast<std::size_t>(i)] = i * 2.0 * std::numbers::pi / den;
      phv[static_cast<std::size_t>(i)] = std::polar(1.0, fv[static_cast<std::size_t>(i)]);
    }
    double best_slice = std::numeric_limits<double>::infinity();
    std::array<double, 4> best_angles{0, 0, 0, 0};
    double best_val = std::numeric_limits<double>::infinity();
    CMat w(3, q), g(3, 3);
    CVec u(3);
    for (int i1 = 0; i1 < den; ++i1) {
      best_slice = std::numeric_limits<double>::infinity();
      u(0) = Cx(ctv[static_cast<std::size_t>(i1)], 0);
      for (int i2 = 0; i2 < den; ++i2) {
        const double m1 = stv[static_cast<std::size_t>(i1)] * ctv[static_cast<std::size_t>(i2)];
        const double m2 = stv[static_cast<std::size_t>(i1)] * stv[static_cast<std::size_t>(i2)];
        for (int i3 = 0; i3 < den; ++i3) {
          u(1) = m1 * phv[static_cast<std::size_t>(i3)];
          for (int i4 = 0; i4 < den; ++i4) {
            u(2) = m2 * phv[static_cast<std::size_t>(i4)];
            for (Eigen::Index k = 0; k < q; ++k)
              w.col(k).noalias() = adjc[static_cast<std::size_t>(k)] * u;
            g = g0;
            g.noalias() -= w * w.adjoint();
            const auto lam = eig3_desc(g);
            ++out.evaluations;
            const double topv = std::sqrt(std::max(lam[0], 0.0));
            const double val =
                topv <= 1e-300 ? 0.0
                               : std::sqrt(std::max(lam[static_cast<std::size_t>(jdx)], 0.0)) / topv;
            best_slice = std::min(best_slice, val);
            if (val < best_val) {
              best_val = val;
              best_angles = {tv[static_cast<std::size_t>(i1)], tv[static_cast<std::size_t>(i2)],
                             fv[static_cast<std::size_t>(i3)], fv[static_cast<std::size_t>(i4)]};
            }
          }
        }
      }
      out.sweep_curve.push_back(best_slice);
      if (best_val < budget.tol / 10) break;  // the sweep already pinned an exact zero
    }
    offer(best_val, complement_rows(sphere_point(best_angles[0], best_angles[1], best_angles[2],
                                                 best_angles[3])));

    // local refinement in angle space around the sweep optimum
    auto angle_score = [&](const Eigen::VectorXd& x) {
      ++out.evaluations;
      return stack_score(basis, complement_rows(sphere_point(x(0), x(1), x(2), x(3))), n);
    };
    Eigen::VectorXd start(4);
    start << best_angles[0], best_angles[1], best_angles[2], best_angles[3];
    SimplexResult nm = nelder_mead(angle_score, start, half_pi / den, budget.max_iters);
    offer(nm.value, complement_rows(sphere_point(nm.x(0), nm.x(1), nm.x(2), nm.x(3))));
  }

  // random isometry restarts; the only stage for general shapes, a safety
  // net after the sweep for the projective one
  const int restarts = grid_mode ? std::max(budget.restarts / 8, 8) : budget.restarts;
  for (int rep = 0; rep < restarts; ++rep) {
    CMat raw(m, a);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < a; ++j) raw(i, j) = rng.cgauss();
    CMat v1 = rows_from_raw(raw, m);
    double sc = stack_score(basis, v1, n);
    ++out.evaluations;
    offer(sc, v1);

    if (rep < std::max(4, restarts / 8)) {
      auto raw_score = [&](const Eigen::VectorXd& x) {
        ++out.evaluations;
        CMat r2(m, a);
        for (Eigen::Index i = 0; i < m; ++i)
          for (Eigen::Index j = 0; j < a; ++j)
            r2(i, j) = Cx(x(2 * (i * a + j)), x(2 * (i * a + j) + 1));
        return stack_score(basis, rows_from_raw(r2, m), n);
      };
      Eigen::VectorXd x0(2 * m * a);
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < a; ++j) {
          x0(2 * (i * a + j)) = raw(i, j).real();
          x0(2 * (i * a + j) + 1) = raw(i, j).imag();
        }
      SimplexResult nm = nelder_mead(raw_score, x0, 0.3, budget.max_iters);
      CMat r2(m, a);
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < a; ++j)
          r2(i, j) = Cx(nm.x(2 * (i * a + j)), nm.x(2 * (i * a + j) + 1));
      offer(nm.value, rows_from_raw(r2, m));
    }
  }

  // alternating projection polish of the short list
  double best_polished = std::numeric_limits<double>::infinity();
  Polished best;
  for (const auto& cand : top) {
    Polished p = polish(sp.basis, cand.v1, n, 60, maxn);
    if (p.residual < best_polished) {
      best_polished = p.residual;
      best = p;
    }
    if (best_polished < budget.tol / 100) break;
  }
  out.min_score = std::min(out.min_score, best_polished);

  if (best_polished <= budget.tol) {
    DecompCertificate cert;
    cert.t = static_cast<int>(a) - m;
    cert.s = static_cast<int>(b) - n;
    cert.u1 = best.u1;
    cert.v2 = best.v2;
    cert.residual = best_polished;
    out.found = cert;
  } else if (best_polished <= 1e-6) {
    out.near_miss = true;
  }
  return out;
}

CertificateAudit verify_certificate(const MatrixSpace& sp, const DecompCertificate& cert,
                                    const Tolerance& tol) {
  CertificateAudit audit;
  const Eigen::Index a = sp.rows, b = sp.cols;
  const Eigen::Index m = cert.u1.rows(), n = cert.v2.cols();
  if (cert.u1.cols() != a || cert.v2.rows() != b)
    throw ContractViolation("verify_certificate: certificate shape mismatch");

  double maxn = 0;
  for (const auto& c : sp.basis) {
    double s = 0;
    for (Eigen::Index i = 0; i < a; ++i)
      for (Eigen::Index j = 0; j < b; ++j) s += std::norm(c(i, j));
    maxn = std::max(maxn, std::sqrt(s));
  }

  double worst = 0;
  for (const auto& c : sp.basis) {
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        Cx acc(0, 0);
        for (Eigen::Index p = 0; p < a; ++p)
          for (Eigen::Index r = 0; r < b; ++r) acc += cert.u1(i, p) * c(p, r) * cert.v2(r, j);
        worst = std::max(worst, std::abs(acc));
      }
  }
  audit.block_residual = maxn > 0 ? worst / maxn : 0.0;

  double defect = 0;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      Cx acc(0, 0);
      for (Eigen::Index p = 0; p < a; ++p) acc += cert.u1(i, p) * std::conj(cert.u1(j, p));
      defect = std::max(defect, std::abs(acc - (i == j ? Cx(1, 0) : Cx(0, 0))));
    }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      Cx acc(0, 0);
      for (Eigen::Index p = 0; p < b; ++p) acc += std::conj(cert.v2(p, i)) * cert.v2(p, j);
      defect = std::max(defect, std::abs(acc - (i == j ? Cx(1, 0) : Cx(0, 0))));
    }
  audit.isometry_defect = defect;
  audit.accepted = audit.block_residual <= tol.residual && defect <= tol.residual;
  return audit;
}

CertificateAudit verify_code_certificate(const CMat& u, const CMat& r, const CMat& r_prime,
                                         Cx lambda, const Tolerance& tol) {
  const Eigen::Index d = r.rows();
  if (r_prime.rows() != d) throw ContractViolation("verify_code_certificate: factor dims differ");
  if (u.rows() != d * d || u.cols() != d * d)
    throw ContractViolation("verify_code_certificate: unitary must act on the product space");
  if (r.cols() < 1 || r_prime.cols() < 1)
    throw ContractViolation("verify_code_certificate: empty code factor");

  // local projectors from the isometries, by plain loops
  auto projector = [d](const CMat& iso) {
    CMat p = CMat::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) {
        Cx acc(0, 0);
        for (Eigen::Index k = 0; k < iso.cols(); ++k) acc += iso(i, k) * std::conj(iso(j, k));
        p(i, j) = acc;
      }
    return p;
  };
  const CMat p1 = projector(r), p2 = projector(r_prime);

  const Eigen::Index dd = d * d;
  CMat pi(dd, dd);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index k = 0; k < d; ++k)
        for (Eigen::Index l = 0; l < d; ++l) pi(i * d + j, k * d + l) = p1(i, k) * p2(j, l);

  CMat tmp(dd, dd), lhs(dd, dd);
  for (Eigen::Index i = 0; i < dd; ++i)
    for (Eigen::Index j = 0; j < dd; ++j) {
      Cx acc(0, 0);
      for (Eigen::Index k = 0; k < dd; ++k) acc += u(i, k) * pi(k, j);
      tmp(i, j) = acc;
    }
  for (Eigen::Index i = 0; i < dd; ++i)
    for (Eigen::Index j = 0; j < dd; ++j) {
      Cx acc(0, 0);
      for (Eigen::Index k = 0; k < dd; ++k) acc += pi(i, k) * tmp(k, j);
      lhs(i, j) = acc;
    }

  CertificateAudit audit;
  double worst = 0;
  for (Eigen::Index i = 0; i < dd; ++i)
    for (Eigen::Index j = 0; j < dd; ++j)
      worst = std::max(worst, std::abs(lhs(i, j) - lambda * pi(i, j)));
  audit.block_residual = worst;

  double defect = 0;
  auto iso_defect = [&defect](const CMat& iso) {
    for (Eigen::Index i = 0; i < iso.cols(); ++i)
      for (Eigen::Index j = 0; j < iso.cols(); ++j) {
        Cx acc(0, 0);
        for (Eigen::Index p = 0; p < iso.rows(); ++p) acc += std::conj(iso(p, i)) * iso(p, j);
        defect = std::max(defect, std::abs(acc - (i == j ? Cx(1, 0) : Cx(0, 0))));
      }
  };
  iso_defect(r);
  iso_defect(r_prime);
  audit.isometry_defect = defect;
  audit.accepted = worst <= tol.residual && defect <= tol.residual;
  return audit;
}

}  // namespace dfs
