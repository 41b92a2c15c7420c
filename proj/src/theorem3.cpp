#include "dfs/theorem3.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "dfs/linalg.hpp"

namespace dfs {
namespace {

/// Coefficients of det(a + z*b), a cubic in z, recovered exactly from the
/// four fourth roots of unity by the inverse discrete Fourier transform.
std::array<Cx, 4> pencil_det_coeffs(const CMat& a, const CMat& b) {
  std::array<Cx, 4> nodes{Cx(1, 0), Cx(0, 1), Cx(-1, 0), Cx(0, -1)};
  std::array<Cx, 4> vals;
  for (int k = 0; k < 4; ++k) vals[k] = CMat(a + nodes[k] * b).determinant();
  std::array<Cx, 4> coef;
  for (int j = 0; j < 4; ++j) {
    Cx s(0, 0);
    for (int k = 0; k < 4; ++k) s += vals[k] * std::conj(std::pow(nodes[k], j));
    coef[j] = s / 4.0;
  }
  return coef;
}

bool pencil_det_identically_zero(const CMat& a, const CMat& b) {
  const auto coef = pencil_det_coeffs(a, b);
  const double scale3 = std::pow(a.norm() + b.norm(), 3);
  double mx = 0;
  for (const Cx& c : coef) mx = std::max(mx, std::abs(c));
  return mx <= 1e-9 * (scale3 + 1e-30);
}

/// Max coefficient magnitude over the nine 2x2 minor quadratics of the
/// pencil a - gamma*b; zero means every span element has rank <= 1.
bool pencil_rank_le_one(const CMat& a, const CMat& b) {
  static constexpr int pair_[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  double mx = 0;
  for (const auto& r : pair_)
    for (const auto& c : pair_) {
      const int r1 = r[0], r2 = r[1], c1 = c[0], c2 = c[1];
      const Cx alpha = b(r1, c1) * b(r2, c2) - b(r1, c2) * b(r2, c1);
      const Cx delta = a(r1, c1) * a(r2, c2) - a(r1, c2) * a(r2, c1);
      const Cx beta = a(r1, c1) * b(r2, c2) + b(r1, c1) * a(r2, c2) -
                      a(r1, c2) * b(r2, c1) - b(r1, c2) * a(r2, c1);
      mx = std::max({mx, std::abs(alpha), std::abs(beta), std::abs(delta)});
    }
  const double scale2 = std::pow(a.norm() + b.norm(), 2);
  return mx <= 1e-10 * (scale2 + 1e-30);
}

/// One spanning direction only: a 2x2 zero corner exists iff the rank is
/// at most 2, witnessed by the two weakest left directions and the kernel
/// of what they leave behind.
TwoSpaceVerdict single_route(const CMat& c, const Tolerance& tol) {
  TwoSpaceVerdict out;
  if (numerical_rank(c, tol) == 3) {
    out.path = "single-full-rank";
    return out;
  }
  SvdResult sv = svd(c);
  out.v1 = sv.u.rightCols(2).adjoint();
  out.v2 = kernel(CMat(out.v1 * c), tol).leftCols(2);
  out.exists = true;
  out.path = "single";
  return out;
}

struct PinchedResult {
  bool exists = false;
  CMat v1, v2;  // rotated frame
};

/// Rotated frame with c2 = diag(0, wb, wa) and a zero first row on c: every
/// span element maps into the plane {e2, e3}, so a certificate needs a left
/// functional psi on that plane making psi*c proportional to psi*c2. The
/// first column forces psi up to scale, and the proportionality of the two
/// remaining columns is a single determinant obstruction.
PinchedResult pinched_row(const CMat& c, double wb, double wa, const Tolerance& tol) {
  PinchedResult out;
  const Cx phi1 = c(2, 0), phi2 = -c(1, 0);
  const Cx lhs1 = phi1 * c(1, 1) + phi2 * c(2, 1);
  const Cx lhs2 = phi1 * c(1, 2) + phi2 * c(2, 2);
  const Cx rhs1 = wb * phi1, rhs2 = wa * phi2;
  const Cx cross = lhs1 * rhs2 - lhs2 * rhs1;
  const double scale3 = std::pow(c.norm(), 2) * (wa + wb);
  if (std::abs(cross) > 1e-9 * (scale3 + 1e-30)) return out;

  CVec phi(3);
  phi << Cx(0, 0), phi1, phi2;
  phi /= phi.norm();
  out.v1 = CMat(2, 3);
  out.v1.row(0) = CVec::Unit(3, 0).transpose();
  out.v1.row(1) = phi.transpose();
  CMat row(1, 3);
  row << Cx(0, 0), wb * phi(1), wa * phi(2);
  out.v2 = kernel(row, tol).leftCols(2);
  out.exists = true;
  return out;
}

}  // namespace

TwoSpaceVerdict theorem3_2x2(const CMat& c1in, const CMat& c2in, const Tolerance& tol) {
  if (c1in.rows() != 3 || c1in.cols() != 3 || c2in.rows() != 3 || c2in.cols() != 3)
    throw ContractViolation("theorem3_2x2: expects 3x3 matrices");
  ensure_finite(c1in, "theorem3_2x2");
  ensure_finite(c2in, "theorem3_2x2");

  const double n1 = c1in.norm(), n2 = c2in.norm();
  if (n1 <= tol.abs_floor && n2 <= tol.abs_floor)
    throw ContractViolation("theorem3_2x2: zero span");

  auto finish = [&](TwoSpaceVerdict v) {
    if (v.exists) {
      double r = std::max((v.v1 * c1in * v.v2).norm(), (v.v1 * c2in * v.v2).norm());
      v.residual = r / std::max(n1, n2);
      if (v.residual > tol.residual)
        throw NumericalFailure("theorem3_2x2: path '" + v.path + "' certificate failed");
    }
    return v;
  };

  // collapse one-dimensional spans to the single-matrix route
  if (n1 <= tol.abs_floor) return finish(single_route(c2in / n2, tol));
  if (n2 <= tol.abs_floor) return finish(single_route(c1in / n1, tol));
  const CMat a = c1in / n1, b = c2in / n2;
  {
    CMat g(9, 2);
    g.col(0) = Eigen::Map<const CVec>(a.data(), 9);
    g.col(1) = Eigen::Map<const CVec>(b.data(), 9);
    if (numerical_rank(g, tol) < 2) return finish(single_route(a, tol));
  }

  // a full-rank element anywhere in the span is a terminal obstruction
  if (!pencil_det_identically_zero(a, b)) {
    TwoSpaceVerdict out;
    out.path = "rank-witness";
    return out;
  }

  if (pencil_rank_le_one(a, b)) {
    // rank-one span: a common column direction dies under u1, a common row
    // direction dies under v2
    TwoSpaceVerdict out;
    CMat hstack(3, 6), vstack(6, 3);
    hstack << a, b;
    vstack << a, b;
    if (numerical_rank(hstack, tol) == 1) {
      SvdResult sv = svd(hstack);
      out.v1 = svd(CMat(sv.u.col(0))).u.rightCols(2).adjoint();
      out.v2 = CMat::Identity(3, 3).leftCols(2);
      out.exists = true;
      out.path = "rank-one-column";
      return finish(out);
    }
    if (numerical_rank(vstack, tol) != 1)
      throw NumericalFailure("theorem3_2x2: inconsistent rank-one span");
    SvdResult sv = svd(vstack);
    out.v2 = kernel(CMat(sv.v.col(0).adjoint()), tol).leftCols(2);
    out.v1 = CMat::Identity(3, 3).topRows(2);
    out.exists = true;
    out.path = "rank-one-row";
    return finish(out);
  }

  // max rank two: rotate a rank-two element to diag(0, wb, wa). The second
  // input is the preferred pivot, then the first, then stabilizing
  // combinations, so well-conditioned pairs keep the canonical frame.
  std::array<CMat, 8> cands{b,          a,          a + b,           a - b,
                            a + 2.0 * b, a - 2.0 * b, a + Cx(0, 1) * b, a - Cx(0, 1) * b};
  std::array<double, 8> s2s{};
  double mx_s2 = 0;
  for (int i = 0; i < 8; ++i) {
    s2s[static_cast<std::size_t>(i)] = svd(cands[static_cast<std::size_t>(i)]).sigma(1);
    mx_s2 = std::max(mx_s2, s2s[static_cast<std::size_t>(i)]);
  }
  int pick = -1;
  for (int i = 0; i < 8; ++i) {
    if (s2s[static_cast<std::size_t>(i)] >= 1e-3 * mx_s2 &&
        numerical_rank(cands[static_cast<std::size_t>(i)], tol) == 2) {
      pick = i;
      break;
    }
  }
  if (pick < 0) throw NumericalFailure("theorem3_2x2: no rank-two element located");
  const CMat pivot = cands[static_cast<std::size_t>(pick)];
  const CMat partner = (pick == 1) ? b : a;  // keeps the pair spanning

  SvdResult psv = svd(pivot);
  const double wa = psv.sigma(0), wb = psv.sigma(1);
  CMat jflip = CMat::Zero(3, 3);
  jflip(0, 2) = jflip(1, 1) = jflip(2, 0) = Cx(1, 0);
  const CMat lrot = jflip * psv.u.adjoint();
  const CMat rrot = psv.v * jflip;
  const CMat c = lrot * partner * rrot;  // pivot becomes diag(0, wb, wa)

  if (std::abs(c(0, 0)) > 1e-6 * (1.0 + c.norm()))
    throw NumericalFailure("theorem3_2x2: rotated corner entry inconsistent with max rank two");

  const double rho = std::hypot(std::abs(c(0, 1)), std::abs(c(0, 2)));
  const double kap = std::hypot(std::abs(c(1, 0)), std::abs(c(2, 0)));
  const double eps_z = 1e-8 * (1.0 + c.norm());

  TwoSpaceVerdict out;
  CMat v1r, v2r;
  if (rho > eps_z && kap > eps_z) {
    // weighted cross pairing: the three vanishing pencil coefficients make
    // all four block entries cancel in closed form
    const double nn1 = std::sqrt(wa * wa * std::norm(c(0, 1)) + wb * wb * std::norm(c(0, 2)));
    const double nn2 = std::sqrt(wa * wa * std::norm(c(1, 0)) + wb * wb * std::norm(c(2, 0)));
    v1r = CMat::Zero(2, 3);
    v1r(0, 0) = Cx(1, 0);
    v1r(1, 1) = wa * c(0, 1) / nn1;
    v1r(1, 2) = wb * c(0, 2) / nn1;
    v2r = CMat::Zero(3, 2);
    v2r(0, 0) = Cx(1, 0);
    v2r(1, 1) = wa * c(1, 0) / nn2;
    v2r(2, 1) = wb * c(2, 0) / nn2;
    out.exists = true;
    out.path = "weighted-cross";
  } else if (rho <= eps_z && kap <= eps_z) {
    // both pinch pairs vanish: jointly triangularize the lower 2x2 blocks
    CMat l1 = c.block(1, 1, 2, 2);
    CMat l2 = CMat::Zero(2, 2);
    l2(0, 0) = wb;
    l2(1, 1) = wa;
    GenSchurResult gs = generalized_schur(l1, l2, tol);
    v1r = CMat::Zero(2, 3);
    v1r(0, 0) = Cx(1, 0);
    v1r(1, 1) = gs.u(1, 0);
    v1r(1, 2) = gs.u(1, 1);
    v2r = CMat::Zero(3, 2);
    v2r(0, 0) = Cx(1, 0);
    v2r(1, 1) = gs.v(0, 0);
    v2r(2, 1) = gs.v(1, 0);
    out.exists = true;
    out.path = "block-triangular";
  } else if (rho <= eps_z) {
    PinchedResult pr = pinched_row(c, wb, wa, tol);
    if (!pr.exists) {
      out.path = "pinched-row-obstruction";
      return out;
    }
    v1r = pr.v1;
    v2r = pr.v2;
    out.exists = true;
    out.path = "pinched-row";
  } else {
    // zero first column instead: transpose, reuse the row route, swap roles
    PinchedResult pr = pinched_row(c.transpose(), wb, wa, tol);
    if (!pr.exists) {
      out.path = "pinched-column-obstruction";
      return out;
    }
    v1r = pr.v2.transpose();
    v2r = pr.v1.transpose();
    out.exists = true;
    out.path = "pinched-column";
  }

  out.v1 = v1r * lrot;
  out.v2 = rrot * v2r;
  return finish(out);
}

}  // namespace dfs
