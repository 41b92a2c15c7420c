#include "dfs/rankspace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "dfs/optim.hpp"
#include "dfs/oracle.hpp"
#include "dfs/theorem3.hpp"

namespace dfs {
namespace {

CVec vectorize(const CMat& m) { return Eigen::Map<const CVec>(m.data(), m.size()); }

CMat combine(const std::vector<CMat>& basis, const CVec& alpha) {
  CMat m = CMat::Zero(basis.front().rows(), basis.front().cols());
  for (std::size_t i = 0; i < basis.size(); ++i) m += alpha(static_cast<Eigen::Index>(i)) * basis[i];
  return m;
}

CVec random_unit(Rng& rng, Eigen::Index n) {
  CVec x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = rng.cgauss();
  return x / x.norm();
}

double max_basis_norm(const std::vector<CMat>& basis) {
  double m = 0;
  for (const auto& b : basis) m = std::max(m, b.norm());
  return m;
}

/// det(sum x_i B_i) is a homogeneous cubic on a span of 3x3 matrices; its
/// coefficients are recovered by least squares over fixed random sample
/// points, so "identically zero" is a certified statement, not a sampling
/// heuristic. The fit residual is checked to guard against conditioning.
bool det_identically_zero(const std::vector<CMat>& basis) {
  const int q = static_cast<int>(basis.size());
  std::vector<std::array<int, 3>> monos;
  for (int i = 0; i < q; ++i)
    for (int j = i; j < q; ++j)
      for (int k = j; k < q; ++k) monos.push_back({i, j, k});
  const int m = static_cast<int>(monos.size());
  const int n_pts = 4 * m;

  Rng rng(0x00c0ffeeULL);
  CMat vand(n_pts, m);
  CVec dets(n_pts);
  for (int p = 0; p < n_pts; ++p) {
    CVec x = random_unit(rng, q);
    dets(p) = combine(basis, x).determinant();
    for (int j = 0; j < m; ++j) vand(p, j) = x(monos[j][0]) * x(monos[j][1]) * x(monos[j][2]);
  }
  CVec coef = vand.colPivHouseholderQr().solve(dets);
  const double fit = (vand * coef - dets).norm();
  if (fit > 1e-8 * (1.0 + dets.norm()))
    throw NumericalFailure("determinant interpolation is ill conditioned");

  const double scale = std::pow(std::sqrt(static_cast<double>(q)) * max_basis_norm(basis), 3);
  return coef.cwiseAbs().maxCoeff() <= 1e-10 * (scale + 1e-30);
}

/// Closed-form coefficients of the nine 2x2 minors of c1 - gamma*c2, each a
/// quadratic alpha*gamma^2 + beta*gamma + delta. Covers the full projective
/// pencil: alpha collects the minors of c2 itself.
struct MinorQuadratic {
  Cx alpha, beta, delta;
};

std::array<MinorQuadratic, 9> pencil_minors(const CMat& a, const CMat& b) {
  static constexpr int pair_[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  std::array<MinorQuadratic, 9> out;
  int idx = 0;
  for (const auto& r : pair_)
    for (const auto& c : pair_) {
      const int r1 = r[0], r2 = r[1], c1 = c[0], c2 = c[1];
      out[idx].alpha = b(r1, c1) * b(r2, c2) - b(r1, c2) * b(r2, c1);
      out[idx].delta = a(r1, c1) * a(r2, c2) - a(r1, c2) * a(r2, c1);
      out[idx].beta = -(a(r1, c1) * b(r2, c2) + b(r1, c1) * a(r2, c2) -
                        a(r1, c2) * b(r2, c1) - b(r1, c2) * a(r2, c1));
      ++idx;
    }
  return out;
}

bool pencil_all_minors_zero(const CMat& a, const CMat& b) {
  const auto ms = pencil_minors(a, b);
  const double scale2 = std::pow(a.norm() + b.norm(), 2);
  double mx = 0;
  for (const auto& m : ms)
    mx = std::max({mx, std::abs(m.alpha), std::abs(m.beta), std::abs(m.delta)});
  return mx <= 1e-10 * (scale2 + 1e-30);
}

/// Kernel-line case of the plane-line layer: every witnessed rank-2 kernel
/// points along khat, so an admissible plane is span{khat, w} with w taken
/// from the orthogonal complement of khat. Stacking the fixed images
/// c_i khat with the movable images c_i w, rank <= 1 of the stack means all
/// its 2x2 minors vanish: quadratics in w from movable pairs, linear forms
/// from fixed-movable pairs, constants from fixed pairs. A true solution
/// zeroes every minor, so it lies among the projective roots of any one
/// nonzero quadratic (or in the nullspace of the linear system when all
/// quadratics vanish, or is arbitrary when everything vanishes). Each
/// candidate is settled against the full stack, so both verdicts are exact;
/// only murky margins fall through to the search layer.
std::optional<DecompResult> kernel_line_case(const std::vector<CMat>& basis, const CVec& khat,
                                             int t, int s, const Tolerance& tol) {
  const auto q = static_cast<Eigen::Index>(basis.size());
  SvdResult kv = svd(CMat(khat));
  const CMat w0 = kv.u.rightCols(2);

  std::vector<CMat> movable;
  movable.reserve(basis.size());
  CMat fixed(3, q);
  double bscale = 0;
  for (Eigen::Index i = 0; i < q; ++i) {
    movable.push_back(basis[static_cast<std::size_t>(i)] * w0);
    fixed.col(i) = basis[static_cast<std::size_t>(i)] * khat;
    bscale = std::max(bscale, movable.back().norm());
  }
  if (bscale <= tol.abs_floor) return std::nullopt;  // upstream layers own this

  // the fixed images alone already have to fit one line
  SvdResult fs = svd(fixed);
  if (fs.sigma(0) > tol.abs_floor && fs.sigma(1) >= 1e-6 * fs.sigma(0)) {
    DecompResult res;
    res.status = DecompStatus::RefutedExact;
    res.layer = "kernel-line-mismatch";
    return res;
  }

  auto stack_of = [&](const CVec& w) {
    CMat st(3, 2 * q);
    st.leftCols(q) = fixed;
    for (Eigen::Index i = 0; i < q; ++i)
      st.col(q + i) = movable[static_cast<std::size_t>(i)] * w;
    return st;
  };
  auto score_of = [&](const CVec& w) {
    SvdResult st = svd(stack_of(w));
    return st.sigma(0) > tol.abs_floor ? st.sigma(1) / st.sigma(0) : 0.0;
  };

  // pivot quadratic: the largest 2x2 minor coefficient triple over movable pairs
  const double qscale = bscale * bscale;
  Cx c20, c11, c02;
  double mxcoeff = 0;
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = i + 1; j < q; ++j) {
      const CMat& bi = movable[static_cast<std::size_t>(i)];
      const CMat& bj = movable[static_cast<std::size_t>(j)];
      for (int r1 = 0; r1 < 3; ++r1)
        for (int r2 = r1 + 1; r2 < 3; ++r2) {
          const Cx a0 = bi(r1, 0) * bj(r2, 0) - bi(r2, 0) * bj(r1, 0);
          const Cx a1 = bi(r1, 0) * bj(r2, 1) + bi(r1, 1) * bj(r2, 0) -
                        bi(r2, 0) * bj(r1, 1) - bi(r2, 1) * bj(r1, 0);
          const Cx a2 = bi(r1, 1) * bj(r2, 1) - bi(r2, 1) * bj(r1, 1);
          const double mc = std::max({std::abs(a0), std::abs(a1), std::abs(a2)});
          if (mc > mxcoeff) {
            mxcoeff = mc;
            c20 = a0;
            c11 = a1;
            c02 = a2;
          }
        }
    }

  std::vector<CVec> cands;
  auto push = [&](Cx w0c, Cx w1c) {
    CVec w(2);
    w << w0c, w1c;
    const double n = w.norm();
    if (n > tol.abs_floor) cands.push_back(w / n);
  };

  if (mxcoeff > 1e-10 * qscale) {
    // projective roots of c20 w0^2 + c11 w0 w1 + c02 w1^2 (w = (1,t) plus infinity)
    if (std::abs(c02) >= 1e-8 * mxcoeff) {
      const Cx disc = std::sqrt(c11 * c11 - 4.0 * c02 * c20);
      const Cx h = (std::abs(c11 + disc) >= std::abs(c11 - disc)) ? -(c11 + disc) / 2.0
                                                                  : -(c11 - disc) / 2.0;
      push(Cx(1, 0), h / c02);
      if (std::abs(h) > tol.abs_floor) push(Cx(1, 0), c20 / h);
    } else {
      push(Cx(0, 0), Cx(1, 0));
      if (std::abs(c11) >= 1e-8 * mxcoeff) push(Cx(1, 0), -c20 / c11);
    }
  } else {
    // all quadratics vanish: the fixed-movable minors, linear in w, take over
    std::vector<std::pair<Cx, Cx>> lrows;
    double lscale = 0;
    for (Eigen::Index i = 0; i < q; ++i)
      for (Eigen::Index j = 0; j < q; ++j) {
        const CMat& bj = movable[static_cast<std::size_t>(j)];
        for (int r1 = 0; r1 < 3; ++r1)
          for (int r2 = r1 + 1; r2 < 3; ++r2) {
            const Cx l0 = fixed(r1, i) * bj(r2, 0) - fixed(r2, i) * bj(r1, 0);
            const Cx l1 = fixed(r1, i) * bj(r2, 1) - fixed(r2, i) * bj(r1, 1);
            lrows.emplace_back(l0, l1);
            lscale = std::max({lscale, std::abs(l0), std::abs(l1)});
          }
      }
    if (lscale > 1e-10 * bscale * (fs.sigma(0) + tol.abs_floor)) {
      CMat lmat(static_cast<Eigen::Index>(lrows.size()), 2);
      for (std::size_t r = 0; r < lrows.size(); ++r) {
        lmat(static_cast<Eigen::Index>(r), 0) = lrows[r].first;
        lmat(static_cast<Eigen::Index>(r), 1) = lrows[r].second;
      }
      SvdResult ls = svd(lmat);
      push(ls.v(0, 1), ls.v(1, 1));
      if (ls.sigma(1) <= 1e-8 * ls.sigma(0)) {
        push(Cx(1, 0), Cx(0, 0));
        push(Cx(0, 0), Cx(1, 0));
        push(Cx(1, 0), Cx(1, 0));
      }
    } else {
      // every minor family vanishes identically: any direction decides
      push(Cx(1, 0), Cx(0, 0));
      push(Cx(0, 0), Cx(1, 0));
      push(Cx(1, 0), Cx(1, 0));
    }
  }
  if (cands.empty()) return std::nullopt;

  double best = std::numeric_limits<double>::infinity();
  CVec best_w = cands.front();
  for (const auto& cand : cands) {
    double sc = score_of(cand);
    CVec w = cand;
    if (sc <= 1e-3 && sc > 1e-12) {
      // polish across the projective tangent at the candidate
      CVec orth(2);
      orth << -std::conj(cand(1)), std::conj(cand(0));
      auto f = [&](const Eigen::VectorXd& x) {
        CVec p = cand + Cx(x(0), x(1)) * orth;
        const double n = p.norm();
        if (n < 1e-12) return 1.0;
        return score_of(CVec(p / n));
      };
      SimplexResult r = nelder_mead(f, Eigen::VectorXd::Zero(2), 0.01, 80, 1e-14);
      if (r.value < sc) {
        sc = r.value;
        w = cand + Cx(r.x(0), r.x(1)) * orth;
        w /= w.norm();
      }
    }
    if (sc < best) {
      best = sc;
      best_w = w;
    }
  }

  if (best <= 1e-8) {
    CMat v2(3, 2);
    v2.col(0) = khat;
    v2.col(1) = w0 * best_w;
    SvdResult ws = svd(stack_of(best_w));
    DecompCertificate cert;
    cert.t = t;
    cert.s = s;
    cert.u1 = ws.u.rightCols(2).adjoint();
    cert.v2 = v2;
    DecompResult res;
    res.status = DecompStatus::Found;
    res.layer = "kernel-line";
    res.cert = cert;
    return res;
  }
  if (best >= 1e-4) {
    DecompResult res;
    res.status = DecompStatus::RefutedExact;
    res.layer = "kernel-line-mismatch";
    return res;
  }
  return std::nullopt;
}

/// Exact layer for the 2x2 corner block over 3x3 spaces whose determinant
/// vanishes identically: a block certificate u1 c v2 = 0 with 2x3 u1 and
/// 3x2 v2 says every element maps the fixed plane range(v2) into the fixed
/// line orthogonal to the rows of u1. The kernel of any rank-2 element is
/// forced inside that plane, so three independent kernels refute, two
/// independent kernels pin the plane down uniquely (its stacked images then
/// either fit a line or witness the refutation), and coinciding kernels
/// leave one projective coordinate that the kernel-line case settles
/// exactly. Ambiguous witness margins fall through to the search layer.
std::optional<DecompResult> plane_line_layer(const std::vector<CMat>& basis, int t, int s,
                                             const Tolerance& tol) {
  std::vector<CMat> elems = basis;
  Rng rng(0x2b2b2bULL);
  for (int i = 0; i < 9; ++i)
    elems.push_back(combine(basis, random_unit(rng, static_cast<Eigen::Index>(basis.size()))));

  std::vector<CVec> kernels;
  for (const auto& e : elems) {
    SvdResult sv = svd(e);
    if (sv.sigma(1) >= 1e-6 * sv.sigma(0) && sv.sigma(0) > tol.abs_floor)
      kernels.push_back(sv.v.col(2));
  }
  if (kernels.empty()) return std::nullopt;

  CMat K(3, static_cast<Eigen::Index>(kernels.size()));
  for (std::size_t i = 0; i < kernels.size(); ++i) K.col(static_cast<Eigen::Index>(i)) = kernels[i];
  SvdResult ks = svd(K);
  const Eigen::Index kn = ks.sigma.size();
  const double k1 = ks.sigma(0);
  const double k2 = kn >= 2 ? ks.sigma(1) : 0.0;
  const double k3 = kn >= 3 ? ks.sigma(2) : 0.0;

  if (k3 >= 1e-6 * k1) {
    DecompResult res;
    res.status = DecompStatus::RefutedExact;
    res.layer = "kernel-spread";
    return res;
  }
  if (k2 <= 1e-10 * k1) return kernel_line_case(basis, ks.u.col(0), t, s, tol);
  if (k2 < 1e-6 * k1 || k3 > 1e-10 * k1)
    return std::nullopt;  // kernel span width is murky

  // unique candidate plane: test whether its images fit a single line
  CMat v2 = ks.u.leftCols(2);
  CMat imgs(3, 2 * static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    imgs.middleCols(2 * static_cast<Eigen::Index>(i), 2) = basis[i] * v2;
  SvdResult is = svd(imgs);
  if (is.sigma(1) <= 1e-9 * is.sigma(0)) {
    SvdResult ws = svd(CMat(is.u.col(0)));
    DecompCertificate cert;
    cert.t = t;
    cert.s = s;
    cert.u1 = ws.u.rightCols(2).adjoint();
    cert.v2 = v2;
    DecompResult res;
    res.status = DecompStatus::Found;
    res.layer = "kernel-plane";
    res.cert = cert;
    return res;
  }
  if (is.sigma(1) >= 1e-6 * is.sigma(0)) {
    DecompResult res;
    res.status = DecompStatus::RefutedExact;
    res.layer = "kernel-plane-mismatch";
    return res;
  }
  return std::nullopt;
}

double block_residual(const std::vector<CMat>& basis, const CMat& u1, const CMat& v2) {
  const double maxn = max_basis_norm(basis);
  if (maxn <= 0) return 0;
  double r = 0;
  for (const auto& b : basis) r = std::max(r, (u1 * b * v2).norm());
  return r / maxn;
}

/// Alternating projection sweep: re-pick v2 as the weakest right directions
/// of the stacked compressed rows, then u1 as the weakest left directions of
/// the stacked compressed columns. Tightens certificates from triangular
/// routes toward machine precision.
void refine_certificate(const std::vector<CMat>& basis, CMat& u1, CMat& v2, int sweeps) {
  const Eigen::Index mm = u1.rows(), nn = v2.cols();
  const Eigen::Index a = u1.cols(), b = v2.rows();
  if (mm == 0 || nn == 0) return;
  const auto nb = static_cast<Eigen::Index>(basis.size());
  for (int it = 0; it < sweeps; ++it) {
    CMat rows(nb * mm, b);
    for (Eigen::Index i = 0; i < nb; ++i) rows.middleRows(i * mm, mm) = u1 * basis[i];
    v2 = svd(rows).v.rightCols(nn);
    CMat cols(a, nb * nn);
    for (Eigen::Index i = 0; i < nb; ++i) cols.middleCols(i * nn, nn) = basis[i] * v2;
    u1 = svd(cols).u.rightCols(mm).adjoint();
  }
}

}  // namespace

MatrixSpace make_space(std::vector<CMat> basis, const Tolerance& tol) {
  if (basis.empty()) throw ContractViolation("make_space: need at least one spanning matrix");
  MatrixSpace sp;
  sp.rows = basis.front().rows();
  sp.cols = basis.front().cols();
  if (sp.rows < 1 || sp.cols < 1) throw ContractViolation("make_space: empty matrix shape");
  double maxn = 0;
  for (const auto& b : basis) {
    if (b.rows() != sp.rows || b.cols() != sp.cols)
      throw ContractViolation("make_space: mixed matrix shapes");
    ensure_finite(b, "make_space");
    maxn = std::max(maxn, b.norm());
  }
  for (auto& b : basis)
    if (b.norm() > tol.abs_floor * (1.0 + maxn)) sp.basis.push_back(std::move(b));
  return sp;
}

int effective_dim(const MatrixSpace& sp, const Tolerance& tol) {
  if (sp.basis.empty()) return 0;
  CMat g(sp.rows * sp.cols, static_cast<Eigen::Index>(sp.basis.size()));
  for (std::size_t i = 0; i < sp.basis.size(); ++i)
    g.col(static_cast<Eigen::Index>(i)) = vectorize(sp.basis[i]);
  return numerical_rank(g, tol);
}

std::vector<CMat> orthonormal_basis(const MatrixSpace& sp, const Tolerance& tol) {
  std::vector<CMat> out;
  if (sp.basis.empty()) return out;
  CMat g(sp.rows * sp.cols, static_cast<Eigen::Index>(sp.basis.size()));
  for (std::size_t i = 0; i < sp.basis.size(); ++i)
    g.col(static_cast<Eigen::Index>(i)) = vectorize(sp.basis[i]);
  SvdResult sv = svd(g);
  const int r = numerical_rank(g, tol);
  out.reserve(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) {
    CVec col = sv.u.col(i);
    out.push_back(Eigen::Map<const CMat>(col.data(), sp.rows, sp.cols));
  }
  return out;
}

int max_rank(const MatrixSpace& sp, int trials, std::uint64_t seed, const Tolerance& tol) {
  if (sp.basis.empty()) return 0;
  const auto basis = orthonormal_basis(sp, tol);
  if (basis.empty()) return 0;
  const int q = static_cast<int>(basis.size());
  const int cap = static_cast<int>(std::min(sp.rows, sp.cols));

  int witnessed = 0;
  for (const auto& b : basis) witnessed = std::max(witnessed, numerical_rank(b, tol));
  Rng rng(seed);
  for (int t = 0; t < trials && witnessed < cap; ++t)
    witnessed = std::max(witnessed, numerical_rank(combine(basis, random_unit(rng, q)), tol));

  if (sp.rows == 3 && sp.cols == 3) {
    if (det_identically_zero(basis)) {
      witnessed = std::min(witnessed, 2);
      if (q == 1) return numerical_rank(basis[0], tol);
      if (q == 2) return pencil_all_minors_zero(basis[0], basis[1]) ? 1 : 2;
      // every space of rank <= 1 matrices shares a row or a column direction,
      // so two stacked ranks settle whether the cap 2 is attained
      CMat vstack(3 * q, 3), hstack(3, 3 * q);
      for (int i = 0; i < q; ++i) {
        vstack.middleRows(3 * i, 3) = basis[static_cast<std::size_t>(i)];
        hstack.middleCols(3 * i, 3) = basis[static_cast<std::size_t>(i)];
      }
      const bool rank_one_space =
          numerical_rank(vstack, tol) == 1 || numerical_rank(hstack, tol) == 1;
      return rank_one_space ? 1 : 2;
    }
    // determinant not identically zero: a full-rank element exists; hunt a
    // concrete witness so the reported value stays a witnessed bound
    for (int t = 0; t < 256 && witnessed < 3; ++t)
      witnessed = std::max(witnessed, numerical_rank(combine(basis, random_unit(rng, q)), tol));
    return std::max(witnessed, 3);
  }
  return std::max(witnessed, 1);
}

bool is_k_subspace(const MatrixSpace& sp, int k, std::uint64_t seed, const Tolerance& tol) {
  if (sp.basis.empty()) throw ContractViolation("is_k_subspace: empty space");
  if (k < 1 || k > static_cast<int>(std::min(sp.rows, sp.cols)))
    throw ContractViolation("is_k_subspace: rank target outside matrix shape");
  const auto basis = orthonormal_basis(sp, tol);
  if (basis.empty()) throw ContractViolation("is_k_subspace: zero space");
  const int q = static_cast<int>(basis.size());

  if (max_rank(sp, 64, seed, tol) != k) return false;
  if (k == 1) return true;  // max rank one: every nonzero element has rank one
  if (q == 1) return true;  // a single direction attains its own rank everywhere
  // several directions of square full-rank matrices: the determinant
  // polynomial has a nontrivial zero, so some nonzero element drops rank
  if (sp.rows == sp.cols && k == static_cast<int>(sp.rows)) return false;
  if (sp.rows == 3 && sp.cols == 3 && q == 2 && k == 2)
    return !rank1_in_pencil(basis[0], basis[1], tol).has_value();
  return !find_low_rank_element(sp, k - 1, 64, seed, tol).has_value();
}

std::optional<PencilRankOne> rank1_in_pencil(const CMat& c1, const CMat& c2,
                                             const Tolerance& tol) {
  if (c1.rows() != 3 || c1.cols() != 3 || c2.rows() != 3 || c2.cols() != 3)
    throw ContractViolation("rank1_in_pencil: expects 3x3 matrices");
  const double na = c1.norm(), nb = c2.norm();
  if (na <= tol.abs_floor && nb <= tol.abs_floor)
    throw ContractViolation("rank1_in_pencil: both matrices vanish");

  const auto minors = pencil_minors(c1, c2);
  const double scale2 = std::pow(na + nb, 2);
  const double eps = 1e-10 * (scale2 + 1e-30);

  int best = -1;
  double best_mag = 0;
  for (int i = 0; i < 9; ++i) {
    const double mag = std::max({std::abs(minors[static_cast<std::size_t>(i)].alpha),
                                 std::abs(minors[static_cast<std::size_t>(i)].beta),
                                 std::abs(minors[static_cast<std::size_t>(i)].delta)});
    if (mag > best_mag) {
      best_mag = mag;
      best = i;
    }
  }
  if (best_mag <= eps) {
    // every pencil element has rank <= 1 already
    if (na > tol.abs_floor) return PencilRankOne{Cx(0, 0), false};
    return PencilRankOne{Cx(0, 0), true};
  }

  // any rank-one location zeroes all nine minors, in particular the largest
  // one, so its roots exhaust the finite candidates
  const auto& mq = minors[static_cast<std::size_t>(best)];
  std::vector<Cx> cand;
  if (std::abs(mq.alpha) > eps) {
    Cx disc = std::sqrt(mq.beta * mq.beta - 4.0 * mq.alpha * mq.delta);
    if (std::real(std::conj(mq.beta) * disc) < 0) disc = -disc;
    const Cx qq = -0.5 * (mq.beta + disc);
    cand.push_back(qq / mq.alpha);
    if (std::abs(qq) > eps) cand.push_back(mq.delta / qq);
    else cand.push_back(Cx(0, 0));
  } else if (std::abs(mq.beta) > eps) {
    cand.push_back(-mq.delta / mq.beta);
  }
  std::sort(cand.begin(), cand.end(), [](Cx x, Cx y) {
    const double ax = std::abs(x), ay = std::abs(y);
    if (std::abs(ax - ay) > 1e-14 * (1 + ax + ay)) return ax < ay;
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  for (const Cx& g : cand) {
    if (!std::isfinite(std::abs(g)) || std::abs(g) > 1e12) continue;
    if (numerical_rank(c1 - g * c2, tol) <= 1) return PencilRankOne{g, false};
  }
  if (nb > tol.abs_floor && numerical_rank(c2, tol) <= 1) return PencilRankOne{Cx(0, 0), true};
  return std::nullopt;
}

CMat common_kernel(const MatrixSpace& sp, const Tolerance& tol) {
  if (sp.basis.empty()) return CMat::Identity(sp.cols, sp.cols);
  CMat stack(static_cast<Eigen::Index>(sp.basis.size()) * sp.rows, sp.cols);
  for (std::size_t i = 0; i < sp.basis.size(); ++i)
    stack.middleRows(static_cast<Eigen::Index>(i) * sp.rows, sp.rows) = sp.basis[i];
  return kernel(stack, tol);
}

CMat common_cokernel(const MatrixSpace& sp, const Tolerance& tol) {
  if (sp.basis.empty()) return CMat::Identity(sp.rows, sp.rows);
  CMat stack(static_cast<Eigen::Index>(sp.basis.size()) * sp.cols, sp.rows);
  for (std::size_t i = 0; i < sp.basis.size(); ++i)
    stack.middleRows(static_cast<Eigen::Index>(i) * sp.cols, sp.cols) = sp.basis[i].adjoint();
  return kernel(stack, tol);
}

bool necessary_rank_bound(const MatrixSpace& sp, int m, int n, std::uint64_t seed,
                          const Tolerance& tol) {
  if (m < 0 || n < 0 || m > sp.rows || n > sp.cols)
    throw ContractViolation("necessary_rank_bound: block outside matrix shape");
  return max_rank(sp, 64, seed, tol) <=
         static_cast<int>(sp.rows) - m + static_cast<int>(sp.cols) - n;
}

std::optional<CVec> find_low_rank_element(const MatrixSpace& sp, int r, int restarts,
                                          std::uint64_t seed, const Tolerance& tol) {
  if (sp.basis.empty()) return std::nullopt;
  const auto basis = orthonormal_basis(sp, tol);
  if (basis.empty()) return std::nullopt;
  const int q = static_cast<int>(basis.size());
  const int mind = static_cast<int>(std::min(sp.rows, sp.cols));
  if (r <= 0) return std::nullopt;
  if (r >= mind) return CVec::Unit(q, 0);

  for (int i = 0; i < q; ++i)
    if (numerical_rank(basis[static_cast<std::size_t>(i)], tol) <= r) return CVec::Unit(q, i);
  if (q == 1) return std::nullopt;

  auto alpha_of = [&](const Eigen::VectorXd& v) {
    CVec a(q);
    for (int i = 0; i < q; ++i) a(i) = Cx(v(2 * i), v(2 * i + 1));
    return a;
  };
  auto score = [&](const Eigen::VectorXd& v) -> double {
    CVec a = alpha_of(v);
    const double n = a.norm();
    if (n < 1e-9) return 1.0;
    const RVec sig = svd(combine(basis, a / n)).sigma;
    if (sig(0) <= tol.abs_floor) return 1.0;
    return sig(r) / sig(0);
  };

  Rng rng(seed);
  for (int rep = 0; rep < restarts; ++rep) {
    Eigen::VectorXd start(2 * q);
    for (int i = 0; i < 2 * q; ++i) start(i) = rng.gauss();
    if (rep < q) start += 4.0 * Eigen::VectorXd::Unit(2 * q, 2 * rep);
    start.normalize();
    SimplexResult nm = nelder_mead(score, start, 0.35, 300);
    if (nm.value <= 1e-9) {
      CVec a = alpha_of(nm.x);
      a /= a.norm();
      if (numerical_rank(combine(basis, a), tol) <= r) return a;
    }
  }
  return std::nullopt;
}

DecompResult decompose(const MatrixSpace& sp, int t, int s, const SearchBudget& budget,
                       const Tolerance& tol) {
  const Eigen::Index a = sp.rows, b = sp.cols;
  if (a < 1 || b < 1) throw ContractViolation("decompose: empty matrix shape");
  if (t < 0 || t > a || s < 0 || s > b)
    throw ContractViolation("decompose: block offsets outside matrix shape");
  const int mm = static_cast<int>(a) - t;  // zero block height
  const int nn = static_cast<int>(b) - s;  // zero block width

  auto found = [&](CMat u1, CMat v2, std::string layer) {
    double resid = block_residual(sp.basis, u1, v2);
    if (resid > 1e-12 && mm > 0 && nn > 0) {
      CMat u1r = u1, v2r = v2;
      refine_certificate(sp.basis, u1r, v2r, 3);
      const double r2 = block_residual(sp.basis, u1r, v2r);
      if (r2 < resid) {
        u1 = std::move(u1r);
        v2 = std::move(v2r);
        resid = r2;
      }
    }
    if (resid > tol.residual)
      throw NumericalFailure("decompose: layer '" + layer + "' produced an invalid certificate");
    DecompResult res;
    res.status = DecompStatus::Found;
    res.layer = std::move(layer);
    res.cert = DecompCertificate{t, s, std::move(u1), std::move(v2), resid};
    return res;
  };
  auto refuted = [&](std::string layer) {
    DecompResult res;
    res.status = DecompStatus::RefutedExact;
    res.layer = std::move(layer);
    return res;
  };

  if (mm <= 0 || nn <= 0)
    return found(CMat::Identity(a, a).topRows(std::max(mm, 0)),
                 CMat::Identity(b, b).leftCols(std::max(nn, 0)), "trivial-empty-block");

  const auto basis = orthonormal_basis(sp, tol);
  if (basis.empty())
    return found(CMat::Identity(a, a).topRows(mm), CMat::Identity(b, b).leftCols(nn),
                 "zero-space");
  const int q = static_cast<int>(basis.size());

  if (!necessary_rank_bound(sp, mm, nn, budget.seed, tol)) return refuted("rank-bound");

  CMat ker = common_kernel(sp, tol);
  if (ker.cols() >= nn)
    return found(CMat::Identity(a, a).topRows(mm), ker.leftCols(nn), "common-kernel");
  CMat coker = common_cokernel(sp, tol);
  if (coker.cols() >= mm)
    return found(coker.leftCols(mm).adjoint(), CMat::Identity(b, b).leftCols(nn),
                 "common-cokernel");
  // full-height and full-width blocks are equivalent to the joint kernels,
  // so falling short of them is decisive
  if (mm == static_cast<int>(a)) return refuted("full-height-block");
  if (nn == static_cast<int>(b)) return refuted("full-width-block");

  if (q == 1) {
    // single matrix: choose the weakest left directions, then complete on
    // the right outside the surviving row space
    SvdResult sv = svd(basis[0]);
    CMat u1 = sv.u.rightCols(mm).adjoint();
    CMat v2 = kernel(CMat(u1 * basis[0]), tol);
    if (v2.cols() >= nn) return found(u1, v2.leftCols(nn), "single-matrix");
  }

  if (q == 2) {
    if (a == b && static_cast<int>(a) >= mm + nn) {
      GenSchurResult gs = generalized_schur(basis[0], basis[1], tol);
      return found(gs.u.bottomRows(mm), gs.v.leftCols(nn), "pencil-triangular");
    }
    if (a == 3 && b == 3 && mm == 2 && nn == 2) {
      TwoSpaceVerdict v = theorem3_2x2(basis[0], basis[1], tol);
      if (v.exists) return found(v.v1, v.v2, "two-space/" + v.path);
      return refuted("two-space/" + v.path);
    }
  }

  if (a == 3 && b == 3 && t == 1 && s == 1 && det_identically_zero(basis)) {
    if (auto res = plane_line_layer(basis, t, s, tol)) {
      if (res->status == DecompStatus::Found && res->cert)
        return found(res->cert->u1, res->cert->v2, res->layer);
      return *res;
    }
  }

  // the row-span count construction is only claimed for q >= 4; smaller q
  // is fully covered by the exact layers above or falls to the search
  if (q >= 4 && static_cast<int>(b) >= mm * q + nn) {
    CMat u1 = CMat::Identity(a, a).topRows(mm);
    CMat stack(static_cast<Eigen::Index>(q) * mm, b);
    for (int i = 0; i < q; ++i)
      stack.middleRows(static_cast<Eigen::Index>(i) * mm, mm) =
          u1 * basis[static_cast<std::size_t>(i)];
    CMat v2 = kernel(stack, tol);
    if (v2.cols() >= nn) return found(u1, v2.leftCols(nn), "dimension-count");
  }
  if (q >= 4 && static_cast<int>(a) >= nn * q + mm) {
    CMat v2 = CMat::Identity(b, b).leftCols(nn);
    CMat stack(static_cast<Eigen::Index>(q) * nn, a);
    for (int i = 0; i < q; ++i)
      stack.middleRows(static_cast<Eigen::Index>(i) * nn, nn) =
          (basis[static_cast<std::size_t>(i)] * v2).adjoint();
    CMat u1 = kernel(stack, tol);
    if (u1.cols() >= mm) return found(u1.leftCols(mm).adjoint(), v2, "dimension-count-adjoint");
  }

  SearchOutcome so = search_zero_block(sp, mm, nn, budget, tol);
  DecompResult res;
  res.best_search_score = so.min_score;
  if (so.found) {
    res = found(so.found->u1, so.found->v2, "search");
    res.best_search_score = so.min_score;
    return res;
  }
  res.status = DecompStatus::Undecided;
  res.layer = so.near_miss ? "search-near-miss" : "search-exhausted";
  return res;
}

}  // namespace dfs
