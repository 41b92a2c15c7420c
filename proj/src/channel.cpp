#include "dfs/channel.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dfs/linalg.hpp"

namespace dfs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_shape(const CMat& m, Eigen::Index dim, const std::string& what) {
  if (m.rows() != dim || m.cols() != dim)
    throw ContractViolation(what + ": expected " + std::to_string(dim) + "x" +
                            std::to_string(dim) + ", got " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  ensure_finite(m, what);
}

void check_projector(const CMat& p, Eigen::Index dim, const std::string& what,
                     const Tolerance& tol) {
  check_shape(p, dim, what);
  const double scale = 1.0 + p.norm();
  if ((p - p.adjoint()).norm() > tol.contract * scale)
    throw ContractViolation(what + ": not hermitian");
  if ((p * p - p).norm() > tol.contract * scale)
    throw ContractViolation(what + ": not idempotent");
}

Eigen::Index projector_rank(const CMat& p) {
  return static_cast<Eigen::Index>(std::llround(p.trace().real()));
}

/// Orthonormal columns spanning range(p); p must already be a projector.
CMat projector_range(const CMat& p) {
  EigResult eg = hermitian_eig(p);
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < eg.values.size(); ++i)
    if (eg.values(i) > 0.5) ++count;
  CMat out(p.rows(), count);
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < eg.values.size(); ++i)
    if (eg.values(i) > 0.5) out.col(at++) = eg.vectors.col(i);
  return out;
}

void check_weight(double w, const std::string& what) {
  if (!std::isfinite(w) || w < 0.0 || w > 1.0)
    throw ContractViolation(what + ": weight outside [0, 1]");
}

void check_phase(double delta, const std::string& what) {
  if (!std::isfinite(delta) || delta <= 0.0 || delta >= kTwoPi)
    throw ContractViolation(what + ": eigenphase must lie strictly inside (0, 2*pi)");
}

/// Mutual orthogonality and completeness of a projector family.
void check_resolution(const std::vector<const CMat*>& ps, Eigen::Index dim,
                      const std::string& what, const Tolerance& tol) {
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      const double scale = 1.0 + ps[i]->norm() * ps[j]->norm();
      if ((*ps[i] * *ps[j]).norm() > tol.contract * scale)
        throw ContractViolation(what + ": projectors " + std::to_string(i) + " and " +
                                std::to_string(j) + " are not orthogonal");
    }
  CMat sum = CMat::Zero(dim, dim);
  for (const CMat* p : ps) sum += *p;
  if ((sum - CMat::Identity(dim, dim)).norm() > tol.contract * (1.0 + std::sqrt(double(dim))))
    throw ContractViolation(what + ": projectors do not resolve the identity");
}

}  // namespace

void validate(const NoiseModel& model, const Tolerance& tol) {
  if (model.d < 2 || model.d > 8)
    throw ContractViolation("noise model: local dimension must be between 2 and 8");
  const Eigen::Index dd = model.d * model.d;
  std::visit(
      overloaded{
          [&](const HermitianUnitary& h) {
            check_shape(h.u, dd, "hermitian noise");
            const double scale = 1.0 + h.u.norm();
            if ((h.u - h.u.adjoint()).norm() > tol.contract * scale)
              throw ContractViolation("hermitian noise: u is not hermitian");
            if ((h.u * h.u - CMat::Identity(dd, dd)).norm() > tol.contract * scale)
              throw ContractViolation("hermitian noise: u is not an involution");
            check_weight(h.p, "hermitian noise");
          },
          [&](const PhasedProjectors& ph) {
            check_projector(ph.p0, dd, "phased noise: p0", tol);
            std::vector<const CMat*> ps{&ph.p0};
            for (std::size_t k = 0; k < ph.blocks.size(); ++k) {
              const std::string what = "phased noise: block " + std::to_string(k);
              check_phase(ph.blocks[k].delta, what);
              check_projector(ph.blocks[k].projector, dd, what, tol);
              ps.push_back(&ph.blocks[k].projector);
            }
            check_resolution(ps, dd, "phased noise", tol);
            check_weight(ph.p, "phased noise");
          },
          [&](const MultiUnitary& mu) {
            check_projector(mu.p0, dd, "multi-unitary noise: p0", tol);
            std::vector<const CMat*> ps{&mu.p0};
            for (std::size_t k = 0; k < mu.projectors.size(); ++k) {
              check_projector(mu.projectors[k], dd,
                              "multi-unitary noise: block " + std::to_string(k), tol);
              ps.push_back(&mu.projectors[k]);
            }
            check_resolution(ps, dd, "multi-unitary noise", tol);
            if (mu.phase_table.empty())
              throw ContractViolation("multi-unitary noise: needs at least one unitary");
            for (std::size_t j = 0; j < mu.phase_table.size(); ++j) {
              if (mu.phase_table[j].size() != mu.projectors.size())
                throw ContractViolation("multi-unitary noise: phase row " + std::to_string(j) +
                                        " does not match the block count");
              for (double delta : mu.phase_table[j])
                check_phase(delta, "multi-unitary noise: phase row " + std::to_string(j));
            }
            if (mu.weights.size() != mu.phase_table.size() + 1)
              throw ContractViolation(
                  "multi-unitary noise: weights must cover the identity and every unitary");
            double sum = 0;
            for (double w : mu.weights) {
              check_weight(w, "multi-unitary noise");
              sum += w;
            }
            if (std::abs(sum - 1.0) > tol.contract)
              throw ContractViolation("multi-unitary noise: weights must sum to one");
          },
      },
      model.noise);
}

std::vector<CMat> model_unitaries(const NoiseModel& model) {
  return std::visit(
      overloaded{
          [&](const HermitianUnitary& h) { return std::vector<CMat>{h.u}; },
          [&](const PhasedProjectors& ph) {
            CMat u = ph.p0;
            for (const PhaseBlock& b : ph.blocks)
              u += std::polar(1.0, b.delta) * b.projector;
            return std::vector<CMat>{std::move(u)};
          },
          [&](const MultiUnitary& mu) {
            std::vector<CMat> us;
            us.reserve(mu.phase_table.size());
            for (const auto& row : mu.phase_table) {
              CMat u = mu.p0;
              for (std::size_t k = 0; k < row.size(); ++k)
                u += std::polar(1.0, row[k]) * mu.projectors[k];
              us.push_back(std::move(u));
            }
            return us;
          },
      },
      model.noise);
}

std::vector<CMat> kraus_operators(const NoiseModel& model) {
  const Eigen::Index dd = model.d * model.d;
  std::vector<double> weights = std::visit(
      overloaded{
          [](const HermitianUnitary& h) { return std::vector<double>{h.p, 1.0 - h.p}; },
          [](const PhasedProjectors& ph) { return std::vector<double>{ph.p, 1.0 - ph.p}; },
          [](const MultiUnitary& mu) { return mu.weights; },
      },
      model.noise);
  std::vector<CMat> kraus;
  kraus.reserve(weights.size());
  kraus.push_back(std::sqrt(weights[0]) * CMat::Identity(dd, dd));
  const std::vector<CMat> us = model_unitaries(model);
  for (std::size_t j = 0; j < us.size(); ++j)
    kraus.push_back(std::sqrt(weights[j + 1]) * us[j]);
  return kraus;
}

namespace {

void check_density(const CMat& rho, Eigen::Index d, const std::string& what,
                   const Tolerance& tol) {
  check_shape(rho, d, what);
  const double scale = 1.0 + rho.norm();
  if ((rho - rho.adjoint()).norm() > tol.contract * scale)
    throw ContractViolation(what + ": not hermitian");
  if (std::abs(rho.trace() - Cx(1.0, 0.0)) > tol.contract)
    throw ContractViolation(what + ": trace is not one");
  EigResult eg = hermitian_eig(rho, tol);
  if (eg.values(0) < -tol.contract * scale)
    throw ContractViolation(what + ": negative eigenvalue " + std::to_string(eg.values(0)));
}

}  // namespace

CMat apply_channel(const NoiseModel& model, const CMat& rho1, const CMat& rho2,
                   const Tolerance& tol) {
  validate(model, tol);
  check_density(rho1, model.d, "apply_channel: rho1", tol);
  check_density(rho2, model.d, "apply_channel: rho2", tol);
  const CMat rho = Eigen::kroneckerProduct(rho1, rho2).eval();
  const std::vector<CMat> kraus = kraus_operators(model);
  CMat out = CMat::Zero(rho.rows(), rho.cols());
  for (const CMat& a : kraus) out += a * rho * a.adjoint();
  return out;
}

std::optional<CMat> kl_check(const std::vector<CMat>& kraus, const CMat& r, const CMat& r_prime,
                             const Tolerance& tol) {
  if (kraus.empty()) throw ContractViolation("kl_check: no Kraus operators");
  const Eigen::Index dd = kraus[0].rows();
  for (const CMat& a : kraus) check_shape(a, dd, "kl_check: Kraus operator");
  if (r.rows() * r_prime.rows() != dd)
    throw ContractViolation("kl_check: code factors do not match the Kraus dimension");
  const Eigen::Index m = r.cols(), n = r_prime.cols();
  if (m < 1 || n < 1) throw ContractViolation("kl_check: empty code factor");
  if ((r.adjoint() * r - CMat::Identity(m, m)).norm() > tol.contract * (1.0 + r.norm()))
    throw ContractViolation("kl_check: r is not an isometry");
  if ((r_prime.adjoint() * r_prime - CMat::Identity(n, n)).norm() >
      tol.contract * (1.0 + r_prime.norm()))
    throw ContractViolation("kl_check: r_prime is not an isometry");

  double max_norm = 0;
  CMat comp = CMat::Zero(dd, dd);
  for (const CMat& a : kraus) {
    comp += a.adjoint() * a;
    max_norm = std::max(max_norm, a.norm());
  }
  if ((comp - CMat::Identity(dd, dd)).norm() > tol.residual * (1.0 + comp.norm()))
    throw ContractViolation("kl_check: Kraus operators are not trace preserving");

  const CMat pi =
      Eigen::kroneckerProduct(CMat(r * r.adjoint()), CMat(r_prime * r_prime.adjoint())).eval();
  const double mn = static_cast<double>(m * n);
  const double scale = 1.0 + max_norm * max_norm;

  // blocks Pi A_i^H A_j Pi = (A_i Pi)^H (A_j Pi)
  std::vector<CMat> lifted;
  lifted.reserve(kraus.size());
  for (const CMat& a : kraus) lifted.push_back(a * pi);

  const auto k = static_cast<Eigen::Index>(kraus.size());
  CMat alpha(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      const CMat block = lifted[static_cast<std::size_t>(i)].adjoint() *
                         lifted[static_cast<std::size_t>(j)];
      alpha(i, j) = block.trace() / mn;
      if ((block - alpha(i, j) * pi).norm() > tol.residual * scale) return std::nullopt;
    }
  alpha = ((alpha + alpha.adjoint()) / 2.0).eval();
  return alpha;
}

Eigenspaces eigenspaces(const NoiseModel& model, const Tolerance& tol) {
  validate(model, tol);
  const Eigen::Index dd = model.d * model.d;
  const CMat id = CMat::Identity(dd, dd);
  Eigenspaces es;
  std::visit(
      overloaded{
          [&](const HermitianUnitary& h) {
            es.p = ((id + h.u) / 2.0).eval();
            es.q = ((id - h.u) / 2.0).eval();
            // the involution check bounds the idempotency defect, but a
            // spectrum drifting off {+1,-1} must not slip through here
            check_projector(es.p, dd, "eigenspaces: +1 projector", tol);
            check_projector(es.q, dd, "eigenspaces: -1 projector", tol);
            es.rank_p = projector_rank(es.p);
            es.rank_q = projector_rank(es.q);
            if (es.rank_p > 0) es.blocks.push_back({0.0, es.p});
            if (es.rank_q > 0) es.blocks.push_back({std::numbers::pi, es.q});
          },
          [&](const PhasedProjectors& ph) {
            es.p = ph.p0;
            es.q = (id - ph.p0).eval();
            es.rank_p = projector_rank(es.p);
            es.rank_q = dd - es.rank_p;
            es.blocks.push_back({0.0, ph.p0});
            for (const PhaseBlock& b : ph.blocks) es.blocks.push_back(b);
          },
          [&](const MultiUnitary&) {
            throw ContractViolation(
                "eigenspaces: multi-unitary noise has one spectrum per unitary");
          },
      },
      model.noise);
  return es;
}

HermitianUnitary reflection_model(const std::vector<CVec>& states, Eigen::Index d,
                                  double p, const Tolerance& tol) {
  if (d < 2) throw ContractViolation("reflection_model: bad local dimension");
  if (states.empty()) throw ContractViolation("reflection_model: no states given");
  const Eigen::Index dd = d * d;
  CMat stack(dd, static_cast<Eigen::Index>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].size() != dd)
      throw ContractViolation("reflection_model: state " + std::to_string(i) +
                              " has length " + std::to_string(states[i].size()) +
                              ", expected d*d = " + std::to_string(dd));
    if (states[i].norm() <= tol.abs_floor)
      throw ContractViolation("reflection_model: state " + std::to_string(i) + " is zero");
    stack.col(static_cast<Eigen::Index>(i)) = states[i];
  }
  SvdResult sv = svd(stack);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.sigma.size(); ++i)
    if (sv.sigma(i) > tol.rank_rel * sv.sigma(0)) ++rank;
  const CMat b = sv.u.leftCols(rank);
  HermitianUnitary hu;
  hu.u = CMat::Identity(dd, dd) - 2.0 * (b * b.adjoint());
  hu.p = p;
  return hu;
}

MatrixSpace schmidt_space_of_projector(const CMat& q, Eigen::Index d, const Tolerance& tol) {
  if (d < 2) throw ContractViolation("schmidt_space_of_projector: bad local dimension");
  check_projector(q, d * d, "schmidt_space_of_projector", tol);
  MatrixSpace sp;
  sp.rows = d;
  sp.cols = d;
  EigResult eg = hermitian_eig(q, tol);
  for (Eigen::Index i = 0; i < eg.values.size(); ++i) {
    if (eg.values(i) <= 0.5) continue;
    CMat c(d, d);
    for (Eigen::Index k = 0; k < d; ++k)
      for (Eigen::Index l = 0; l < d; ++l) c(k, l) = eg.vectors(k * d + l, i);
    sp.basis.push_back(std::move(c));
  }
  return sp;
}

std::optional<std::pair<CMat, CMat>> product_projector(const CMat& q, Eigen::Index d,
                                                       const Tolerance& tol) {
  if (d < 2) throw ContractViolation("product_projector: bad local dimension");
  const Eigen::Index dd = d * d;
  check_projector(q, dd, "product_projector", tol);
  if (projector_rank(q) == 0) return std::make_pair(CMat::Zero(d, d), CMat::Zero(d, d));

  // reshuffle across the cut: q = a (x) b iff the reshuffled matrix
  // (row (i,k), column (j,l)) <- q(i*d+j, k*d+l) has one Schmidt coefficient
  CMat resh(dd, dd);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < d; ++k)
      for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index l = 0; l < d; ++l) resh(i * d + k, j * d + l) = q(i * d + j, k * d + l);
  SvdResult sv = svd(resh);
  if (sv.sigma(1) > tol.contract * sv.sigma(0)) return std::nullopt;

  const double root = std::sqrt(sv.sigma(0));
  CVec va = sv.u.col(0) * root;
  CVec vb = sv.v.col(0).conjugate() * root;
  CMat a(d, d), b(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < d; ++k) a(i, k) = va(i * d + k);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index l = 0; l < d; ++l) b(j, l) = vb(j * d + l);

  // fix the shared phase so the first factor has a positive trace, then
  // rescale both to idempotents; tr(a)*tr(b) = tr(q) > 0 keeps b consistent
  const Cx ta = a.trace();
  if (std::abs(ta) <= tol.abs_floor) return std::nullopt;
  const Cx phase = ta / std::abs(ta);
  a /= phase;
  b *= phase;
  a = ((a + a.adjoint()) / 2.0).eval();
  b = ((b + b.adjoint()) / 2.0).eval();
  const double ta2 = (a * a).trace().real(), tb2 = (b * b).trace().real();
  if (ta2 <= tol.abs_floor || tb2 <= tol.abs_floor) return std::nullopt;
  a *= a.trace().real() / ta2;
  b *= b.trace().real() / tb2;

  if ((Eigen::kroneckerProduct(a, b).eval() - q).norm() > tol.contract * (1.0 + q.norm()))
    return std::nullopt;
  return std::make_pair(std::move(a), std::move(b));
}

CodeCertificate certificate_from_decomposition(const DecompCertificate& cert, Cx lambda) {
  CodeCertificate out;
  out.r = cert.u1.adjoint();
  out.r_prime = cert.v2.conjugate();
  out.lambda = lambda;
  out.residual = cert.residual;
  return out;
}

namespace {

BranchReport run_branch(const NoiseModel& model, const EigenBranch& bs, Eigen::Index m,
                        Eigen::Index n, const SearchBudget& budget, const Tolerance& tol) {
  BranchReport rep;
  rep.lambda = bs.lambda;
  rep.host_rank = projector_rank(bs.host);
  const Eigen::Index d = model.d;
  const Eigen::Index mn = m * n;

  auto accept = [&](CodeCertificate cert, const std::string& detail) {
    double worst = 0;
    for (const CMat& u : model_unitaries(model)) {
      CertificateAudit audit = verify_code_certificate(u, cert.r, cert.r_prime, bs.lambda, tol);
      if (!audit.accepted)
        throw NumericalFailure("dfs_analyze: certificate from layer '" + detail +
                               "' failed re-verification");
      worst = std::max(worst, audit.block_residual);
    }
    if (!kl_check(kraus_operators(model), cert.r, cert.r_prime, tol))
      throw NumericalFailure("dfs_analyze: certificate from layer '" + detail +
                             "' failed the error-correction test");
    cert.lambda = bs.lambda;
    cert.residual = worst;
    rep.certificate = std::move(cert);
    rep.verdict = BranchVerdict::Exists;
    rep.detail = detail;
    return rep;
  };

  if (rep.host_rank < mn) {
    rep.verdict = BranchVerdict::NotExists;
    rep.detail = "insufficient degeneracy";
    return rep;
  }
  if (rep.host_rank == mn) {
    // the eigenspace has no slack: the code would have to fill it, so it
    // exists exactly when the projector splits into local factors of the
    // requested ranks
    auto pp = product_projector(bs.host, d, tol);
    if (!pp) {
      rep.verdict = BranchVerdict::NotExists;
      rep.detail = "eigenspace projector is not a product";
      return rep;
    }
    const Eigen::Index ra = projector_rank(pp->first), rb = projector_rank(pp->second);
    if (ra != m || rb != n) {
      rep.verdict = BranchVerdict::NotExists;
      rep.detail = "product factors have ranks " + std::to_string(ra) + "x" +
                   std::to_string(rb) + ", need " + std::to_string(m) + "x" + std::to_string(n);
      return rep;
    }
    CodeCertificate cert;
    cert.r = projector_range(pp->first);
    cert.r_prime = projector_range(pp->second);
    return accept(std::move(cert), "product-projector");
  }

  MatrixSpace sp = schmidt_space_of_projector(bs.complement, d, tol);
  rep.space_dim = effective_dim(sp, tol);
  rep.space_max_rank = max_rank(sp, 64, budget.seed, tol);
  rep.rank_bound_ok = rep.space_max_rank <= static_cast<int>(2 * d - m - n);
  const int q = rep.space_dim;
  rep.sufficient_dims = (q <= 2 && d >= m + n) ||
                        (q >= 4 && (d >= m * q + n || d >= n * q + m));
  DecompResult dr = decompose(sp, static_cast<int>(d - m), static_cast<int>(d - n), budget, tol);
  rep.best_search_score = dr.best_search_score;
  if (dr.status == DecompStatus::Found)
    return accept(certificate_from_decomposition(*dr.cert, bs.lambda), dr.layer);
  if (dr.status == DecompStatus::RefutedExact) {
    rep.verdict = BranchVerdict::NotExists;
    rep.detail = dr.layer;
    return rep;
  }
  rep.verdict = BranchVerdict::Undecided;
  rep.detail = dr.layer;
  return rep;
}

/// Distinct eigenphase values among the blocks (0 for p0 is implicit).
int distinct_deltas(const PhasedProjectors& ph) {
  std::vector<double> ds;
  for (const PhaseBlock& b : ph.blocks) ds.push_back(b.delta);
  std::sort(ds.begin(), ds.end());
  int count = 0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (i == 0 || ds[i] - ds[i - 1] > 1e-9) ++count;
  return count;
}

}  // namespace

std::vector<EigenBranch> eigen_branches(const NoiseModel& model, const Tolerance& tol) {
  validate(model, tol);
  const Eigen::Index dd = model.d * model.d;
  const CMat id = CMat::Identity(dd, dd);
  std::vector<EigenBranch> specs;
  std::visit(
      overloaded{
          [&](const HermitianUnitary&) {
            Eigenspaces es = eigenspaces(model, tol);
            specs.push_back({Cx(1.0, 0.0), es.p, es.q});
            specs.push_back({Cx(-1.0, 0.0), es.q, es.p});
          },
          [&](const PhasedProjectors& ph) {
            const CMat rest = (id - ph.p0).eval();
            const int deltas = distinct_deltas(ph);
            specs.push_back({Cx(1.0, 0.0), ph.p0, rest});
            if (deltas == 1) {
              // two eigenphases total: the phased block can host a code of
              // its own, with lambda carrying that phase
              specs.push_back({std::polar(1.0, ph.blocks[0].delta), rest, ph.p0});
            }
            // three or more distinct phases: only the fixed block can host
          },
          [&](const MultiUnitary& mu) {
            specs.push_back({Cx(1.0, 0.0), mu.p0, (id - mu.p0).eval()});
          },
      },
      model.noise);
  return specs;
}

AnalysisReport dfs_analyze(const NoiseModel& model, Eigen::Index m, Eigen::Index n,
                           const SearchBudget& budget, const Tolerance& tol) {
  validate(model, tol);
  const Eigen::Index d = model.d;
  if (m < 1 || m > d || n < 1 || n > d)
    throw ContractViolation("dfs_analyze: code dimensions must satisfy 1 <= M, N <= d");
  AnalysisReport rep;
  rep.d = d;
  rep.m = m;
  rep.n = n;

  for (const EigenBranch& bs : eigen_branches(model, tol))
    rep.branches.push_back(run_branch(model, bs, m, n, budget, tol));
  for (const BranchReport& br : rep.branches)
    if (br.certificate) rep.certificates.push_back(*br.certificate);
  return rep;
}

TwoSpaceVerdict theorem3_q7(const MatrixSpace& p_schmidt_space, const Tolerance& tol) {
  if (p_schmidt_space.rows != 3 || p_schmidt_space.cols != 3)
    throw ContractViolation("theorem3_q7: expects 3x3 Schmidt matrices");
  const std::vector<CMat> ob = orthonormal_basis(p_schmidt_space, tol);
  if (ob.size() != 2)
    throw ContractViolation("theorem3_q7: the fixed eigenspace must be two-dimensional");
  return theorem3_2x2(ob[0], ob[1], tol);
}

UniquenessReport uniqueness_scan(const NoiseModel& model, Eigen::Index m, Eigen::Index n,
                                 const SearchBudget& budget, const Tolerance& tol) {
  if (model.d != 3 || m != 2 || n != 2)
    throw ContractViolation("uniqueness_scan: stated for d = 3, M = N = 2");
  UniquenessReport ur;
  ur.analysis = dfs_analyze(model, m, n, budget, tol);
  ur.certificate_count = static_cast<int>(ur.analysis.certificates.size());
  ur.consistent = ur.certificate_count <= 1;
  if (!ur.consistent) {
    const Eigen::IOFormat fmt(Eigen::FullPrecision, 0, ", ", "\n", "  [", "]");
    std::ostringstream os;
    os << "uniqueness violation: " << ur.certificate_count << " eigenvalues carry codes\n";
    for (const CodeCertificate& cert : ur.analysis.certificates) {
      os << "lambda = " << cert.lambda.real() << (cert.lambda.imag() < 0 ? " - " : " + ")
         << std::abs(cert.lambda.imag()) << "i, residual = " << cert.residual << "\n";
      os << "r:\n" << cert.r.format(fmt) << "\nr_prime:\n" << cert.r_prime.format(fmt) << "\n";
    }
    const std::vector<CMat> us = model_unitaries(model);
    for (std::size_t j = 0; j < us.size(); ++j)
      os << "unitary " << j << ":\n" << us[j].format(fmt) << "\n";
    ur.counterexample = os.str();
  }
  return ur;
}

}  // namespace dfs
