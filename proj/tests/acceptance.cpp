// Acceptance gate for the product-code analyzer: nine criteria, one line
// each, non-zero exit status when any of them fails. Each criterion draws
// its own deterministic random stream, so failures replay exactly.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <optional>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>
#include <variant>
#include <vector>

#include "dfs/channel.hpp"
#include "dfs/examples.hpp"
#include "dfs/ket.hpp"
#include "dfs/oracle.hpp"
#include "dfs/schmidt.hpp"
#include "dfs/theorem3.hpp"

using namespace dfs;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

struct Outcome {
  bool pass = false;
  std::string note;
};

// every code certificate produced by criteria 1-7, replayed behaviorally in
// criterion 8 against its own channel
struct PoolEntry {
  NoiseModel model;
  CodeCertificate cert;
};
std::vector<PoolEntry> g_pool;

CMat random_density(Rng& rng, Eigen::Index n) {
  const CMat g = rng.gaussian(n, n);
  CMat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

double trace_norm(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es((m + m.adjoint()) / 2.0);
  return es.eigenvalues().cwiseAbs().sum();
}

std::vector<CVec> span_states(const std::vector<CMat>& basis) {
  std::vector<CVec> states;
  for (const CMat& c : basis) states.push_back(from_schmidt(c).amps);
  return states;
}

// embeds a zero-block witness on the span into a code certificate for the
// reflection channel built from the very same span
void pool_from_decomposition(const std::vector<CMat>& basis, Eigen::Index d, const CMat& u1,
                             const CMat& v2) {
  NoiseModel model{d, reflection_model(span_states(basis), d)};
  CodeCertificate cert;
  cert.r = u1.adjoint();
  cert.r_prime = v2.conjugate();
  cert.lambda = Cx(1, 0);
  g_pool.push_back({std::move(model), std::move(cert)});
}

// canonical weighted-cross instance: c2 = diag(0, b, a) and c1 with
// c11 = 0, det c1 = 0, a c12 c21 + b c13 c31 = 0, all cross entries nonzero
struct CrossInstance {
  CMat c1, c2;
  double a, b;
};

CrossInstance random_cross_instance(Rng& rng) {
  for (;;) {
    const double a = 1.0 + rng.uniform();
    const double b = (0.3 + 0.7 * rng.uniform()) * a;
    auto unit_away = [&]() {
      Cx z = rng.cgauss();
      while (std::abs(z) < 0.3) z = rng.cgauss();
      return z;
    };
    const Cx c12 = unit_away(), c13 = unit_away(), c21 = unit_away();
    const Cx c31 = -a * c12 * c21 / (b * c13);
    const Cx c22 = rng.cgauss(), c23 = rng.cgauss(), c32 = rng.cgauss();
    const Cx c33 = (c12 * c23 * c31 + c13 * (c21 * c32 - c22 * c31)) / (c12 * c21);
    CMat c1 = CMat::Zero(3, 3);
    c1(0, 1) = c12;
    c1(0, 2) = c13;
    c1(1, 0) = c21;
    c1(2, 0) = c31;
    c1(1, 1) = c22;
    c1(1, 2) = c23;
    c1(2, 1) = c32;
    c1(2, 2) = c33;
    CMat c2 = CMat::Zero(3, 3);
    c2(1, 1) = Cx(b, 0);
    c2(2, 2) = Cx(a, 0);
    if (numerical_rank(c1) != 2) continue;
    return {std::move(c1), std::move(c2), a, b};
  }
}

void cross_formula(const CrossInstance& inst, CMat& v1, CMat& v2) {
  const double a = inst.a, b = inst.b;
  const Cx c12 = inst.c1(0, 1), c13 = inst.c1(0, 2);
  const Cx c21 = inst.c1(1, 0), c31 = inst.c1(2, 0);
  const double n1 = std::sqrt(a * a * std::norm(c12) + b * b * std::norm(c13));
  const double n2 = std::sqrt(a * a * std::norm(c21) + b * b * std::norm(c31));
  v1 = CMat::Zero(2, 3);
  v1(0, 0) = Cx(1, 0);
  v1(1, 1) = a * c12 / n1;
  v1(1, 2) = b * c13 / n1;
  v2 = CMat::Zero(3, 2);
  v2(0, 0) = Cx(1, 0);
  v2(1, 1) = a * c21 / n2;
  v2(2, 1) = b * c31 / n2;
}

double pair_residual(const CMat& c1, const CMat& c2, const CMat& v1, const CMat& v2) {
  const double scale = std::max(c1.norm(), c2.norm());
  return std::max((v1 * c1 * v2).cwiseAbs().maxCoeff(),
                  (v1 * c2 * v2).cwiseAbs().maxCoeff()) /
         scale;
}

// orthonormal 9-column frame whose leading columns are prescribed
CMat complete_frame(Rng& rng, const CMat& lead) {
  CMat m(lead.rows(), lead.rows());
  m.leftCols(lead.cols()) = lead;
  m.rightCols(lead.rows() - lead.cols()) = rng.gaussian(lead.rows(), lead.rows() - lead.cols());
  return Eigen::HouseholderQR<CMat>(m).householderQ();
}

// random 2 (x) 2 product code space at d = 3: columns kron(r_i, r'_j)
CMat product_code_frame(Rng& rng, CMat& r, CMat& r_prime) {
  r = rng.isometry(3, 2);
  r_prime = rng.isometry(3, 2);
  CMat w(9, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      w.col(i * 2 + j) = Eigen::kroneckerProduct(r.col(i), r_prime.col(j));
  return w;
}

bool hosts_match(const CodeCertificate& x, const CodeCertificate& y, double tol) {
  return (x.r * x.r.adjoint() - y.r * y.r.adjoint()).norm() <= tol &&
         (x.r_prime * x.r_prime.adjoint() - y.r_prime * y.r_prime.adjoint()).norm() <= tol;
}

// ---------------------------------------------------------------- criterion 1

Outcome criterion1() {
  Timer timer;
  auto outcomes = run_examples();
  int passed = 0;
  double worst = 0;
  std::string first_fail;
  for (const auto& oc : outcomes) {
    if (oc.pass) {
      ++passed;
    } else if (first_fail.empty()) {
      first_fail = oc.name + ": " + oc.message;
    }
    worst = std::max(worst, oc.certificate_residual);
  }
  const auto& cases = bundled_examples();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].pass) continue;
    std::vector<CVec> states;
    for (const auto& k : cases[i].states) states.push_back(parse_ket(k, 3).amps);
    NoiseModel model{3, reflection_model(states, 3)};
    for (const auto& cert : outcomes[i].report.certificates) g_pool.push_back({model, cert});
  }
  const double secs = timer.seconds();
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/6 verdicts, worst certificate residual %.1e, %.2f s",
                passed, worst, secs);
  if (passed != 6 || worst > 1e-10 || secs >= 10.0)
    return {false, std::string(buf) + (first_fail.empty() ? "" : "; " + first_fail)};
  return {true, buf};
}

// ------------------------------------------------------------- criteria 2 + 4

struct ModelProbe {
  bool bound_c = false, bound_d = false;  // necessary_rank_bound per space
  bool found_plus = false, found_minus = false;
};
std::vector<ModelProbe> g_probes;

Outcome criterion2() {
  Timer timer;
  Rng rng(0xacc2);
  const SearchBudget budget;  // grid_density 24 by default
  int contradictions = 0, undecided = 0;
  std::string detail;
  for (int inst = 0; inst < 200; ++inst) {
    const int qrank = 1 + static_cast<int>(rng.integer() % 8);
    const CMat q = rng.projector(9, qrank);
    NoiseModel model{3, HermitianUnitary{CMat::Identity(9, 9) - 2 * q, 0.5}};
    AnalysisReport rep = dfs_analyze(model, 2, 2, budget);
    auto branches = eigen_branches(model);
    ModelProbe probe;
    for (std::size_t bi = 0; bi < branches.size(); ++bi) {
      const BranchReport& br = rep.branches[bi];
      MatrixSpace sp = schmidt_space_of_projector(branches[bi].complement, 3);
      (bi == 0 ? probe.bound_c : probe.bound_d) = necessary_rank_bound(sp, 2, 2);
      bool found = false;
      // a 2x2 block on the complement space forces a 4-dimensional code
      // inside the host, so hosts of rank < 4 cannot carry a find
      if (br.host_rank >= 4) found = search_zero_block(sp, 2, 2, budget).found.has_value();
      (bi == 0 ? probe.found_plus : probe.found_minus) = found;
      if (br.verdict == BranchVerdict::Undecided) {
        ++undecided;
        continue;
      }
      const bool exists = br.verdict == BranchVerdict::Exists;
      if (exists != found) {
        ++contradictions;
        if (detail.empty())
          detail = "instance " + std::to_string(inst) + " lambda " +
                   (bi == 0 ? "+1" : "-1") + ": analysis says " +
                   (exists ? "exists" : "not-exists") + ", oracle " +
                   (found ? "finds a code" : "finds nothing");
      }
      if (br.certificate) g_pool.push_back({model, *br.certificate});
    }
    g_probes.push_back(probe);
  }
  const double secs = timer.seconds();
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "200 models, %d contradictions, %d undecided branches, %.1f s", contradictions,
                undecided, secs);
  if (contradictions != 0 || undecided > 40 || secs >= 600.0)
    return {false, std::string(buf) + (detail.empty() ? "" : "; " + detail)};
  return {true, buf};
}

std::vector<MatrixSpace> g_rank3_spans;

Outcome criterion3() {
  Timer timer;
  Rng rng(0xacc3);
  int bad = 0;
  std::string detail;
  auto note_fail = [&](const std::string& what, int inst) {
    ++bad;
    if (detail.empty()) detail = what + " at instance " + std::to_string(inst);
  };

  for (int inst = 0; inst < 168; ++inst) {  // family (a): weighted cross
    CrossInstance ci = random_cross_instance(rng);
    TwoSpaceVerdict v = theorem3_2x2(ci.c1, ci.c2);
    if (!v.exists) {
      note_fail("family (a) refused", inst);
      continue;
    }
    if (pair_residual(ci.c1, ci.c2, v.v1, v.v2) > 1e-8) {
      note_fail("family (a) residual", inst);
      continue;
    }
    CMat f1, f2;
    cross_formula(ci, f1, f2);
    const bool formula_ok = pair_residual(ci.c1, ci.c2, f1, f2) <= 1e-8 &&
                            (v.v1.adjoint() * v.v1 - f1.adjoint() * f1).norm() <= 1e-6 &&
                            (v.v2 * v.v2.adjoint() - f2 * f2.adjoint()).norm() <= 1e-6;
    if (!formula_ok) {
      note_fail("family (a) closed-form mismatch", inst);
      continue;
    }
    pool_from_decomposition({ci.c1, ci.c2}, 3, v.v1, v.v2);
  }

  for (int inst = 0; inst < 166; ++inst) {  // family (b): zero-row 2-subspaces
    MatrixSpace sp;
    for (;;) {
      CMat c1 = rng.gaussian(3, 3), c2 = rng.gaussian(3, 3);
      c1.row(0).setZero();
      c2.row(0).setZero();
      sp = make_space({c1, c2});
      if (effective_dim(sp) == 2 && is_k_subspace(sp, 2)) break;
    }
    const CMat u = rng.unitary(3), v = rng.unitary(3);
    if (theorem3_2x2(CMat(u * sp.basis[0] * v), CMat(u * sp.basis[1] * v)).exists)
      note_fail("family (b) accepted", inst);
  }

  for (int inst = 0; inst < 166; ++inst) {  // family (c): maximal-rank violators
    MatrixSpace sp;
    for (;;) {
      sp = make_space({rng.gaussian(3, 3), rng.gaussian(3, 3)});
      if (max_rank(sp) == 3) break;
    }
    if (theorem3_2x2(sp.basis[0], sp.basis[1]).exists)
      note_fail("family (c) accepted", inst);
    else
      g_rank3_spans.push_back(sp);
  }

  char buf[160];
  std::snprintf(buf, sizeof buf, "500 instances (168 cross / 166 zero-row / 166 rank-3), %d wrong, %.1f s",
                bad, timer.seconds());
  if (bad != 0) return {false, std::string(buf) + "; " + detail};
  return {true, buf};
}

Outcome criterion4() {
  Timer timer;
  int screened = 0, violations = 0;
  for (const ModelProbe& probe : g_probes) {
    if (probe.bound_c || probe.bound_d) continue;
    ++screened;
    if (probe.found_plus || probe.found_minus) ++violations;
  }
  int span_screened = 0;
  for (const MatrixSpace& sp : g_rank3_spans) {
    if (necessary_rank_bound(sp, 2, 2)) continue;
    ++span_screened;
    SearchBudget budget;
    budget.restarts = 64;  // refutations only need the sweep, not the polish depth
    if (search_zero_block(sp, 2, 2, budget).found.has_value()) ++violations;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%d models + %d spans with both bounds violated, %d oracle hits, %.1f s",
                screened, span_screened, violations, timer.seconds());
  return {violations == 0 && screened + span_screened > 0, buf};
}

// ---------------------------------------------------------------- criterion 5

Outcome criterion5() {
  Timer timer;
  Rng rng(0xacc5);
  int bad = 0;
  std::string detail;
  const struct {
    Eigen::Index d;
    int m, n;
  } shapes[] = {{4, 2, 2}, {5, 2, 3}, {6, 3, 3}};
  for (const auto& sh : shapes) {
    for (int inst = 0; inst < 100; ++inst) {
      MatrixSpace sp = make_space({rng.gaussian(sh.d, sh.d), rng.gaussian(sh.d, sh.d)});
      DecompResult dr = decompose(sp, static_cast<int>(sh.d) - sh.m,
                                  static_cast<int>(sh.d) - sh.n);
      if (dr.status != DecompStatus::Found || dr.layer != "pencil-triangular" ||
          dr.cert->residual > 1e-10) {
        ++bad;
        if (detail.empty())
          detail = "qz route failed at d=" + std::to_string(sh.d) + " instance " +
                   std::to_string(inst) + " (layer " + dr.layer + ")";
        continue;
      }
      // recompute the joint triangularization and measure it directly
      auto on = orthonormal_basis(sp);
      GenSchurResult gs = generalized_schur(on[0], on[1]);
      double lower = 0;
      for (Eigen::Index j = 0; j < sh.d; ++j)
        for (Eigen::Index i = j + 1; i < sh.d; ++i)
          lower = std::max(lower, std::max(std::abs(gs.ta(i, j)), std::abs(gs.tb(i, j))));
      if (lower > 1e-10) {
        ++bad;
        if (detail.empty()) detail = "triangularity residual " + std::to_string(lower);
        continue;
      }
      pool_from_decomposition(sp.basis, sh.d, dr.cert->u1, dr.cert->v2);
    }
  }

  for (int inst = 0; inst < 100; ++inst) {  // q = 4, M = N = 1, d = 5
    std::vector<CMat> basis;
    for (int i = 0; i < 4; ++i) basis.push_back(rng.gaussian(5, 5));
    MatrixSpace sp = make_space(basis);
    DecompResult dr = decompose(sp, 4, 4);
    if (dr.status != DecompStatus::Found || dr.layer.rfind("dimension-count", 0) != 0 ||
        dr.cert->residual > 1e-8) {
      ++bad;
      if (detail.empty())
        detail = "dimension-count route failed at instance " + std::to_string(inst) +
                 " (layer " + dr.layer + ")";
      continue;
    }
    pool_from_decomposition(sp.basis, 5, dr.cert->u1, dr.cert->v2);
  }

  char buf[160];
  std::snprintf(buf, sizeof buf, "300 qz + 100 dimension-count instances, %d failed, %.1f s",
                bad, timer.seconds());
  if (bad != 0) return {false, std::string(buf) + "; " + detail};
  return {true, buf};
}

// ---------------------------------------------------------------- criterion 6

Outcome criterion6() {
  Timer timer;
  Rng rng(0xacc6);
  int bad = 0;
  std::string detail;
  for (int inst = 0; inst < 100; ++inst) {
    CMat r, r_prime;
    const CMat w = product_code_frame(rng, r, r_prime);
    const CMat frame = complete_frame(rng, w);
    const int qrank = 1 + static_cast<int>(rng.integer() % 5);
    // q lives strictly inside the orthocomplement of the planted code space
    CMat qcols(9, qrank);
    const CMat comp = frame.rightCols(5);
    const CMat mix = rng.isometry(5, qrank);
    qcols = comp * mix;
    const CMat q = qcols * qcols.adjoint();
    NoiseModel model{3, HermitianUnitary{CMat::Identity(9, 9) - 2 * q, 0.5}};

    UniquenessReport ur = uniqueness_scan(model, 2, 2);
    const BranchReport& plus = ur.analysis.branches[0];
    const BranchReport& minus = ur.analysis.branches[1];
    const bool ok = ur.consistent && plus.verdict == BranchVerdict::Exists &&
                    minus.verdict != BranchVerdict::Exists && !minus.certificate.has_value();
    if (!ok) {
      ++bad;
      if (detail.empty()) {
        detail = "instance " + std::to_string(inst) + " (q rank " + std::to_string(qrank) +
                 "): plus " + plus.detail + ", minus " + minus.detail;
        if (!ur.counterexample.empty()) {
          std::fputs(ur.counterexample.c_str(), stderr);
          detail += " [counterexample dumped to stderr]";
        }
      }
      continue;
    }
    g_pool.push_back({model, *plus.certificate});
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "100 planted codes, %d inconsistent, %.1f s", bad,
                timer.seconds());
  if (bad != 0) return {false, std::string(buf) + "; " + detail};
  return {true, buf};
}

// ---------------------------------------------------------------- criterion 7

Outcome criterion7() {
  Timer timer;
  Rng rng(0xacc7);
  int bad = 0;
  std::string detail;
  auto note_fail = [&](const std::string& what, int inst) {
    ++bad;
    if (detail.empty()) detail = what + " at instance " + std::to_string(inst);
  };

  for (int inst = 0; inst < 50; ++inst) {
    const bool planted = inst % 2 == 0;
    CMat frame;
    if (planted) {
      CMat r, r_prime;
      frame = complete_frame(rng, product_code_frame(rng, r, r_prime));
    } else {
      frame = rng.unitary(9);
    }
    const double d1 = 0.9 + rng.uniform(), d2 = 2.2 + rng.uniform(), d3 = 4.0 + rng.uniform();
    PhasedProjectors ph;
    ph.p0 = frame.leftCols(5) * frame.leftCols(5).adjoint();
    ph.blocks.push_back({d1, frame.middleCols(5, 2) * frame.middleCols(5, 2).adjoint()});
    ph.blocks.push_back({d2, frame.middleCols(7, 1) * frame.middleCols(7, 1).adjoint()});
    ph.blocks.push_back({d3, frame.middleCols(8, 1) * frame.middleCols(8, 1).adjoint()});
    NoiseModel phased{3, ph};
    NoiseModel shadow{3, HermitianUnitary{2 * ph.p0 - CMat::Identity(9, 9), 0.5}};

    AnalysisReport prep = dfs_analyze(phased, 2, 2);
    AnalysisReport srep = dfs_analyze(shadow, 2, 2);
    if (prep.branches.size() != 1) {
      note_fail("phased model reported extra branches", inst);
      continue;
    }
    const BranchReport& pb = prep.branches[0];
    const BranchReport& sb = srep.branches[0];  // the +1 branch of the shadow
    if (pb.verdict != sb.verdict) {
      note_fail("verdicts differ (" + pb.detail + " vs " + sb.detail + ")", inst);
      continue;
    }
    if (planted && pb.verdict != BranchVerdict::Exists) {
      note_fail("planted code missed (" + pb.detail + ")", inst);
      continue;
    }
    if (pb.certificate.has_value() != sb.certificate.has_value()) {
      note_fail("certificates differ in presence", inst);
      continue;
    }
    if (pb.certificate && !hosts_match(*pb.certificate, *sb.certificate, 1e-8)) {
      note_fail("code projectors differ", inst);
      continue;
    }
    if (pb.certificate) {
      g_pool.push_back({phased, *pb.certificate});
      g_pool.push_back({shadow, *sb.certificate});
    }
  }

  for (int inst = 0; inst < 10; ++inst) {  // tri-unitary instances, planted
    CMat r, r_prime;
    const CMat frame = complete_frame(rng, product_code_frame(rng, r, r_prime));
    MultiUnitary mu;
    mu.p0 = frame.leftCols(5) * frame.leftCols(5).adjoint();
    mu.projectors = {frame.middleCols(5, 2) * frame.middleCols(5, 2).adjoint(),
                     frame.middleCols(7, 1) * frame.middleCols(7, 1).adjoint(),
                     frame.middleCols(8, 1) * frame.middleCols(8, 1).adjoint()};
    mu.phase_table = {{0.9 + rng.uniform(), 2.2 + rng.uniform(), 4.0 + rng.uniform()},
                      {1.6 + rng.uniform(), 3.4 + rng.uniform(), 5.0 + rng.uniform()}};
    mu.weights = {0.4, 0.3, 0.3};
    NoiseModel multi{3, mu};
    AnalysisReport rep = dfs_analyze(multi, 2, 2);
    if (rep.branches.size() != 1 || rep.branches[0].verdict != BranchVerdict::Exists) {
      note_fail("tri-unitary planted code missed", inst);
      continue;
    }
    const CodeCertificate& cert = *rep.branches[0].certificate;
    // the full error-correction system across identity and both unitaries
    if (!kl_check(kraus_operators(multi), cert.r, cert.r_prime).has_value()) {
      note_fail("tri-unitary certificate fails the three-operator system", inst);
      continue;
    }
    g_pool.push_back({multi, cert});
  }

  char buf[160];
  std::snprintf(buf, sizeof buf, "50 phased/shadow pairs + 10 tri-unitary, %d mismatched, %.1f s",
                bad, timer.seconds());
  if (bad != 0) return {false, std::string(buf) + "; " + detail};
  return {true, buf};
}

// ---------------------------------------------------------------- criterion 8

Outcome criterion8() {
  Timer timer;
  Rng rng(0xacc8);
  int bad = 0;
  double worst = 0;
  std::string detail;
  for (std::size_t pi = 0; pi < g_pool.size(); ++pi) {
    const PoolEntry& entry = g_pool[pi];
    const Eigen::Index m = entry.cert.r.cols(), n = entry.cert.r_prime.cols();
    for (int rep = 0; rep < 20; ++rep) {
      CMat rho1 = entry.cert.r * random_density(rng, m) * entry.cert.r.adjoint();
      CMat rho2 = entry.cert.r_prime * random_density(rng, n) * entry.cert.r_prime.adjoint();
      rho1 /= rho1.trace().real();  // certified isometries carry ~eps defects
      rho2 /= rho2.trace().real();
      const CMat out = apply_channel(entry.model, rho1, rho2);
      const double dist = trace_norm(out - Eigen::kroneckerProduct(rho1, rho2).eval());
      worst = std::max(worst, dist);
      if (dist > 1e-9) {
        ++bad;
        if (detail.empty())
          detail = "pool entry " + std::to_string(pi) + " drifted by " + std::to_string(dist);
        break;
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu certificates x 20 inputs, worst trace distance %.1e, %.1f s",
                g_pool.size(), worst, timer.seconds());
  if (bad != 0 || g_pool.size() < 100) return {false, std::string(buf) + "; " + detail};
  return {true, buf};
}

// ---------------------------------------------------------------- criterion 9

Outcome criterion9() {
  Timer timer;
  Rng rng(0xacc9);
  int bad = 0;

  for (int inst = 0; inst < 1000; ++inst) {  // overlap identity
    const Eigen::Index d1 = 2 + static_cast<Eigen::Index>(rng.integer() % 4);
    const Eigen::Index d2 = 2 + static_cast<Eigen::Index>(rng.integer() % 4);
    CVec av(d1 * d2), bv(d1 * d2);
    for (Eigen::Index i = 0; i < av.size(); ++i) av(i) = rng.cgauss();
    for (Eigen::Index i = 0; i < bv.size(); ++i) bv(i) = rng.cgauss();
    const PureState a = make_state(d1, d2, av), b = make_state(d1, d2, bv);
    const Cx lhs = overlap(a, b);
    const Cx rhs = (to_schmidt(a).adjoint() * to_schmidt(b)).trace();
    const Cx direct = av.dot(bv);
    if (std::abs(lhs - direct) > 1e-11 * (1 + std::abs(direct)) ||
        std::abs(rhs - direct) > 1e-11 * (1 + std::abs(direct)))
      ++bad;
  }

  for (int inst = 0; inst < 1000; ++inst) {  // transformation rule
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.integer() % 4);
    CVec av(d * d);
    for (Eigen::Index i = 0; i < av.size(); ++i) av(i) = rng.cgauss();
    const PureState psi = make_state(d, d, av);
    const CMat u1 = rng.unitary(d), u2 = rng.unitary(d);
    const CMat direct = u1 * to_schmidt(psi) * u2.transpose();
    if ((to_schmidt(local_rotate(psi, u1, u2)) - direct).norm() > 1e-11 * (1 + direct.norm()))
      ++bad;
  }

  for (int inst = 0; inst < 1000; ++inst) {  // sylvester bound on products
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.integer() % 4);
    const Eigen::Index k = 2 + static_cast<Eigen::Index>(rng.integer() % 4);
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.integer() % 4);
    const int ra =
        static_cast<int>(rng.integer() % static_cast<std::uint64_t>(std::min(m, k) + 1));
    const int rb =
        static_cast<int>(rng.integer() % static_cast<std::uint64_t>(std::min(k, n) + 1));
    const CMat a = ra == 0 ? CMat::Zero(m, k).eval()
                           : CMat(rng.gaussian(m, ra) * rng.gaussian(ra, k));
    const CMat b = rb == 0 ? CMat::Zero(k, n).eval()
                           : CMat(rng.gaussian(k, rb) * rng.gaussian(rb, n));
    const int rab = numerical_rank(CMat(a * b));
    if (rab < ra + rb - static_cast<int>(k) || rab > std::min(ra, rb)) ++bad;
  }

  for (int inst = 0; inst < 1000; ++inst) {  // reconstruction residuals
    const Eigen::Index rows = 2 + static_cast<Eigen::Index>(rng.integer() % 5);
    const Eigen::Index cols = 2 + static_cast<Eigen::Index>(rng.integer() % 5);
    const CMat mmat = rng.gaussian(rows, cols);
    SvdResult sv = svd(mmat);
    CMat sig = CMat::Zero(rows, cols);  // full u, v; sigma embeds rectangularly
    for (Eigen::Index i = 0; i < sv.sigma.size(); ++i) sig(i, i) = sv.sigma(i);
    if ((sv.u * sig * sv.v.adjoint() - mmat).norm() > 1e-11 * (1 + mmat.norm())) ++bad;
    const PureState round = from_schmidt(to_schmidt(from_schmidt(mmat)));
    if ((to_schmidt(round) - mmat).norm() != 0) ++bad;
  }

  const double secs = timer.seconds();
  char buf[160];
  std::snprintf(buf, sizeof buf, "4 x 1000 property instances, %d failures, %.1f s", bad, secs);
  return {bad == 0 && secs < 60.0, buf};
}

}  // namespace

int main() {
  struct Entry {
    const char* label;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {"golden examples", criterion1},
      {"analysis agrees with the oracle", criterion2},
      {"exact two-matrix families", criterion3},
      {"necessary bound soundness", criterion4},
      {"sufficient dimension completeness", criterion5},
      {"code eigenvalue uniqueness", criterion6},
      {"phased reduction and tri-unitary system", criterion7},
      {"behavioral fixed-point check", criterion8},
      {"schmidt/linalg property suites", criterion9},
  };
  int failures = 0;
  for (std::size_t i = 0; i < std::size(entries); ++i) {
    Outcome oc;
    try {
      oc = entries[i].fn();
    } catch (const std::exception& e) {
      oc = {false, std::string("exception: ") + e.what()};
    }
    if (!oc.pass) ++failures;
    std::printf("%s  %zu  %s (%s)\n", oc.pass ? "PASS" : "FAIL", i + 1, entries[i].label,
                oc.note.c_str());
    std::fflush(stdout);
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
