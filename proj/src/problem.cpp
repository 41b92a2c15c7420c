#include "dfs/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dfs/ket.hpp"
#include "json.hpp"

namespace dfs {
namespace {

using nlohmann::json;

constexpr double kTwoPi = 6.283185307179586476925286766559;

[[noreturn]] void bad(const std::string& what) { throw ContractViolation("problem: " + what); }

const json& require(const json& j, const char* key, const char* ctx) {
  auto it = j.find(key);
  if (it == j.end()) bad(std::string(ctx) + " is missing field '" + key + "'");
  return *it;
}

double number_field(const json& j, const char* ctx) {
  if (!j.is_number()) bad(std::string(ctx) + " must be a number");
  return j.get<double>();
}

Cx cx_from_json(const json& j, const char* ctx) {
  if (j.is_number()) return Cx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Cx(j[0].get<double>(), j[1].get<double>());
  bad(std::string(ctx) + " entries must be numbers or [re, im] pairs");
}

json cx_to_json(Cx z) { return json::array({z.real(), z.imag()}); }

CMat mat_from_json(const json& j, const char* ctx) {
  if (!j.is_array() || j.empty()) bad(std::string(ctx) + " must be a non-empty array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) bad(std::string(ctx) + " rows must be non-empty arrays");
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  CMat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      bad(std::string(ctx) + " rows must all have length " + std::to_string(cols));
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = cx_from_json(row[static_cast<std::size_t>(c)], ctx);
  }
  return m;
}

json mat_to_json(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(cx_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CVec> kets_from_json(const json& j, Eigen::Index d, const char* ctx,
                                 std::vector<std::string>& notes) {
  if (!j.is_array() || j.empty()) bad(std::string(ctx) + " must be a non-empty array of kets");
  std::vector<CVec> states;
  states.reserve(j.size());
  for (const json& s : j) {
    if (!s.is_string()) bad(std::string(ctx) + " entries must be ket strings");
    PureState ps = parse_ket(s.get<std::string>(), d);
    const double nrm = ps.amps.norm();
    if (nrm <= 1e-14) bad(std::string(ctx) + ": state '" + s.get<std::string>() + "' is zero");
    if (std::abs(nrm - 1.0) > 1e-9) {
      std::ostringstream os;
      os << ctx << ": state '" << s.get<std::string>() << "' has norm " << std::setprecision(12)
         << nrm << " (spans are normalized internally)";
      notes.push_back(os.str());
    }
    states.push_back(std::move(ps.amps));
  }
  return states;
}

CMat projector_from_states(const std::vector<CVec>& states, Eigen::Index dd,
                           const Tolerance& tol) {
  CMat stack(dd, static_cast<Eigen::Index>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i)
    stack.col(static_cast<Eigen::Index>(i)) = states[i];
  SvdResult sv = svd(stack);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.sigma.size(); ++i)
    if (sv.sigma(i) > tol.rank_rel * sv.sigma(0)) ++rank;
  const CMat b = sv.u.leftCols(rank);
  return b * b.adjoint();
}

}  // namespace

NoiseModel model_from_unitary(const CMat& u, Eigen::Index d, double p,
                              std::vector<std::string>& notes, const Tolerance& tol) {
  const Eigen::Index dd = d * d;
  if (u.rows() != dd || u.cols() != dd)
    bad("noise.unitary must be d^2 x d^2 = " + std::to_string(dd) + "x" + std::to_string(dd));
  const double scale = 1.0 + std::sqrt(static_cast<double>(dd));
  if ((u.adjoint() * u - CMat::Identity(dd, dd)).norm() > tol.contract * scale)
    bad("noise.unitary is not unitary");
  if ((u - u.adjoint()).norm() <= tol.contract * (1.0 + u.norm()))
    return NoiseModel{d, HermitianUnitary{u, p}};

  Eigen::ComplexSchur<CMat> schur(u);
  if (schur.info() != Eigen::Success) throw NumericalFailure("problem: Schur of noise.unitary failed");
  const CMat q = schur.matrixU();
  std::vector<std::pair<double, Eigen::Index>> phases(static_cast<std::size_t>(dd));
  for (Eigen::Index i = 0; i < dd; ++i) {
    double th = std::arg(schur.matrixT()(i, i));
    if (th < 0) th += kTwoPi;
    phases[static_cast<std::size_t>(i)] = {th, i};
  }
  std::sort(phases.begin(), phases.end());

  struct Cluster {
    double phase_sum = 0;
    std::vector<Eigen::Index> members;
  };
  const double gap = 1e-8;
  std::vector<Cluster> clusters;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (i == 0 || phases[i].first - phases[i - 1].first > gap) clusters.emplace_back();
    clusters.back().phase_sum += phases[i].first;
    clusters.back().members.push_back(phases[i].second);
  }
  if (clusters.size() > 1 &&
      phases.front().first + kTwoPi - phases.back().first <= gap) {
    // the circle wraps: the top cluster is the bottom one shifted by 2 pi
    Cluster& last = clusters.back();
    clusters.front().phase_sum += last.phase_sum - kTwoPi * static_cast<double>(last.members.size());
    clusters.front().members.insert(clusters.front().members.end(), last.members.begin(),
                                    last.members.end());
    clusters.pop_back();
  }

  std::size_t ref = 0;
  for (std::size_t c = 1; c < clusters.size(); ++c)
    if (clusters[c].members.size() > clusters[ref].members.size()) ref = c;
  const double ref_phase =
      clusters[ref].phase_sum / static_cast<double>(clusters[ref].members.size());

  auto cluster_projector = [&](const Cluster& c) {
    CMat pr = CMat::Zero(dd, dd);
    for (Eigen::Index i : c.members) pr += q.col(i) * q.col(i).adjoint();
    return pr;
  };

  PhasedProjectors ph;
  ph.p = p;
  ph.p0 = cluster_projector(clusters[ref]);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (c == ref) continue;
    double delta = clusters[c].phase_sum / static_cast<double>(clusters[c].members.size()) -
                   ref_phase;
    while (delta <= 0) delta += kTwoPi;
    while (delta >= kTwoPi) delta -= kTwoPi;
    ph.blocks.push_back({delta, cluster_projector(clusters[c])});
  }
  if (std::abs(ref_phase) > 1e-12) {
    std::ostringstream os;
    os << "noise.unitary carries a global phase: reported eigenvalues are relative to exp("
       << std::setprecision(12) << ref_phase << "i) on its largest eigenblock";
    notes.push_back(os.str());
  }
  return NoiseModel{d, std::move(ph)};
}

namespace {

NoiseModel noise_from_json(const json& jn, Eigen::Index d, std::vector<std::string>& notes,
                           const Tolerance& tol) {
  if (!jn.is_object()) bad("'noise' must be an object");
  const Eigen::Index dd = d * d;

  double p = 0.5;
  if (jn.contains("p")) {
    p = number_field(jn["p"], "noise.p");
    if (!(p >= 0.0 && p <= 1.0)) bad("noise.p must lie in [0, 1]");
  }

  if (jn.contains("states")) {
    std::vector<CVec> states = kets_from_json(jn["states"], d, "noise.states", notes);
    return NoiseModel{d, reflection_model(states, d, p, tol)};
  }
  if (jn.contains("unitary")) return model_from_unitary(mat_from_json(jn["unitary"], "noise.unitary"), d, p, notes, tol);
  if (jn.contains("phased")) {
    const json& jp = jn["phased"];
    if (!jp.is_object()) bad("'noise.phased' must be an object");
    if (jp.contains("p")) {
      p = number_field(jp["p"], "noise.phased.p");
      if (!(p >= 0.0 && p <= 1.0)) bad("noise.phased.p must lie in [0, 1]");
    }
    PhasedProjectors ph;
    ph.p = p;
    ph.p0 = projector_from_states(
        kets_from_json(require(jp, "p0_states", "noise.phased"), d, "noise.phased.p0_states", notes),
        dd, tol);
    const json& jb = require(jp, "blocks", "noise.phased");
    if (!jb.is_array()) bad("noise.phased.blocks must be an array");
    for (std::size_t i = 0; i < jb.size(); ++i) {
      const std::string ctx = "noise.phased.blocks[" + std::to_string(i) + "]";
      const json& blk = jb[i];
      if (!blk.is_object()) bad(ctx + " must be an object");
      PhaseBlock pb;
      pb.delta = number_field(require(blk, "delta", ctx.c_str()), (ctx + ".delta").c_str());
      pb.projector = projector_from_states(
          kets_from_json(require(blk, "states", ctx.c_str()), d, (ctx + ".states").c_str(), notes),
          dd, tol);
      ph.blocks.push_back(std::move(pb));
    }
    return NoiseModel{d, std::move(ph)};
  }
  if (jn.contains("multi")) {
    const json& jm = jn["multi"];
    if (!jm.is_object()) bad("'noise.multi' must be an object");
    if (jn.contains("p") || jm.contains("p"))
      bad("multi-unitary noise takes explicit 'weights', not 'p'");
    MultiUnitary mu;
    mu.p0 = projector_from_states(
        kets_from_json(require(jm, "p0_states", "noise.multi"), d, "noise.multi.p0_states", notes),
        dd, tol);
    const json& jb = require(jm, "blocks", "noise.multi");
    if (!jb.is_array() || jb.empty()) bad("noise.multi.blocks must be a non-empty array");
    for (std::size_t i = 0; i < jb.size(); ++i) {
      const std::string ctx = "noise.multi.blocks[" + std::to_string(i) + "]";
      if (!jb[i].is_object()) bad(ctx + " must be an object");
      mu.projectors.push_back(projector_from_states(
          kets_from_json(require(jb[i], "states", ctx.c_str()), d, (ctx + ".states").c_str(), notes),
          dd, tol));
    }
    const json& jt = require(jm, "phase_table", "noise.multi");
    if (!jt.is_array() || jt.empty()) bad("noise.multi.phase_table must be a non-empty array of rows");
    for (std::size_t r = 0; r < jt.size(); ++r) {
      if (!jt[r].is_array() || jt[r].size() != jb.size())
        bad("noise.multi.phase_table rows must have one phase per block");
      std::vector<double> row;
      for (const json& v : jt[r]) row.push_back(number_field(v, "noise.multi.phase_table"));
      mu.phase_table.push_back(std::move(row));
    }
    const json& jw = require(jm, "weights", "noise.multi");
    if (!jw.is_array()) bad("noise.multi.weights must be an array");
    for (const json& v : jw) mu.weights.push_back(number_field(v, "noise.multi.weights"));
    return NoiseModel{d, std::move(mu)};
  }
  bad("'noise' must contain one of: states, unitary, phased, multi");
}

LambdaFilter lambda_from_json(const json& j) {
  if (!j.is_string()) bad("'lambda' must be a string");
  const std::string s = j.get<std::string>();
  if (s == "auto") return LambdaFilter::Auto;
  if (s == "both") return LambdaFilter::Both;
  if (s == "+1" || s == "1") return LambdaFilter::PlusOne;
  if (s == "-1") return LambdaFilter::MinusOne;
  bad("'lambda' must be one of auto, both, +1, -1");
}

const char* lambda_filter_name(LambdaFilter f) {
  switch (f) {
    case LambdaFilter::Auto: return "auto";
    case LambdaFilter::Both: return "both";
    case LambdaFilter::PlusOne: return "+1";
    default: return "-1";
  }
}

const char* verdict_name(BranchVerdict v) {
  switch (v) {
    case BranchVerdict::Exists: return "EXISTS";
    case BranchVerdict::NotExists: return "NOT-EXISTS";
    default: return "UNDECIDED";
  }
}

const char* model_name(const NoiseModel& model) {
  if (std::holds_alternative<HermitianUnitary>(model.noise)) return "hermitian";
  if (std::holds_alternative<PhasedProjectors>(model.noise)) return "phased";
  return "multi";
}

std::string lambda_str(Cx lambda) {
  if (std::abs(lambda - Cx(1, 0)) <= 1e-9) return "+1";
  if (std::abs(lambda + Cx(1, 0)) <= 1e-9) return "-1";
  std::ostringstream os;
  os << "exp(" << std::setprecision(12) << std::arg(lambda) << "i)";
  return os.str();
}

json certificate_json(const CodeCertificate& cert) {
  json jc;
  jc["lambda"] = cx_to_json(cert.lambda);
  jc["r"] = mat_to_json(cert.r);
  jc["r_prime"] = mat_to_json(cert.r_prime);
  jc["residual"] = cert.residual;
  return jc;
}

std::string fmt_mat(const CMat& m) {
  std::ostringstream os;
  os << std::setprecision(6);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << "    [";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Cx z = m(r, c);
      os << " (" << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i)";
    }
    os << " ]\n";
  }
  return os.str();
}

bool keep_branch(LambdaFilter f, Cx lambda) {
  switch (f) {
    case LambdaFilter::PlusOne: return std::abs(lambda - Cx(1, 0)) <= 1e-9;
    case LambdaFilter::MinusOne: return std::abs(lambda + Cx(1, 0)) <= 1e-9;
    default: return true;  // auto and both report every admissible branch
  }
}

}  // namespace

Problem load_problem(const std::string& json_text, const Tolerance& tol) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("top level must be an object");

  Problem pb;
  const json& jd = require(j, "d", "problem");
  if (!jd.is_number_integer()) bad("'d' must be an integer");
  const Eigen::Index d = jd.get<Eigen::Index>();
  if (d < 2 || d > 8) bad("'d' must lie in [2, 8]");

  const json& jc = require(j, "code_dims", "problem");
  if (!jc.is_array() || jc.size() != 2 || !jc[0].is_number_integer() || !jc[1].is_number_integer())
    bad("'code_dims' must be [M, N] with integer entries");
  pb.m = jc[0].get<Eigen::Index>();
  pb.n = jc[1].get<Eigen::Index>();
  if (pb.m < 1 || pb.m > d || pb.n < 1 || pb.n > d)
    bad("'code_dims' must satisfy 1 <= M, N <= d");

  if (j.contains("lambda")) pb.lambda = lambda_from_json(j["lambda"]);

  if (j.contains("budget")) {
    const json& jb = j["budget"];
    if (!jb.is_object()) bad("'budget' must be an object");
    if (jb.contains("restarts")) pb.budget.restarts = static_cast<int>(number_field(jb["restarts"], "budget.restarts"));
    if (jb.contains("max_iters")) pb.budget.max_iters = static_cast<int>(number_field(jb["max_iters"], "budget.max_iters"));
    if (jb.contains("tol")) pb.budget.tol = number_field(jb["tol"], "budget.tol");
    if (jb.contains("grid_density")) pb.budget.grid_density = static_cast<int>(number_field(jb["grid_density"], "budget.grid_density"));
    if (pb.budget.restarts < 1 || pb.budget.max_iters < 1 || pb.budget.grid_density < 2 ||
        !(pb.budget.tol > 0))
      bad("'budget' overrides out of range");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() || j["seed"].get<long long>() < 0)
      bad("'seed' must be a non-negative integer");
    pb.budget.seed = j["seed"].get<std::uint64_t>();
  }

  pb.model = noise_from_json(require(j, "noise", "problem"), d, pb.notes, tol);
  validate(pb.model, tol);
  return pb;
}

Problem load_problem_file(const std::string& path, const Tolerance& tol) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_problem(buf.str(), tol);
}

AnalysisReport analyze_problem(const Problem& pb, const Tolerance& tol) {
  AnalysisReport rep = dfs_analyze(pb.model, pb.m, pb.n, pb.budget, tol);
  if (pb.lambda == LambdaFilter::PlusOne || pb.lambda == LambdaFilter::MinusOne) {
    std::vector<BranchReport> kept;
    for (BranchReport& br : rep.branches)
      if (keep_branch(pb.lambda, br.lambda)) kept.push_back(std::move(br));
    rep.branches = std::move(kept);
    rep.certificates.clear();
    for (const BranchReport& br : rep.branches)
      if (br.certificate) rep.certificates.push_back(*br.certificate);
  }
  return rep;
}

std::string report_to_json(const Problem& pb, const AnalysisReport& rep, double elapsed_ms) {
  json out;
  out["d"] = rep.d;
  out["m"] = rep.m;
  out["n"] = rep.n;
  out["model"] = model_name(pb.model);
  out["lambda_filter"] = lambda_filter_name(pb.lambda);
  out["seed"] = pb.budget.seed;
  out["notes"] = pb.notes;
  out["timing_ms"] = elapsed_ms;

  json branches = json::array();
  for (const BranchReport& br : rep.branches) {
    json jb;
    jb["lambda"] = cx_to_json(br.lambda);
    jb["host_rank"] = br.host_rank;
    jb["verdict"] = verdict_name(br.verdict);
    jb["detail"] = br.detail;
    jb["space_dim"] = br.space_dim;
    jb["space_max_rank"] = br.space_max_rank;
    jb["rank_bound_ok"] = br.rank_bound_ok;
    jb["sufficient_dims"] = br.sufficient_dims;
    jb["best_search_score"] =
        std::isfinite(br.best_search_score) ? json(br.best_search_score) : json(nullptr);
    jb["certificate"] = br.certificate ? certificate_json(*br.certificate) : json(nullptr);
    branches.push_back(std::move(jb));
  }
  out["branches"] = std::move(branches);

  json certs = json::array();
  for (const CodeCertificate& c : rep.certificates) certs.push_back(certificate_json(c));
  out["certificates"] = std::move(certs);

  std::string verdict = "NOT-EXISTS";
  for (const BranchReport& br : rep.branches)
    if (br.verdict == BranchVerdict::Exists) verdict = "EXISTS";
  if (verdict == "NOT-EXISTS")
    for (const BranchReport& br : rep.branches)
      if (br.verdict == BranchVerdict::Undecided) verdict = "UNDECIDED";
  out["verdict"] = verdict;
  return out.dump(2) + "\n";
}

std::string report_to_text(const Problem& pb, const AnalysisReport& rep, double elapsed_ms) {
  std::ostringstream os;
  os << "product code analysis: d=" << rep.d << ", code " << rep.m << "x" << rep.n << ", model "
     << model_name(pb.model) << ", lambda filter " << lambda_filter_name(pb.lambda) << ", seed "
     << pb.budget.seed << "\n";
  for (const std::string& n : pb.notes) os << "note: " << n << "\n";
  if (rep.branches.empty()) os << "no admissible branch matches the lambda filter\n";

  bool exists = false, undecided = false;
  for (const BranchReport& br : rep.branches) {
    os << "branch lambda=" << lambda_str(br.lambda) << ": " << verdict_name(br.verdict) << " ["
       << br.detail << "]  host rank " << br.host_rank;
    if (br.space_dim > 0)
      os << ", space dim " << br.space_dim << ", max rank " << br.space_max_rank << ", rank bound "
         << (br.rank_bound_ok ? "ok" : "violated") << ", dimension construction "
         << (br.sufficient_dims ? "guaranteed" : "not guaranteed");
    if (std::isfinite(br.best_search_score)) os << ", best search score " << br.best_search_score;
    os << "\n";
    if (br.certificate) {
      const CodeCertificate& c = *br.certificate;
      os << "  certificate residual " << c.residual << "\n";
      os << "  R =\n" << fmt_mat(c.r) << "  R' =\n" << fmt_mat(c.r_prime);
    }
    exists = exists || br.verdict == BranchVerdict::Exists;
    undecided = undecided || br.verdict == BranchVerdict::Undecided;
  }
  os << "result: "
     << (exists ? "code EXISTS" : undecided ? "UNDECIDED (no code found, branches unresolved)"
                                            : "no product code")
     << "  (" << std::setprecision(4) << elapsed_ms << " ms)\n";
  return os.str();
}

std::string certificate_to_json(const CodeCertificate& cert) {
  return certificate_json(cert).dump(2) + "\n";
}

CodeCertificate certificate_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    bad(std::string("certificate: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("certificate: top level must be an object");
  CodeCertificate cert;
  cert.lambda = cx_from_json(require(j, "lambda", "certificate"), "certificate.lambda");
  cert.r = mat_from_json(require(j, "r", "certificate"), "certificate.r");
  cert.r_prime = mat_from_json(require(j, "r_prime", "certificate"), "certificate.r_prime");
  if (j.contains("residual")) cert.residual = number_field(j["residual"], "certificate.residual");
  return cert;
}

VerifyReport verify_problem_certificate(const Problem& pb, const CodeCertificate& cert,
                                        const Tolerance& tol) {
  const Eigen::Index d = pb.model.d;
  if (cert.r.rows() != d || cert.r_prime.rows() != d)
    bad("certificate isometries must have d rows");
  VerifyReport vr;
  vr.accepted = true;

  const bool multi = std::holds_alternative<MultiUnitary>(pb.model.noise);
  const Cx lam = multi ? Cx(1, 0) : cert.lambda;
  if (multi && std::abs(cert.lambda - Cx(1, 0)) > 1e-9) vr.accepted = false;
  for (const CMat& u : model_unitaries(pb.model)) {
    CertificateAudit audit = verify_code_certificate(u, cert.r, cert.r_prime, lam, tol);
    vr.worst_residual = std::max(vr.worst_residual, audit.block_residual);
    vr.isometry_defect = std::max(vr.isometry_defect, audit.isometry_defect);
    vr.accepted = vr.accepted && audit.accepted;
  }
  // the audit owns malformed certificates (FAIL, not an input error); the
  // stricter fixed-point check only sees ones that already passed it
  if (vr.accepted && !kl_check(kraus_operators(pb.model), cert.r, cert.r_prime, tol))
    vr.accepted = false;
  return vr;
}

std::string verify_report_to_json(const VerifyReport& vr) {
  json j;
  j["accepted"] = vr.accepted;
  j["worst_residual"] = vr.worst_residual;
  j["isometry_defect"] = vr.isometry_defect;
  return j.dump(2) + "\n";
}

std::string verify_report_to_text(const VerifyReport& vr) {
  std::ostringstream os;
  os << (vr.accepted ? "PASS" : "FAIL") << ": worst residual " << vr.worst_residual
     << ", isometry defect " << vr.isometry_defect << "\n";
  return os.str();
}

std::vector<OracleBranchReport> oracle_problem(const Problem& pb, const Tolerance& tol) {
  std::vector<OracleBranchReport> out;
  for (const EigenBranch& eb : eigen_branches(pb.model, tol)) {
    if (!keep_branch(pb.lambda, eb.lambda)) continue;
    OracleBranchReport rep;
    rep.lambda = eb.lambda;
    rep.host_rank = std::llround(eb.host.trace().real());
    if (rep.host_rank >= pb.m * pb.n) {
      MatrixSpace sp = schmidt_space_of_projector(eb.complement, pb.model.d, tol);
      rep.outcome = search_zero_block(sp, static_cast<int>(pb.m), static_cast<int>(pb.n),
                                      pb.budget, tol);
      rep.searched = true;
    }
    out.push_back(std::move(rep));
  }
  return out;
}

std::string oracle_report_to_json(const Problem& pb, const std::vector<OracleBranchReport>& reps,
                                  double elapsed_ms) {
  json out;
  out["d"] = pb.model.d;
  out["m"] = pb.m;
  out["n"] = pb.n;
  out["model"] = model_name(pb.model);
  out["seed"] = pb.budget.seed;
  out["timing_ms"] = elapsed_ms;
  json branches = json::array();
  for (const OracleBranchReport& r : reps) {
    json jb;
    jb["lambda"] = cx_to_json(r.lambda);
    jb["host_rank"] = r.host_rank;
    jb["searched"] = r.searched;
    jb["found"] = r.searched && r.outcome.found.has_value();
    jb["near_miss"] = r.outcome.near_miss;
    jb["min_score"] =
        std::isfinite(r.outcome.min_score) ? json(r.outcome.min_score) : json(nullptr);
    jb["evaluations"] = r.outcome.evaluations;
    jb["sweep_curve"] = r.outcome.sweep_curve;
    if (r.outcome.found) {
      json jc;
      jc["u1"] = mat_to_json(r.outcome.found->u1);
      jc["v2"] = mat_to_json(r.outcome.found->v2);
      jc["residual"] = r.outcome.found->residual;
      jb["certificate"] = std::move(jc);
    } else {
      jb["certificate"] = nullptr;
    }
    branches.push_back(std::move(jb));
  }
  out["branches"] = std::move(branches);
  return out.dump(2) + "\n";
}

std::string oracle_report_to_text(const Problem& pb, const std::vector<OracleBranchReport>& reps,
                                  double elapsed_ms) {
  std::ostringstream os;
  os << "oracle sweep: d=" << pb.model.d << ", code " << pb.m << "x" << pb.n << ", model "
     << model_name(pb.model) << ", seed " << pb.budget.seed << "\n";
  for (const OracleBranchReport& r : reps) {
    os << "branch lambda=" << lambda_str(r.lambda) << ": host rank " << r.host_rank;
    if (!r.searched) {
      os << ", not searched (host cannot fit the code)\n";
      continue;
    }
    os << ", " << (r.outcome.found ? "HIT" : r.outcome.near_miss ? "near miss" : "no hit")
       << ", min score " << r.outcome.min_score << ", " << r.outcome.evaluations
       << " evaluations";
    if (!r.outcome.sweep_curve.empty()) {
      double lo = r.outcome.sweep_curve[0], hi = r.outcome.sweep_curve[0];
      for (double v : r.outcome.sweep_curve) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      os << ", sweep curve " << r.outcome.sweep_curve.size() << " slices in [" << lo << ", " << hi
         << "]";
    }
    os << "\n";
  }
  os << "(" << std::setprecision(4) << elapsed_ms << " ms)\n";
  return os.str();
}

}  // namespace dfs
