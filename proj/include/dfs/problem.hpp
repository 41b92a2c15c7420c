#pragma once

#include <string>
#include <vector>

#include "dfs/channel.hpp"
#include "dfs/oracle.hpp"

namespace dfs {

enum class LambdaFilter { Auto, Both, PlusOne, MinusOne };

/// A fully specified analysis task: the noise model, the code shape, which
/// eigenvalue branches to report, and the numeric budget. `notes` carries
/// non-fatal observations from loading (unnormalized states, phase
/// re-referencing of an explicit unitary, ...).
struct Problem {
  NoiseModel model;
  Eigen::Index m = 2;
  Eigen::Index n = 2;
  LambdaFilter lambda = LambdaFilter::Auto;
  SearchBudget budget;
  std::vector<std::string> notes;
};

/// Loads a problem from its JSON description:
///   { "d": 3,
///     "noise": { "states": [kets], "p"? }
///            | { "unitary": matrix, "p"? }
///            | { "phased": { "p0_states": [kets],
///                            "blocks": [{"delta": x, "states": [kets]}], "p"? } }
///            | { "multi":  { "p0_states": [kets], "blocks": [{"states": [kets]}],
///                            "phase_table": [[x..]..], "weights": [w..] } },
///     "code_dims": [M, N], "lambda"?: "auto"|"both"|"+1"|"-1",
///     "budget"?: { "restarts"?, "max_iters"?, "tol"?, "grid_density"? },
///     "seed"?: integer }
/// Matrices are row-major nested arrays, complex entries as [re, im] pairs
/// (bare reals accepted). Ket strings follow the parse_ket grammar. Any
/// structural problem throws ContractViolation.
Problem load_problem(const std::string& json_text,
                     const Tolerance& tol = default_tolerance());
Problem load_problem_file(const std::string& path,
                          const Tolerance& tol = default_tolerance());

/// Classifies an explicit d^2 x d^2 unitary: hermitian ones stay as-is,
/// anything else enters the phased representation through its Schur form,
/// with the largest eigenphase cluster as the phase reference (a global
/// phase only rotates the reported eigenvalues, never the codes). Appends
/// a note when re-referencing changed the phases.
NoiseModel model_from_unitary(const CMat& u, Eigen::Index d, double p,
                              std::vector<std::string>& notes,
                              const Tolerance& tol = default_tolerance());

/// dfs_analyze plus the problem's branch filter: branches whose eigenvalue
/// the filter excludes are dropped from the report (their work is cheap, so
/// they are computed and discarded rather than specialized away).
AnalysisReport analyze_problem(const Problem& pb,
                               const Tolerance& tol = default_tolerance());

/// Structured report: deterministic for a fixed problem and seed except for
/// the timing field. Complex numbers as [re, im], matrices row-major.
std::string report_to_json(const Problem& pb, const AnalysisReport& rep,
                           double elapsed_ms);
std::string report_to_text(const Problem& pb, const AnalysisReport& rep,
                           double elapsed_ms);

/// Certificate files round-trip through JSON.
std::string certificate_to_json(const CodeCertificate& cert);
CodeCertificate certificate_from_json(const std::string& json_text);

/// Independent re-check of a stored certificate against a problem's model:
/// audits the fixed-point equation branch by branch (every unitary of the
/// model) with the oracle's plain-loop verifier.
struct VerifyReport {
  bool accepted = false;
  double worst_residual = 0;
  double isometry_defect = 0;
};
VerifyReport verify_problem_certificate(const Problem& pb, const CodeCertificate& cert,
                                        const Tolerance& tol = default_tolerance());
std::string verify_report_to_json(const VerifyReport& vr);
std::string verify_report_to_text(const VerifyReport& vr);

/// Oracle sweep over the complement Schmidt space of every reported branch.
struct OracleBranchReport {
  Cx lambda{1.0, 0.0};
  Eigen::Index host_rank = 0;
  bool searched = false; // false when the branch is settled without a space
  SearchOutcome outcome;
};
std::vector<OracleBranchReport> oracle_problem(const Problem& pb,
                                               const Tolerance& tol = default_tolerance());
std::string oracle_report_to_json(const Problem& pb,
                                  const std::vector<OracleBranchReport>& reps,
                                  double elapsed_ms);
std::string oracle_report_to_text(const Problem& pb,
                                  const std::vector<OracleBranchReport>& reps,
                                  double elapsed_ms);

}  // namespace dfs
