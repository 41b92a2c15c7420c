#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dfs/oracle.hpp"
#include "dfs/rankspace.hpp"
#include "dfs/theorem3.hpp"
#include "dfs/types.hpp"

namespace dfs {

/// Two-access random unitary noise, rho -> p*rho + (1-p) U rho U^H on
/// C^d (x) C^d, with U hermitian (U = P - Q) so its spectrum is {+1, -1}.
struct HermitianUnitary {
  CMat u;         // d^2 x d^2, unitary involution
  double p = 0.5; // identity weight
};

struct PhaseBlock {
  double delta = 0.0; // eigenphase in (0, 2*pi); the phase-0 block is p0
  CMat projector;
};

/// U = P0 + sum_k exp(i delta_k) P_k with mutually orthogonal projectors
/// summing to the identity. A phase on P0 would be a global factor, so it
/// is pinned to zero and every listed delta must stay away from 0 mod 2*pi.
struct PhasedProjectors {
  CMat p0;
  std::vector<PhaseBlock> blocks;
  double p = 0.5;
};

/// Several unitaries sharing the fixed block P0 and the eigenprojectors
/// Q_k, each with its own phase row: U_j = P0 + sum_k exp(i theta_jk) Q_k.
/// The channel mixes them with `weights` (leading entry = identity term).
struct MultiUnitary {
  CMat p0;
  std::vector<CMat> projectors;
  std::vector<std::vector<double>> phase_table; // one row per unitary
  std::vector<double> weights;                  // size = rows + 1, sums to 1
};

struct NoiseModel {
  Eigen::Index d = 0; // local dimension; the channel acts on C^d (x) C^d
  std::variant<HermitianUnitary, PhasedProjectors, MultiUnitary> noise;
};

/// Throws ContractViolation unless every structural invariant of the
/// variant holds (unitarity, projector orthogonality, completeness, phase
/// ranges, weight normalization) within tol.contract.
void validate(const NoiseModel& model, const Tolerance& tol = default_tolerance());

/// The unitaries mixed by the channel, identity excluded.
std::vector<CMat> model_unitaries(const NoiseModel& model);

/// Kraus operators of the mixture: sqrt(w0) I followed by sqrt(w_j) U_j.
std::vector<CMat> kraus_operators(const NoiseModel& model);

/// Applies the channel to rho1 (x) rho2. Both inputs must be density
/// matrices on C^d within tol.contract.
CMat apply_channel(const NoiseModel& model, const CMat& rho1, const CMat& rho2,
                   const Tolerance& tol = default_tolerance());

/// Knill-Laflamme test for the product code r (x) r_prime: returns the
/// hermitian matrix alpha with Pi A_i^H A_j Pi = alpha_ij Pi when every
/// residual stays under tol.residual, nothing otherwise.
std::optional<CMat> kl_check(const std::vector<CMat>& kraus, const CMat& r, const CMat& r_prime,
                             const Tolerance& tol = default_tolerance());

/// Spectral split of the noise. For hermitian noise p/q are the +1/-1
/// eigenprojectors; the phase-resolved list always starts with the phase-0
/// block. Multi-unitary models have no single split and are rejected.
struct Eigenspaces {
  CMat p, q;
  Eigen::Index rank_p = 0, rank_q = 0;
  std::vector<PhaseBlock> blocks;
};

Eigenspaces eigenspaces(const NoiseModel& model, const Tolerance& tol = default_tolerance());

/// Schmidt matrices of an orthonormal eigenbasis of range(q), as a matrix
/// space on d x d. All downstream decisions are basis-independent.
MatrixSpace schmidt_space_of_projector(const CMat& q, Eigen::Index d,
                                       const Tolerance& tol = default_tolerance());

/// Splits a projector on C^d (x) C^d into local factors q = pa (x) pb when
/// they exist: reshuffle across the cut, demand one operator-Schmidt
/// coefficient, rescale the factors to idempotents.
std::optional<std::pair<CMat, CMat>> product_projector(
    const CMat& q, Eigen::Index d, const Tolerance& tol = default_tolerance());

/// Hermitian model U = 1 - 2Q for Q the orthogonal projector onto the span
/// of the given pure states on C^d (x) C^d (length d*d amplitude vectors,
/// orthonormalized internally, so only the span matters).
HermitianUnitary reflection_model(const std::vector<CVec>& states, Eigen::Index d,
                                  double p = 0.5,
                                  const Tolerance& tol = default_tolerance());

/// A verified M (x) N product code: the channel restricted to
/// range(r (x) r_prime) multiplies states by lambda on the noisy branch.
struct CodeCertificate {
  CMat r;       // d x M isometry
  CMat r_prime; // d x N isometry
  Cx lambda{1.0, 0.0};
  double residual = 0.0;
};

enum class BranchVerdict { Exists, NotExists, Undecided };

struct BranchReport {
  Cx lambda{1.0, 0.0};
  Eigen::Index host_rank = 0; // rank of the eigenspace that must host the code
  BranchVerdict verdict = BranchVerdict::Undecided;
  std::string detail; // deciding layer or refusal reason
  std::optional<CodeCertificate> certificate;
  double best_search_score = std::numeric_limits<double>::infinity();
  // bound evaluations for the complement Schmidt space (set on decompose branches)
  int space_dim = 0;            // number of independent Schmidt matrices
  int space_max_rank = 0;       // witnessed maximal rank over the space
  bool rank_bound_ok = false;   // necessary: max rank <= (d-M) + (d-N)
  bool sufficient_dims = false; // a dimension-count construction is guaranteed
};

struct AnalysisReport {
  Eigen::Index d = 0, m = 0, n = 0;
  std::vector<BranchReport> branches;
  std::vector<CodeCertificate> certificates; // accepted ones, in branch order
};

/// The eigenvalue branches the analysis walks: a code with eigenvalue
/// lambda must live inside range(host) and kill the complement projector.
/// Hermitian models carry the +1 and -1 branches; phased models the fixed
/// block, plus the phase block when there is exactly one distinct phase;
/// several distinct phases leave only the fixed block.
struct EigenBranch {
  Cx lambda{1.0, 0.0};
  CMat host;
  CMat complement;
};
std::vector<EigenBranch> eigen_branches(const NoiseModel& model,
                                        const Tolerance& tol = default_tolerance());

/// Decides existence of an M (x) N product code for every admissible
/// eigenvalue lambda of the model and constructs certificates where they
/// exist. Non-existence is only ever asserted by an exact layer; exhausted
/// searches surface as Undecided. Every certificate is re-verified against
/// the defining fixed-point equation before being reported.
AnalysisReport dfs_analyze(const NoiseModel& model, Eigen::Index m, Eigen::Index n,
                           const SearchBudget& budget = SearchBudget{},
                           const Tolerance& tol = default_tolerance());

/// Exact 2 (x) 2 decision for d = 3 hermitian noise with rank(Q) = 7: the
/// +1 eigenspace is two-dimensional and its Schmidt space feeds the exact
/// two-matrix decision, with lambda = -1 semantics for the certificate.
TwoSpaceVerdict theorem3_q7(const MatrixSpace& p_schmidt_space,
                            const Tolerance& tol = default_tolerance());

/// Converts a zero-block certificate on the Schmidt space of the
/// complementary eigenprojector into a code certificate (residual left to
/// the caller's re-verification).
CodeCertificate certificate_from_decomposition(const DecompCertificate& cert, Cx lambda);

struct UniquenessReport {
  AnalysisReport analysis;
  int certificate_count = 0;
  bool consistent = true;     // at most one branch certified a code
  std::string counterexample; // dump of the offending model and certificates
};

/// Runs both hermitian branches at d = 3, M = N = 2 and checks that at
/// most one eigenvalue carries a code; a violation is reported verbatim,
/// never discarded.
UniquenessReport uniqueness_scan(const NoiseModel& model, Eigen::Index m, Eigen::Index n,
                                 const SearchBudget& budget = SearchBudget{},
                                 const Tolerance& tol = default_tolerance());

} // namespace dfs
