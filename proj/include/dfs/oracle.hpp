#pragma once

#include <optional>
#include <vector>

#include "dfs/rankspace.hpp"
#include "dfs/types.hpp"

namespace dfs {

/// Brute-force witness search, kept deliberately independent from the exact
/// decision layers: it consumes only singular values and elementary
/// arithmetic, never the joint triangularization or the decompose internals.
///
/// Searches for an m x a isometry v1 (orthonormal rows) such that the
/// stacked matrix [v1*c_i] over the basis has numerical rank <= b - n; the
/// kernel of that stack then supplies v2 with v1*c_i*v2 = 0. Stage one is a
/// coarse sweep (a full Fubini-Study grid over the projective sphere when
/// m = a-1, random isometries otherwise), stage two a derivative-free local
/// refinement of the best sweep points followed by alternating projection
/// polish. A candidate below `budget.tol` after polish is a find; one that
/// only reaches the looser search threshold is flagged as near-miss.
struct SearchOutcome {
  std::optional<DecompCertificate> found;
  double min_score = std::numeric_limits<double>::infinity();
  long evaluations = 0;
  bool near_miss = false;            // polished into (tol, search_tol]
  std::vector<double> sweep_curve;   // per-slice minima of the coarse sweep
};

SearchOutcome search_zero_block(const MatrixSpace& sp, int m, int n,
                                const SearchBudget& budget = {},
                                const Tolerance& tol = default_tolerance());

/// Residual recomputation with plain entry loops (no shared decomposition
/// code), for auditing certificates produced elsewhere. Returns the largest
/// absolute entry of u1*c*v2 over the basis, relative to the largest basis
/// norm, plus the isometry defects of u1 and v2.
struct CertificateAudit {
  double block_residual = 0;   // relative to the largest basis norm
  double isometry_defect = 0;  // max deviation of u1 u1^H and v2^H v2 from identity
  bool accepted = false;
};

CertificateAudit verify_certificate(const MatrixSpace& sp,
                                    const DecompCertificate& cert,
                                    const Tolerance& tol = default_tolerance());

/// Same audit for a code certificate against an explicit d^2 x d^2 unitary:
/// checks (P (x) P') U (P (x) P') = lambda * (P (x) P') entry by entry, where
/// P = r r^H and P' = r' r'^H are the local code projectors.
CertificateAudit verify_code_certificate(const CMat& u, const CMat& r,
                                         const CMat& r_prime, Cx lambda,
                                         const Tolerance& tol = default_tolerance());

}  // namespace dfs
