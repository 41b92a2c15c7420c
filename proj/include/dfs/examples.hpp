#pragma once

#include <string>
#include <vector>

#include "dfs/channel.hpp"

namespace dfs {

/// Bundled reference instances: d = 3 hermitian models U = 1 - 2Q with Q
/// spanned by a handful of pure states, probed for 2 (x) 2 product codes.
/// Each case records its known ground truth; where a code exists the code
/// subspace is unique, so certificates are compared as projectors.
struct ExampleCase {
  std::string name;
  std::vector<std::string> states; // ket expressions spanning range(Q)
  bool exists = false;
  Cx lambda{1.0, 0.0}; // eigenvalue hosting the code, meaningful when exists
  CMat expected_r;       // 3 x 2 isometry spanning R, empty when no code
  CMat expected_r_prime; // 3 x 2 isometry spanning R'
};

const std::vector<ExampleCase>& bundled_examples();

struct ExampleOutcome {
  std::string name;
  bool pass = false;
  std::string message; // empty on pass, first mismatch otherwise
  AnalysisReport report;
  double certificate_residual = -1; // worst accepted residual, -1 without certificate
};

/// Re-derives every bundled case and checks it against its ground truth:
/// every branch must be decided (no Undecided), the existence verdict must
/// match, and certificates must reproduce the expected code subspace to
/// projector distance 1e-8.
std::vector<ExampleOutcome> run_examples(const SearchBudget& budget = SearchBudget{},
                                         const Tolerance& tol = default_tolerance());

}  // namespace dfs
