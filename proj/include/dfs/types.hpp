#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace dfs {

using Cx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Thrown when an input violates a documented precondition.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an internal numerical step cannot reach its accuracy target.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One knob set threaded through every numerical decision. Tests tighten or
/// loosen the process-wide default; library code never hardcodes cutoffs.
struct Tolerance {
  double rank_rel = 1e-9;    // singular values <= rank_rel * sigma_max do not count toward rank
  double abs_floor = 1e-14;  // a matrix whose largest singular value is below this is zero
  double contract = 1e-10;   // hermiticity / unitarity / projector admission checks
  double residual = 1e-8;    // certificate acceptance threshold, relative to input scale
};

Tolerance& default_tolerance();

void ensure(bool cond, const std::string& what);
void ensure_finite(const CMat& m, const std::string& where);

/// Budget for randomized searches. Deterministic: the same budget and seed
/// reproduce the same outcome; enlarging restarts never loses a hit.
struct SearchBudget {
  int restarts = 256;
  int max_iters = 500;
  double tol = 1e-8;
  int grid_density = 24;  // grid points per angle in the coarse projective sweep
  std::uint64_t seed = 0x5eed;
};

/// Deterministic random source with derived substreams, so independent
/// restarts can be replayed in isolation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng substream(std::uint64_t idx) const;

  double uniform();  // [0, 1)
  double gauss();
  Cx cgauss();
  std::uint64_t integer();

  CMat gaussian(Eigen::Index rows, Eigen::Index cols);
  CMat unitary(Eigen::Index n);
  CMat isometry(Eigen::Index rows, Eigen::Index cols);  // cols <= rows, orthonormal columns
  CMat projector(Eigen::Index n, Eigen::Index rank);

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace dfs
