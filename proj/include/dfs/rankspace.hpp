#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dfs/linalg.hpp"
#include "dfs/types.hpp"

namespace dfs {

/// Span of complex a x b matrices, given by a (possibly redundant) list of
/// spanning matrices. Zero matrices are dropped at construction; duplicate
/// directions are legal and handled through effective_dim.
struct MatrixSpace {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<CMat> basis;
};

MatrixSpace make_space(std::vector<CMat> basis,
                       const Tolerance& tol = default_tolerance());

/// Dimension of the span = rank of the matrix of vectorized basis elements.
int effective_dim(const MatrixSpace& sp, const Tolerance& tol = default_tolerance());

/// Orthonormal spanning matrices (trace inner product), effective_dim of them.
std::vector<CMat> orthonormal_basis(const MatrixSpace& sp,
                                    const Tolerance& tol = default_tolerance());

/// Largest rank attained on the span. Randomized: `trials` random complex
/// combinations plus the basis elements themselves; the reported value is a
/// witnessed lower bound that is exact with overwhelming probability (rank
/// deficiency on the sampled combination is a measure-zero event repeated
/// `trials` times). For spaces of dimension <= 3 over 3x3 matrices the
/// rank <= 2 question is settled exactly through the determinant polynomial,
/// and dimension <= 2 also settles rank <= 1 through the minor polynomials.
int max_rank(const MatrixSpace& sp, int trials = 64, std::uint64_t seed = 0x5eed,
             const Tolerance& tol = default_tolerance());

/// True iff every nonzero element of the span has rank exactly k. Exact for
/// effective_dim <= 2 over 3x3 matrices (pencil polynomial analysis); larger
/// spaces combine exact determinant interpolation with randomized sampling
/// and a multistart search for lower-rank elements.
bool is_k_subspace(const MatrixSpace& sp, int k, std::uint64_t seed = 0x5eed,
                   const Tolerance& tol = default_tolerance());

/// Location of a rank <= 1 element in the pencil c1 - gamma*c2 (3x3).
/// at_infinity marks the c2 direction itself. The nine 2x2 minors of the
/// pencil are quadratics in gamma; a candidate root counts only if every
/// minor vanishes there.
struct PencilRankOne {
  Cx gamma = Cx(0, 0);
  bool at_infinity = false;
};

std::optional<PencilRankOne> rank1_in_pencil(const CMat& c1, const CMat& c2,
                                             const Tolerance& tol = default_tolerance());

/// Orthonormal columns spanning the joint right (resp. left) null space of
/// every element of the span.
CMat common_kernel(const MatrixSpace& sp, const Tolerance& tol = default_tolerance());
CMat common_cokernel(const MatrixSpace& sp, const Tolerance& tol = default_tolerance());

/// A matrix of shape a x b with an m x n block of zeros has rank at most
/// (a-m) + (b-n); returns whether max_rank respects that bound, a cheap
/// refutation filter for the decomposition search.
bool necessary_rank_bound(const MatrixSpace& sp, int m, int n,
                          std::uint64_t seed = 0x5eed,
                          const Tolerance& tol = default_tolerance());

/// Witness that every element of the span, compressed by u1 from the left
/// and v2 from the right, vanishes: u1 * c * v2 = 0 with u1 an (a-t) x a
/// isometry (orthonormal rows) and v2 a b x (b-s) isometry (orthonormal
/// columns). residual is relative to the largest basis norm.
struct DecompCertificate {
  int t = 0;
  int s = 0;
  CMat u1;
  CMat v2;
  double residual = 0;
};

enum class DecompStatus { Found, RefutedExact, Undecided };

struct DecompResult {
  DecompStatus status = DecompStatus::Undecided;
  std::optional<DecompCertificate> cert;
  std::string layer;  // which decision layer settled the question
  double best_search_score = std::numeric_limits<double>::quiet_NaN();
};

/// Decide whether the span is equivalent to a space of matrices with an
/// (a-t) x (b-s) zero block in the upper-left corner. Layered: trivial cases,
/// the rank bound, joint kernels, the exact one- and two-matrix routes, the
/// dimension-count construction, and finally the numerical search. Exact
/// layers either certify or refute; the search layer can only certify, and
/// reports Undecided when the budget runs out.
DecompResult decompose(const MatrixSpace& sp, int t, int s,
                       const SearchBudget& budget = {},
                       const Tolerance& tol = default_tolerance());

/// Smallest singular values route used by the exact >=4-dimensional layer:
/// multistart minimization of sigma_{r+1} over unit-norm combinations,
/// looking for an element of rank <= r in the span. Returns the combination
/// coefficients on the orthonormal basis when one is found.
std::optional<CVec> find_low_rank_element(const MatrixSpace& sp, int r,
                                          int restarts, std::uint64_t seed,
                                          const Tolerance& tol = default_tolerance());

}  // namespace dfs
