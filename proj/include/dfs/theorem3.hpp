#pragma once

#include <optional>
#include <string>

#include "dfs/rankspace.hpp"
#include "dfs/types.hpp"

namespace dfs {

/// Exact decision for a two-matrix span of 3x3 matrices and a 2x2 target
/// block: does the span admit isometries v1 (2x3, orthonormal rows) and
/// v2 (3x2, orthonormal columns) with v1 * c * v2 = 0 on the whole span?
///
/// The decision is constructive. After rotating the higher-rank matrix to
/// diag(0, b, a) by its singular value decomposition, existence reduces to
/// three polynomial conditions on the other matrix (the coefficients of the
/// pencil determinant), and each surviving case carries a closed-form
/// certificate: the weighted cross-pair isometries, a 2x2 joint
/// triangularization with a row swap, or a proportionality system that is
/// solvable exactly when the pencil contains a rank-one element.
struct TwoSpaceVerdict {
  bool exists = false;
  std::string path;  // construction that settled it
  CMat v1;           // 2x3, valid iff exists
  CMat v2;           // 3x2, valid iff exists
  double residual = 0;
};

TwoSpaceVerdict theorem3_2x2(const CMat& c1, const CMat& c2,
                             const Tolerance& tol = default_tolerance());

}  // namespace dfs
