#include <cmath>

#include "dfs/linalg.hpp"
#include "doctest.h"

using namespace dfs;

namespace {

// random matrix of the given shape with exactly the given rank
CMat planted_rank(Rng& rng, Eigen::Index rows, Eigen::Index cols, int r) {
  if (r == 0) return CMat::Zero(rows, cols);
  return rng.gaussian(rows, r) * rng.gaussian(r, cols);
}

double strict_lower_norm(const CMat& m) {
  double acc = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = j + 1; i < m.rows(); ++i) acc += std::norm(m(i, j));
  return std::sqrt(acc);
}

}  // namespace

TEST_CASE("svd reconstructs and orders") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index rows = 1 + static_cast<Eigen::Index>(rng.integer() % 6);
    const Eigen::Index cols = 1 + static_cast<Eigen::Index>(rng.integer() % 6);
    const CMat m = rng.gaussian(rows, cols);
    SvdResult sv = svd(m);
    CHECK((sv.u.adjoint() * sv.u - CMat::Identity(sv.u.cols(), sv.u.cols())).norm() < 1e-12);
    CHECK((sv.v.adjoint() * sv.v - CMat::Identity(sv.v.cols(), sv.v.cols())).norm() < 1e-12);
    CMat sig = CMat::Zero(rows, cols);  // u, v are full; sigma embeds rectangularly
    for (Eigen::Index i = 0; i < sv.sigma.size(); ++i) sig(i, i) = sv.sigma(i);
    CHECK((sv.u * sig * sv.v.adjoint() - m).norm() < 1e-12 * (1 + m.norm()));
    for (Eigen::Index i = 0; i + 1 < sv.sigma.size(); ++i) CHECK(sv.sigma(i) >= sv.sigma(i + 1));
    CHECK(sv.sigma.minCoeff() >= 0);
  }
}

TEST_CASE("numerical_rank recovers planted ranks") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index rows = 2 + static_cast<Eigen::Index>(rng.integer() % 5);
    const Eigen::Index cols = 2 + static_cast<Eigen::Index>(rng.integer() % 5);
    const int r = static_cast<int>(rng.integer() % (std::min(rows, cols) + 1));
    CHECK(numerical_rank(planted_rank(rng, rows, cols, r)) == r);
  }
  // scale invariance: rank is decided relative to sigma_max
  Rng rng2(13);
  const CMat m = planted_rank(rng2, 4, 4, 2);
  CHECK(numerical_rank(CMat(1e-9 * m)) == 2);
  CHECK(numerical_rank(CMat(1e9 * m)) == 2);
  CHECK(numerical_rank(CMat::Zero(3, 3)) == 0);
}

TEST_CASE("hermitian_eig reconstructs and rejects") {
  Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.integer() % 5);
    CMat g = rng.gaussian(n, n);
    CMat h = g + g.adjoint();
    EigResult eg = hermitian_eig(h);
    CHECK((eg.vectors * eg.values.asDiagonal().toDenseMatrix().cast<Cx>() *
               eg.vectors.adjoint() -
           h).norm() < 1e-11 * (1 + h.norm()));
    for (Eigen::Index i = 0; i + 1 < eg.values.size(); ++i)
      CHECK(eg.values(i) <= eg.values(i + 1));
  }
  CMat skew(2, 2);
  skew << Cx(0, 0), Cx(1, 0), Cx(-1, 0), Cx(0, 0);
  CHECK_THROWS_AS(hermitian_eig(skew), ContractViolation);
}

TEST_CASE("generalized_schur triangularizes pairs") {
  Rng rng(15);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.integer() % 5);
    const CMat a = rng.gaussian(n, n), b = rng.gaussian(n, n);
    GenSchurResult gs = generalized_schur(a, b);
    CHECK((gs.u.adjoint() * gs.u - CMat::Identity(n, n)).norm() < 1e-11);
    CHECK((gs.v.adjoint() * gs.v - CMat::Identity(n, n)).norm() < 1e-11);
    CHECK((gs.u * a * gs.v - gs.ta).norm() < 1e-10 * (1 + a.norm()));
    CHECK((gs.u * b * gs.v - gs.tb).norm() < 1e-10 * (1 + b.norm()));
    CHECK(strict_lower_norm(gs.ta) < 1e-10 * (1 + a.norm()));
    CHECK(strict_lower_norm(gs.tb) < 1e-10 * (1 + b.norm()));
  }
  // singular pairs triangularize too
  CMat z = CMat::Zero(3, 3);
  Rng rng2(16);
  CMat c = planted_rank(rng2, 3, 3, 1);
  GenSchurResult gs = generalized_schur(z, c);
  CHECK(strict_lower_norm(gs.tb) < 1e-10 * (1 + c.norm()));
}

TEST_CASE("kernel and cokernel satisfy rank-nullity") {
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index rows = 2 + static_cast<Eigen::Index>(rng.integer() % 5);
    const Eigen::Index cols = 2 + static_cast<Eigen::Index>(rng.integer() % 5);
    const int r = static_cast<int>(rng.integer() % (std::min(rows, cols) + 1));
    const CMat m = planted_rank(rng, rows, cols, r);
    const CMat k = kernel(m);
    const CMat ck = cokernel(m);
    CHECK(k.cols() == cols - r);
    CHECK(ck.cols() == rows - r);
    if (k.cols() > 0) {
      CHECK((m * k).norm() < 1e-10 * (1 + m.norm()));
      CHECK((k.adjoint() * k - CMat::Identity(k.cols(), k.cols())).norm() < 1e-12);
    }
    if (ck.cols() > 0) {
      CHECK((ck.adjoint() * m).norm() < 1e-10 * (1 + m.norm()));
      CHECK((ck.adjoint() * ck - CMat::Identity(ck.cols(), ck.cols())).norm() < 1e-12);
    }
  }
}

TEST_CASE("sylvester rank inequality holds on products") {
  // r(A) + r(B) - k <= r(AB) <= min(r(A), r(B)) for A m x k, B k x n
  Rng rng(18);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng.integer() % 4);
    const Eigen::Index k = 2 + static_cast<Eigen::Index>(rng.integer() % 4);
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.integer() % 4);
    const int ra = static_cast<int>(rng.integer() % (std::min(m, k) + 1));
    const int rb = static_cast<int>(rng.integer() % (std::min(k, n) + 1));
    const CMat a = planted_rank(rng, m, k, ra);
    const CMat b = planted_rank(rng, k, n, rb);
    const int rab = numerical_rank(CMat(a * b));
    CHECK(rab >= ra + rb - static_cast<int>(k));
    CHECK(rab <= std::min(ra, rb));
  }
}
