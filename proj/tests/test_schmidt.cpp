#include <cmath>

#include "dfs/schmidt.hpp"
#include "doctest.h"

using namespace dfs;

namespace {

PureState random_state(Rng& rng, Eigen::Index d1, Eigen::Index d2) {
  CVec amps(d1 * d2);
  for (Eigen::Index i = 0; i < amps.size(); ++i) amps(i) = rng.cgauss();
  return make_state(d1, d2, std::move(amps));
}

}  // namespace

TEST_CASE("coefficient matrix round-trips the amplitude layout") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index d1 = 2 + static_cast<Eigen::Index>(rng.integer() % 4);
    const Eigen::Index d2 = 2 + static_cast<Eigen::Index>(rng.integer() % 4);
    const PureState psi = random_state(rng, d1, d2);
    const CMat c = to_schmidt(psi);
    REQUIRE(c.rows() == d1);
    REQUIRE(c.cols() == d2);
    for (Eigen::Index k = 0; k < d1; ++k)
      for (Eigen::Index l = 0; l < d2; ++l) CHECK(c(k, l) == psi.amps(k * d2 + l));
    const PureState back = from_schmidt(c);
    CHECK((back.amps - psi.amps).norm() == 0);
  }
}

TEST_CASE("overlap equals the trace pairing") {
  Rng rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d1 = 2 + static_cast<Eigen::Index>(rng.integer() % 3);
    const Eigen::Index d2 = 2 + static_cast<Eigen::Index>(rng.integer() % 3);
    const PureState a = random_state(rng, d1, d2);
    const PureState b = random_state(rng, d1, d2);
    const Cx direct = a.amps.dot(b.amps);  // Eigen dot conjugates the left factor
    const Cx via_trace = (to_schmidt(a).adjoint() * to_schmidt(b)).trace();
    CHECK(std::abs(overlap(a, b) - direct) < 1e-12 * (1 + std::abs(direct)));
    CHECK(std::abs(via_trace - direct) < 1e-12 * (1 + std::abs(direct)));
  }
}

TEST_CASE("local rotation maps the matrix one-sidedly") {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index d1 = 2 + static_cast<Eigen::Index>(rng.integer() % 3);
    const Eigen::Index d2 = 2 + static_cast<Eigen::Index>(rng.integer() % 3);
    const PureState psi = random_state(rng, d1, d2);
    const CMat u1 = rng.unitary(d1), u2 = rng.unitary(d2);
    const PureState rotated = local_rotate(psi, u1, u2);
    const CMat expected = u1 * to_schmidt(psi) * u2.transpose();
    CHECK((to_schmidt(rotated) - expected).norm() < 1e-12 * (1 + expected.norm()));
    // norms are preserved, so is the schmidt rank
    CHECK(std::abs(rotated.amps.norm() - psi.amps.norm()) < 1e-12);
    CHECK(schmidt_rank(rotated) == schmidt_rank(psi));
  }
}

TEST_CASE("schmidt_rank counts planted coefficients") {
  Rng rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index d = 3 + static_cast<Eigen::Index>(rng.integer() % 3);
    const int r = 1 + static_cast<int>(rng.integer() % d);
    CMat c = CMat::Zero(d, d);
    for (int i = 0; i < r; ++i) c(i, i) = Cx(1.0 + rng.uniform(), 0);
    const CMat u1 = rng.unitary(d), u2 = rng.unitary(d);
    CHECK(schmidt_rank(from_schmidt(CMat(u1 * c * u2))) == r);
  }
}

TEST_CASE("normalization helpers") {
  Rng rng(25);
  PureState psi = random_state(rng, 3, 3);
  psi.amps *= 7.0;
  CHECK(!is_normalized(psi));
  const PureState unit = normalized(psi);
  CHECK(is_normalized(unit));
  CHECK(std::abs(unit.amps.norm() - 1.0) < 1e-12);
  // direction is kept
  const Cx ratio = psi.amps(0) / unit.amps(0);
  CHECK((psi.amps - ratio * unit.amps).norm() < 1e-10);

  PureState zero = make_state(2, 2, CVec::Zero(4));
  CHECK_THROWS_AS(normalized(zero), ContractViolation);
  CHECK_THROWS_AS(make_state(2, 2, CVec::Zero(3)), ContractViolation);
}
