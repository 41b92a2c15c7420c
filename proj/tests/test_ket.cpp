#include <cmath>

#include "dfs/ket.hpp"
#include "doctest.h"

using namespace dfs;

TEST_CASE("parse_ket reads the worked forms") {
  const double s2 = 1.0 / std::sqrt(2.0);
  PureState psi = parse_ket("1/sqrt(2)(|02> + |10>)", 3);
  CHECK(std::abs(psi.amps(0 * 3 + 2) - Cx(s2, 0)) < 1e-15);
  CHECK(std::abs(psi.amps(1 * 3 + 0) - Cx(s2, 0)) < 1e-15);
  CHECK(psi.amps.cwiseAbs().sum() == doctest::Approx(2 * s2).epsilon(1e-14));

  psi = parse_ket("|00> - |11>", 2);
  CHECK(psi.amps(0) == Cx(1, 0));
  CHECK(psi.amps(3) == Cx(-1, 0));

  // amplitudes accumulate per label
  psi = parse_ket("|01> + |01> - 0.5|01>", 2);
  CHECK(std::abs(psi.amps(1) - Cx(1.5, 0)) < 1e-15);

  // complex coefficients and nesting
  psi = parse_ket("(0.5,-0.25)|11> + 2(|00> - (0.0,1.0)|01>)", 2);
  CHECK(std::abs(psi.amps(3) - Cx(0.5, -0.25)) < 1e-15);
  CHECK(std::abs(psi.amps(0) - Cx(2, 0)) < 1e-15);
  CHECK(std::abs(psi.amps(1) - Cx(0, -2)) < 1e-15);

  // leading sign and fraction coefficient
  psi = parse_ket("-3/4|21>", 3);
  CHECK(std::abs(psi.amps(2 * 3 + 1) - Cx(-0.75, 0)) < 1e-15);
}

TEST_CASE("format then parse reproduces amplitudes within 1e-12") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.integer() % 8);  // 2..9
    CVec amps(d * d);
    for (Eigen::Index i = 0; i < amps.size(); ++i)
      amps(i) = (rng.uniform() < 0.3) ? Cx(0, 0) : rng.cgauss();
    if (amps.norm() == 0) amps(0) = Cx(1, 0);
    const PureState psi = make_state(d, d, amps);
    const PureState back = parse_ket(format_ket(psi), d);
    REQUIRE(back.amps.size() == psi.amps.size());
    CHECK((back.amps - psi.amps).norm() < 1e-12 * (1 + psi.amps.norm()));
  }
}

TEST_CASE("parse_ket rejects malformed input") {
  CHECK_THROWS_AS(parse_ket("|02> + |10>", 2), ContractViolation);   // digit out of range
  CHECK_THROWS_AS(parse_ket("|0>", 3), ContractViolation);           // one label only
  CHECK_THROWS_AS(parse_ket("|00", 3), ContractViolation);           // missing '>'
  CHECK_THROWS_AS(parse_ket("|00> trailing", 3), ContractViolation); // junk after expr
  CHECK_THROWS_AS(parse_ket("", 3), ContractViolation);              // empty
  CHECK_THROWS_AS(parse_ket("1/sqrt(2(|00>)", 3), ContractViolation);
  CHECK_THROWS_AS(parse_ket("|00>", 1), ContractViolation);          // d below 2
  CHECK_THROWS_AS(parse_ket("|00>", 10), ContractViolation);         // labels cap d at 9
}
