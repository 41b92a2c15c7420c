#include <cmath>
#include <string>
#include <vector>

#include "dfs/channel.hpp"
#include "dfs/examples.hpp"
#include "dfs/ket.hpp"
#include "doctest.h"

using namespace dfs;

namespace {

std::vector<CVec> ket_states(const std::vector<std::string>& kets, Eigen::Index d) {
  std::vector<CVec> out;
  for (const auto& k : kets) out.push_back(parse_ket(k, d).amps);
  return out;
}

CMat random_density(Rng& rng, Eigen::Index n) {
  const CMat g = rng.gaussian(n, n);
  CMat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

// orthogonal projector from explicit orthonormal columns
CMat span_projector(const CMat& cols) { return cols * cols.adjoint(); }

NoiseModel code_model() {
  NoiseModel model;
  model.d = 3;
  model.noise = reflection_model(
      ket_states({"1/sqrt(2)(|02> + |10>)", "1/sqrt(2)(|01> + |20>)"}, 3), 3);
  return model;
}

PhasedProjectors split_phased(Rng& rng, Eigen::Index dd, Eigen::Index rank0,
                              const std::vector<std::pair<double, Eigen::Index>>& blocks) {
  const CMat u = rng.unitary(dd);
  PhasedProjectors ph;
  Eigen::Index at = 0;
  ph.p0 = span_projector(u.middleCols(at, rank0));
  at += rank0;
  for (const auto& [delta, r] : blocks) {
    ph.blocks.push_back({delta, span_projector(u.middleCols(at, r))});
    at += r;
  }
  return ph;
}

}  // namespace

TEST_CASE("validate guards every model family") {
  NoiseModel model;
  model.d = 3;

  HermitianUnitary hu;
  hu.u = CMat::Ones(9, 9);
  model.noise = hu;
  CHECK_THROWS_AS(validate(model), ContractViolation);

  hu.u = CMat::Identity(9, 9);
  hu.p = 1.5;
  model.noise = hu;
  CHECK_THROWS_AS(validate(model), ContractViolation);

  Rng rng(81);
  PhasedProjectors ph = split_phased(rng, 9, 5, {{1.0, 2}, {2.5, 2}});
  model.noise = ph;
  validate(model);  // well formed

  PhasedProjectors zero_phase = ph;
  zero_phase.blocks[0].delta = 0.0;
  model.noise = zero_phase;
  CHECK_THROWS_AS(validate(model), ContractViolation);

  PhasedProjectors overlapping = ph;
  overlapping.blocks[1].projector = overlapping.blocks[0].projector;
  model.noise = overlapping;
  CHECK_THROWS_AS(validate(model), ContractViolation);

  PhasedProjectors incomplete = ph;
  incomplete.blocks.pop_back();
  model.noise = incomplete;
  CHECK_THROWS_AS(validate(model), ContractViolation);

  MultiUnitary mu;
  mu.p0 = ph.p0;
  mu.projectors = {ph.blocks[0].projector, ph.blocks[1].projector};
  mu.phase_table = {{1.0, 2.0}, {2.0, 4.0}};
  mu.weights = {0.5, 0.25, 0.25};
  model.noise = mu;
  validate(model);

  MultiUnitary off = mu;
  off.weights = {0.5, 0.3, 0.3};
  model.noise = off;
  CHECK_THROWS_AS(validate(model), ContractViolation);
}

TEST_CASE("reflection_model reflects exactly the given span") {
  const auto states = ket_states({"1/sqrt(2)(|02> + |10>)", "1/sqrt(2)(|01> + |20>)"}, 3);
  HermitianUnitary hu = reflection_model(states, 3);
  CHECK((hu.u - hu.u.adjoint()).norm() < 1e-12);
  CHECK((hu.u * hu.u - CMat::Identity(9, 9)).norm() < 1e-12);
  for (const CVec& s : states) CHECK((hu.u * s + s).norm() < 1e-12);

  // a vector orthogonal to the span is fixed
  CVec probe = CVec::Zero(9);
  probe(0) = Cx(1, 0);  // |00> is orthogonal to both states
  CHECK((hu.u * probe - probe).norm() < 1e-12);

  // the span, not the listing, determines the model
  std::vector<CVec> doubled = states;
  doubled.push_back(states[0] + states[1]);
  CHECK((reflection_model(doubled, 3).u - hu.u).norm() < 1e-10);

  CHECK_THROWS_AS(reflection_model({}, 3), ContractViolation);
  CHECK_THROWS_AS(reflection_model({CVec::Zero(9)}, 3), ContractViolation);
  CHECK_THROWS_AS(reflection_model({CVec::Ones(4)}, 3), ContractViolation);
  CHECK_THROWS_AS(reflection_model(states, 1), ContractViolation);
}

TEST_CASE("eigenspaces and kraus structure") {
  NoiseModel model = code_model();
  Eigenspaces eg = eigenspaces(model);
  CHECK(eg.rank_p == 7);
  CHECK(eg.rank_q == 2);
  CHECK((eg.p + eg.q - CMat::Identity(9, 9)).norm() < 1e-10);
  CHECK((eg.p * eg.q).norm() < 1e-10);

  auto us = model_unitaries(model);
  REQUIRE(us.size() == 1);
  auto kraus = kraus_operators(model);
  REQUIRE(kraus.size() == 2);
  CMat acc = CMat::Zero(9, 9);
  for (const CMat& k : kraus) acc += k.adjoint() * k;
  CHECK((acc - CMat::Identity(9, 9)).norm() < 1e-10);

  Rng rng(82);
  MultiUnitary mu;
  PhasedProjectors ph = split_phased(rng, 9, 5, {{1.0, 2}, {2.5, 2}});
  mu.p0 = ph.p0;
  mu.projectors = {ph.blocks[0].projector, ph.blocks[1].projector};
  mu.phase_table = {{1.0, 2.0}, {2.0, 4.0}};
  mu.weights = {0.4, 0.3, 0.3};
  NoiseModel multi{3, mu};
  CHECK(model_unitaries(multi).size() == 2);
  CHECK(kraus_operators(multi).size() == 3);
  CHECK_THROWS_AS(eigenspaces(multi), ContractViolation);
}

TEST_CASE("apply_channel is trace preserving and hermitian") {
  Rng rng(83);
  NoiseModel model = code_model();
  for (int trial = 0; trial < 10; ++trial) {
    const CMat r1 = random_density(rng, 3), r2 = random_density(rng, 3);
    const CMat out = apply_channel(model, r1, r2);
    CHECK(std::abs(out.trace().real() - 1.0) < 1e-10);
    CHECK((out - out.adjoint()).norm() < 1e-10);
  }
  CHECK_THROWS_AS(apply_channel(model, CMat::Identity(3, 3), random_density(rng, 3)),
                  ContractViolation);  // trace 3 is not a state
}

TEST_CASE("kl_check accepts the worked code and rejects a wrong one") {
  NoiseModel model = code_model();
  CMat r = CMat::Zero(3, 2);
  r(1, 0) = r(2, 1) = Cx(1, 0);
  auto alpha = kl_check(kraus_operators(model), r, r);
  REQUIRE(alpha.has_value());
  CHECK((*alpha - alpha->adjoint()).norm() < 1e-10);
  // p = 1/2 and lambda = +1 pin the whole table to 1/2
  CHECK((*alpha - CMat::Constant(2, 2, Cx(0.5, 0))).norm() < 1e-8);

  CMat wrong = CMat::Zero(3, 2);
  wrong(0, 0) = wrong(1, 1) = Cx(1, 0);
  CHECK(!kl_check(kraus_operators(model), wrong, wrong).has_value());
}

TEST_CASE("schmidt spaces and product detection") {
  Rng rng(84);
  NoiseModel model = code_model();
  Eigenspaces eg = eigenspaces(model);
  MatrixSpace cq = schmidt_space_of_projector(eg.q, 3);
  CHECK(effective_dim(cq) == 2);
  MatrixSpace cp = schmidt_space_of_projector(eg.p, 3);
  CHECK(effective_dim(cp) == 7);

  // planted product projector is recovered exactly
  const CMat pa = span_projector(rng.isometry(3, 2));
  const CMat pb = span_projector(rng.isometry(3, 1));
  CMat q = CMat::Zero(9, 9);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j)
      q.block(i * 3, j * 3, 3, 3) = pa(i, j) * pb;
  auto split = product_projector(q, 3);
  REQUIRE(split.has_value());
  CHECK((split->first - pa).norm() < 1e-8);
  CHECK((split->second - pb).norm() < 1e-8);

  // the antisymmetric projector is entangled across the cut
  CMat anti = CMat::Zero(9, 9);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) {
      if (i == j) continue;
      CVec v = CVec::Zero(9);
      v(i * 3 + j) = Cx(M_SQRT1_2, 0);
      v(j * 3 + i) = Cx(-M_SQRT1_2, 0);
      anti += 0.5 * v * v.adjoint();  // each pair visited twice
    }
  CHECK(!product_projector(anti, 3).has_value());
}

TEST_CASE("eigen_branches follow the phase structure") {
  NoiseModel model = code_model();
  auto hermitian_branches = eigen_branches(model);
  REQUIRE(hermitian_branches.size() == 2);
  CHECK(std::abs(hermitian_branches[0].lambda - Cx(1, 0)) < 1e-12);
  CHECK(std::abs(hermitian_branches[1].lambda + Cx(1, 0)) < 1e-12);
  for (const auto& br : hermitian_branches)
    CHECK((br.host + br.complement - CMat::Identity(9, 9)).norm() < 1e-10);

  Rng rng(85);
  PhasedProjectors one_phase = split_phased(rng, 9, 5, {{1.3, 4}});
  NoiseModel single{3, one_phase};
  auto sb = eigen_branches(single);
  REQUIRE(sb.size() == 2);
  CHECK(std::abs(sb[0].lambda - Cx(1, 0)) < 1e-12);
  CHECK(std::abs(sb[1].lambda - std::polar(1.0, 1.3)) < 1e-12);

  PhasedProjectors three_phase = split_phased(rng, 9, 5, {{1.0, 2}, {2.0, 1}, {3.0, 1}});
  NoiseModel multi_phase{3, three_phase};
  auto mb = eigen_branches(multi_phase);
  REQUIRE(mb.size() == 1);
  CHECK(std::abs(mb[0].lambda - Cx(1, 0)) < 1e-12);
  // the complement collects every phase block
  CHECK((mb[0].host - three_phase.p0).norm() < 1e-10);
  CHECK((mb[0].host + mb[0].complement - CMat::Identity(9, 9)).norm() < 1e-10);
}

TEST_CASE("dfs_analyze settles the worked models") {
  NoiseModel model = code_model();
  AnalysisReport rep = dfs_analyze(model, 2, 2);
  REQUIRE(rep.branches.size() == 2);
  const auto& plus = rep.branches[0];
  CHECK(plus.verdict == BranchVerdict::Exists);
  REQUIRE(plus.certificate.has_value());
  CMat p12 = CMat::Zero(3, 3);
  p12(1, 1) = p12(2, 2) = Cx(1, 0);
  CHECK((plus.certificate->r * plus.certificate->r.adjoint() - p12).norm() < 1e-8);
  CHECK((plus.certificate->r_prime * plus.certificate->r_prime.adjoint() - p12).norm() < 1e-8);
  CHECK(rep.branches[1].verdict == BranchVerdict::NotExists);
  CHECK(rep.certificates.size() == 1);

  // branch bound fields describe the complement space
  CHECK(plus.space_dim == 2);
  CHECK(plus.rank_bound_ok);

  NoiseModel no_code{3, reflection_model(ket_states({"1/sqrt(3)(|00> + |11> + |22>)"}, 3), 3)};
  AnalysisReport none = dfs_analyze(no_code, 2, 2);
  for (const auto& br : none.branches) CHECK(br.verdict == BranchVerdict::NotExists);
  CHECK(none.certificates.empty());
}

TEST_CASE("decomposition certificates convert to code certificates") {
  NoiseModel model = code_model();
  Eigenspaces eg = eigenspaces(model);
  MatrixSpace cq = schmidt_space_of_projector(eg.q, 3);
  DecompResult dr = decompose(cq, 1, 1);
  REQUIRE(dr.status == DecompStatus::Found);
  CodeCertificate cc = certificate_from_decomposition(*dr.cert, Cx(1, 0));
  const auto& hu = std::get<HermitianUnitary>(model.noise);
  CHECK(verify_code_certificate(hu.u, cc.r, cc.r_prime, cc.lambda).accepted);
}

TEST_CASE("uniqueness_scan sees one code at most") {
  UniquenessReport ur = uniqueness_scan(code_model(), 2, 2);
  CHECK(ur.consistent);
  CHECK(ur.certificate_count == 1);
  CHECK(ur.counterexample.empty());
}

TEST_CASE("bundled reference cases all pass") {
  auto outcomes = run_examples();
  REQUIRE(outcomes.size() == 6);
  for (const auto& oc : outcomes) {
    INFO(oc.name, ": ", oc.message);
    CHECK(oc.pass);
    if (oc.certificate_residual >= 0) CHECK(oc.certificate_residual <= 1e-10);
  }
}
