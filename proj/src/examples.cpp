#include "dfs/examples.hpp"

#include <cmath>
#include <sstream>

#include "dfs/ket.hpp"

namespace dfs {
namespace {

CMat span2(int i, int j) {
  CMat r = CMat::Zero(3, 2);
  r(i, 0) = 1;
  r(j, 1) = 1;
  return r;
}

std::vector<ExampleCase> build_cases() {
  std::vector<ExampleCase> cs;

  // one maximally entangled state: the lone Schmidt matrix has full rank,
  // which already violates the necessary rank bound
  cs.push_back({"one-state-full-rank",
                {"1/sqrt(3)(|00> + |11> + |22>)"},
                false,
                Cx(1, 0),
                CMat(),
                CMat()});

  // two states whose Schmidt span is a 2-subspace with a common zero row:
  // (0,2)-decomposable but not (1,1)-decomposable
  cs.push_back({"two-state-zero-row",
                {"1/sqrt(2)(|11> + |22>)", "1/sqrt(2)(|10> + |21>)"},
                false,
                Cx(1, 0),
                CMat(),
                CMat()});

  // two states admitting a code on the +1 eigenspace: R = R' = span{e1, e2}
  cs.push_back({"two-state-code",
                {"1/sqrt(2)(|02> + |10>)", "1/sqrt(2)(|01> + |20>)"},
                true,
                Cx(1, 0),
                span2(1, 2),
                span2(1, 2)});

  // the antisymmetric subspace: U is the swap, no code on either branch
  cs.push_back({"antisymmetric",
                {"1/sqrt(2)(|01> - |10>)", "1/sqrt(2)(|12> - |21>)",
                 "1/sqrt(2)(|02> - |20>)"},
                false,
                Cx(1, 0),
                CMat(),
                CMat()});

  // Q itself is the product projector onto span{e0,e1} (x) span{e0,e1},
  // so the code sits on the -1 eigenspace
  cs.push_back({"product-block",
                {"|00>", "|01>", "|10>", "|11>"},
                true,
                Cx(-1, 0),
                span2(0, 1),
                span2(0, 1)});

  // four states whose Schmidt span contains a rank-3 element and whose
  // projector is not a product: no code on either branch
  cs.push_back({"rank-three",
                {"1/sqrt(2)(|00> + |11>)", "|20>", "|21>", "|22>"},
                false,
                Cx(1, 0),
                CMat(),
                CMat()});

  return cs;
}

double projector_distance(const CMat& a, const CMat& b) {
  return (a * a.adjoint() - b * b.adjoint()).norm();
}

const char* verdict_name(BranchVerdict v) {
  switch (v) {
    case BranchVerdict::Exists: return "EXISTS";
    case BranchVerdict::NotExists: return "NOT-EXISTS";
    default: return "UNDECIDED";
  }
}

}  // namespace

const std::vector<ExampleCase>& bundled_examples() {
  static const std::vector<ExampleCase> cases = build_cases();
  return cases;
}

std::vector<ExampleOutcome> run_examples(const SearchBudget& budget, const Tolerance& tol) {
  std::vector<ExampleOutcome> out;
  for (const ExampleCase& ec : bundled_examples()) {
    ExampleOutcome oc;
    oc.name = ec.name;

    std::vector<CVec> states;
    states.reserve(ec.states.size());
    for (const std::string& s : ec.states) states.push_back(parse_ket(s, 3).amps);
    NoiseModel model{3, reflection_model(states, 3, 0.5, tol)};
    oc.report = dfs_analyze(model, 2, 2, budget, tol);

    std::ostringstream why;
    bool ok = true;
    const BranchReport* winner = nullptr;
    for (const BranchReport& br : oc.report.branches) {
      if (br.verdict == BranchVerdict::Undecided) {
        ok = false;
        why << "branch lambda=" << br.lambda << " undecided (" << br.detail << "); ";
      }
      if (br.verdict == BranchVerdict::Exists && winner == nullptr) winner = &br;
    }

    if (ec.exists) {
      if (winner == nullptr) {
        ok = false;
        why << "expected a code, none found; ";
      } else {
        const CodeCertificate& cert = *winner->certificate;
        oc.certificate_residual = cert.residual;
        if (std::abs(winner->lambda - ec.lambda) > 1e-9) {
          ok = false;
          why << "code on lambda=" << winner->lambda << ", expected " << ec.lambda << "; ";
        }
        const double dr = projector_distance(cert.r, ec.expected_r);
        const double drp = projector_distance(cert.r_prime, ec.expected_r_prime);
        if (dr > 1e-8 || drp > 1e-8) {
          ok = false;
          why << "code subspace off by (" << dr << ", " << drp << "); ";
        }
      }
    } else if (winner != nullptr) {
      ok = false;
      why << "expected no code, found one on lambda=" << winner->lambda << "; ";
    }

    if (!ok) {
      why << "branches:";
      for (const BranchReport& br : oc.report.branches)
        why << " [lambda=" << br.lambda << " " << verdict_name(br.verdict) << " "
            << br.detail << "]";
    }
    oc.pass = ok;
    oc.message = ok ? "" : why.str();
    out.push_back(std::move(oc));
  }
  return out;
}

}  // namespace dfs
