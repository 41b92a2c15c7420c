#include <chrono>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dfs/examples.hpp"
#include "dfs/ket.hpp"
#include "dfs/problem.hpp"
#include "dfs/schmidt.hpp"

namespace py = pybind11;
using namespace dfs;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

const char* verdict_name(BranchVerdict v) {
  switch (v) {
    case BranchVerdict::Exists: return "EXISTS";
    case BranchVerdict::NotExists: return "NOT-EXISTS";
    default: return "UNDECIDED";
  }
}

py::dict report_dict(const AnalysisReport& rep) {
  py::list branches;
  for (const BranchReport& br : rep.branches) {
    py::dict b;
    b["lambda"] = br.lambda;
    b["host_rank"] = br.host_rank;
    b["verdict"] = verdict_name(br.verdict);
    b["detail"] = br.detail;
    b["space_dim"] = br.space_dim;
    b["space_max_rank"] = br.space_max_rank;
    b["rank_bound_ok"] = br.rank_bound_ok;
    b["sufficient_dims"] = br.sufficient_dims;
    if (br.certificate) {
      py::dict c;
      c["lambda"] = br.certificate->lambda;
      c["r"] = br.certificate->r;
      c["r_prime"] = br.certificate->r_prime;
      c["residual"] = br.certificate->residual;
      b["certificate"] = std::move(c);
    } else {
      b["certificate"] = py::none();
    }
    branches.append(std::move(b));
  }
  py::dict out;
  out["d"] = rep.d;
  out["m"] = rep.m;
  out["n"] = rep.n;
  out["branches"] = std::move(branches);
  bool exists = false, undecided = false;
  for (const BranchReport& br : rep.branches) {
    exists = exists || br.verdict == BranchVerdict::Exists;
    undecided = undecided || br.verdict == BranchVerdict::Undecided;
  }
  out["verdict"] = exists ? "EXISTS" : undecided ? "UNDECIDED" : "NOT-EXISTS";
  return out;
}

SearchBudget budget_with(int restarts, int max_iters, double tol, int grid, std::uint64_t seed) {
  SearchBudget b;
  b.restarts = restarts;
  b.max_iters = max_iters;
  b.tol = tol;
  b.grid_density = grid;
  b.seed = seed;
  return b;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Existence, construction, and verification of product codes for "
            "two-access random-unitary channels";

  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);

  const SearchBudget defb;

  m.def(
      "analyze_json",
      [](const std::string& problem_json) {
        Problem pb = load_problem(problem_json);
        const auto t0 = std::chrono::steady_clock::now();
        AnalysisReport rep = analyze_problem(pb);
        return report_to_json(pb, rep, ms_since(t0));
      },
      py::arg("problem_json"),
      "Analyze a problem given as JSON text and return the JSON report.");

  m.def(
      "analyze",
      [](const std::string& problem_json) {
        Problem pb = load_problem(problem_json);
        return report_dict(analyze_problem(pb));
      },
      py::arg("problem_json"),
      "Analyze a problem given as JSON text and return the report as a dict "
      "(certificate matrices as numpy arrays).");

  m.def(
      "analyze_unitary",
      [](const CMat& u, Eigen::Index d, Eigen::Index m_, Eigen::Index n_, double p,
         std::uint64_t seed) {
        std::vector<std::string> notes;
        NoiseModel model = model_from_unitary(u, d, p, notes);
        SearchBudget budget;
        budget.seed = seed;
        return report_dict(dfs_analyze(model, m_, n_, budget));
      },
      py::arg("u"), py::arg("d"), py::arg("m") = 2, py::arg("n") = 2, py::arg("p") = 0.5,
      py::arg("seed") = defb.seed,
      "Analyze an explicit d^2 x d^2 unitary for an m (x) n product code.");

  m.def(
      "analyze_states",
      [](const std::vector<CVec>& states, Eigen::Index d, Eigen::Index m_, Eigen::Index n_,
         double p, std::uint64_t seed) {
        NoiseModel model{d, reflection_model(states, d, p)};
        SearchBudget budget;
        budget.seed = seed;
        return report_dict(dfs_analyze(model, m_, n_, budget));
      },
      py::arg("states"), py::arg("d"), py::arg("m") = 2, py::arg("n") = 2, py::arg("p") = 0.5,
      py::arg("seed") = defb.seed,
      "Analyze the reflection model U = 1 - 2Q, with Q spanned by the given "
      "length-d^2 amplitude vectors.");

  m.def(
      "verify",
      [](const std::string& problem_json, const std::string& certificate_json) {
        Problem pb = load_problem(problem_json);
        VerifyReport vr = verify_problem_certificate(pb, certificate_from_json(certificate_json));
        py::dict out;
        out["accepted"] = vr.accepted;
        out["worst_residual"] = vr.worst_residual;
        out["isometry_defect"] = vr.isometry_defect;
        return out;
      },
      py::arg("problem_json"), py::arg("certificate_json"),
      "Independently re-check a stored certificate against a problem.");

  m.def(
      "oracle_json",
      [](const std::string& problem_json) {
        Problem pb = load_problem(problem_json);
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<OracleBranchReport> reps = oracle_problem(pb);
        return oracle_report_to_json(pb, reps, ms_since(t0));
      },
      py::arg("problem_json"), "Run the brute-force sweep and return its JSON report.");

  m.def(
      "examples",
      []() {
        py::list out;
        for (const ExampleOutcome& oc : run_examples()) {
          py::dict e;
          e["name"] = oc.name;
          e["pass"] = oc.pass;
          e["message"] = oc.message;
          e["certificate_residual"] = oc.certificate_residual;
          out.append(std::move(e));
        }
        return out;
      },
      "Re-derive the bundled reference instances; each entry reports pass/fail.");

  m.def(
      "parse_ket",
      [](const std::string& text, Eigen::Index d) { return parse_ket(text, d).amps; },
      py::arg("text"), py::arg("d"),
      "Parse a two-sender ket expression into a length-d^2 amplitude vector.");

  m.def(
      "format_ket",
      [](const CVec& amps, Eigen::Index d) {
        if (amps.size() != d * d)
          throw ContractViolation("format_ket: amplitude vector must have length d*d");
        return format_ket(make_state(d, d, amps));
      },
      py::arg("amps"), py::arg("d"), "Render an amplitude vector in ket form.");

  m.def(
      "schmidt_matrix",
      [](const CVec& amps, Eigen::Index d) {
        if (amps.size() != d * d)
          throw ContractViolation("schmidt_matrix: amplitude vector must have length d*d");
        return to_schmidt(make_state(d, d, amps));
      },
      py::arg("amps"), py::arg("d"),
      "Coefficient matrix C with C[k, l] = amps[k*d + l].");

  m.def(
      "decompose_space",
      [](const std::vector<CMat>& basis, int t, int s, int restarts, int max_iters, double tol,
         int grid, std::uint64_t seed) {
        MatrixSpace sp = make_space(basis);
        DecompResult dr = decompose(sp, t, s, budget_with(restarts, max_iters, tol, grid, seed));
        py::dict out;
        out["status"] = dr.status == DecompStatus::Found        ? "FOUND"
                        : dr.status == DecompStatus::RefutedExact ? "REFUTED"
                                                                  : "UNDECIDED";
        out["layer"] = dr.layer;
        if (dr.cert) {
          out["u1"] = dr.cert->u1;
          out["v2"] = dr.cert->v2;
          out["residual"] = dr.cert->residual;
        }
        return out;
      },
      py::arg("basis"), py::arg("t"), py::arg("s"), py::arg("restarts") = defb.restarts,
      py::arg("max_iters") = defb.max_iters, py::arg("tol") = defb.tol,
      py::arg("grid") = defb.grid_density, py::arg("seed") = defb.seed,
      "Decide (t, s)-decomposability of the span of the given matrices.");

  m.def(
      "search_zero_block",
      [](const std::vector<CMat>& basis, int m_, int n_, int restarts, int max_iters, double tol,
         int grid, std::uint64_t seed) {
        MatrixSpace sp = make_space(basis);
        SearchOutcome so =
            search_zero_block(sp, m_, n_, budget_with(restarts, max_iters, tol, grid, seed));
        py::dict out;
        out["found"] = so.found.has_value();
        out["near_miss"] = so.near_miss;
        out["min_score"] = so.min_score;
        out["evaluations"] = so.evaluations;
        out["sweep_curve"] = so.sweep_curve;
        if (so.found) {
          out["u1"] = so.found->u1;
          out["v2"] = so.found->v2;
          out["residual"] = so.found->residual;
        }
        return out;
      },
      py::arg("basis"), py::arg("m"), py::arg("n"), py::arg("restarts") = defb.restarts,
      py::arg("max_iters") = defb.max_iters, py::arg("tol") = defb.tol,
      py::arg("grid") = defb.grid_density, py::arg("seed") = defb.seed,
      "Brute-force sweep for an m x n zero-block compression of the span.");
}
