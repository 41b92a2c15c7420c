#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dfs/examples.hpp"
#include "dfs/problem.hpp"

namespace {

using namespace dfs;

// exit contract: 0 completed (any verdict, including a failed verification),
// 2 input error, 3 internal numerical failure, 4 bundled-example mismatch

struct CommonOpts {
  std::string format = "text";
  bool quiet = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;
  std::optional<int> grid;
  std::optional<double> tol;
  std::optional<std::string> lambda;
  std::optional<std::string> code;
  std::optional<int> dims;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_problem_opts) {
  cmd->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  cmd->add_flag("--quiet", o.quiet, "Print only the final verdict");
  if (!with_problem_opts) return;
  cmd->add_option("--seed", o.seed, "Override the RNG seed");
  cmd->add_option("--restarts", o.restarts, "Override the search restart count");
  cmd->add_option("--grid", o.grid, "Override the sweep grid density");
  cmd->add_option("--tol", o.tol, "Override the search acceptance tolerance");
  cmd->add_option("--lambda", o.lambda, "Branch filter")
      ->check(CLI::IsMember({"auto", "both", "+1", "-1"}));
  cmd->add_option("--code", o.code, "Code shape MxN, overrides the problem file");
  cmd->add_option("--dims", o.dims, "Assert the local dimension of the problem file");
}

void apply_overrides(Problem& pb, const CommonOpts& o) {
  if (o.dims && *o.dims != pb.model.d)
    throw ContractViolation("problem file has d = " + std::to_string(pb.model.d) +
                            ", --dims expects " + std::to_string(*o.dims));
  if (o.code) {
    const auto x = o.code->find('x');
    std::size_t m = 0, n = 0;
    try {
      std::size_t used_m = 0, used_n = 0;
      m = std::stoul(o.code->substr(0, x), &used_m);
      n = std::stoul(o.code->substr(x + 1), &used_n);
      if (x == std::string::npos || used_m != x || used_n != o.code->size() - x - 1) m = 0;
    } catch (const std::exception&) {
      m = 0;
    }
    if (m < 1 || n < 1)
      throw ContractViolation("--code expects MxN with positive integers, got '" + *o.code + "'");
    pb.m = static_cast<Eigen::Index>(m);
    pb.n = static_cast<Eigen::Index>(n);
    if (pb.m > pb.model.d || pb.n > pb.model.d)
      throw ContractViolation("--code dimensions must satisfy 1 <= M, N <= d");
  }
  if (o.lambda) {
    if (*o.lambda == "auto") pb.lambda = LambdaFilter::Auto;
    else if (*o.lambda == "both") pb.lambda = LambdaFilter::Both;
    else if (*o.lambda == "+1") pb.lambda = LambdaFilter::PlusOne;
    else pb.lambda = LambdaFilter::MinusOne;
  }
  if (o.seed) pb.budget.seed = *o.seed;
  if (o.restarts) {
    if (*o.restarts < 1) throw ContractViolation("--restarts must be positive");
    pb.budget.restarts = *o.restarts;
  }
  if (o.grid) {
    if (*o.grid < 2) throw ContractViolation("--grid must be at least 2");
    pb.budget.grid_density = *o.grid;
  }
  if (o.tol) {
    if (!(*o.tol > 0)) throw ContractViolation("--tol must be positive");
    pb.budget.tol = *o.tol;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractViolation("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string last_line(const std::string& text) {
  auto end = text.find_last_not_of('\n');
  if (end == std::string::npos) return text;
  auto start = text.rfind('\n', end);
  return text.substr(start == std::string::npos ? 0 : start + 1, end - (start == std::string::npos ? 0 : start + 1) + 1) + "\n";
}

int cmd_analyze(const std::string& path, const CommonOpts& o) {
  Problem pb = load_problem_file(path);
  apply_overrides(pb, o);
  const auto t0 = std::chrono::steady_clock::now();
  AnalysisReport rep = analyze_problem(pb);
  const double ms = ms_since(t0);
  const std::string out =
      o.format == "json" ? report_to_json(pb, rep, ms) : report_to_text(pb, rep, ms);
  std::cout << (o.quiet && o.format == "text" ? last_line(out) : out);
  return 0;
}

int cmd_verify(const std::string& path, const std::string& cert_path, const CommonOpts& o) {
  Problem pb = load_problem_file(path);
  apply_overrides(pb, o);
  CodeCertificate cert = certificate_from_json(read_file(cert_path));
  VerifyReport vr = verify_problem_certificate(pb, cert);
  std::cout << (o.format == "json" ? verify_report_to_json(vr) : verify_report_to_text(vr));
  return 0;
}

int cmd_oracle(const std::string& path, const CommonOpts& o) {
  Problem pb = load_problem_file(path);
  apply_overrides(pb, o);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<OracleBranchReport> reps = oracle_problem(pb);
  const double ms = ms_since(t0);
  const std::string out = o.format == "json" ? oracle_report_to_json(pb, reps, ms)
                                             : oracle_report_to_text(pb, reps, ms);
  std::cout << (o.quiet && o.format == "text" ? last_line(out) : out);
  return 0;
}

int cmd_examples(const CommonOpts& o) {
  std::vector<ExampleOutcome> outcomes = run_examples();
  int passed = 0;
  for (const ExampleOutcome& oc : outcomes) passed += oc.pass ? 1 : 0;

  if (o.format == "json") {
    std::ostringstream os;
    os << "[\n";
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const ExampleOutcome& oc = outcomes[i];
      os << "  {\"name\": \"" << oc.name << "\", \"pass\": " << (oc.pass ? "true" : "false")
         << ", \"residual\": " << oc.certificate_residual << ", \"message\": \"" << oc.message
         << "\"}" << (i + 1 < outcomes.size() ? "," : "") << "\n";
    }
    os << "]\n";
    std::cout << os.str();
  } else {
    if (!o.quiet)
      for (const ExampleOutcome& oc : outcomes) {
        std::cout << (oc.pass ? "PASS" : "FAIL") << "  " << oc.name;
        if (oc.certificate_residual >= 0)
          std::cout << "  (certificate residual " << oc.certificate_residual << ")";
        std::cout << "\n";
        if (!oc.pass) std::cout << "      " << oc.message << "\n";
      }
    std::cout << "bundled examples: " << passed << "/" << outcomes.size() << " match\n";
  }
  return passed == static_cast<int>(outcomes.size()) ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Product code analyzer for two-access random-unitary channels"};
  app.require_subcommand(1);

  CommonOpts ana_o, ver_o, ora_o, exa_o;
  std::string ana_file, ver_file, ver_cert, ora_file;

  CLI::App* ana = app.add_subcommand("analyze", "Decide code existence per eigenvalue branch");
  ana->add_option("problem", ana_file, "Problem JSON file")->required();
  add_common(ana, ana_o, true);

  CLI::App* ver = app.add_subcommand("verify", "Re-check a stored certificate against a problem");
  ver->add_option("problem", ver_file, "Problem JSON file")->required();
  ver->add_option("certificate", ver_cert, "Certificate JSON file")->required();
  add_common(ver, ver_o, true);

  CLI::App* ora = app.add_subcommand("oracle", "Run the independent brute-force sweep");
  ora->add_option("problem", ora_file, "Problem JSON file")->required();
  add_common(ora, ora_o, true);

  CLI::App* exa = app.add_subcommand("examples", "Run the bundled reference instances");
  add_common(exa, exa_o, false);

  try {
    app.parse(argc, argv);
    if (*ana) return cmd_analyze(ana_file, ana_o);
    if (*ver) return cmd_verify(ver_file, ver_cert, ver_o);
    if (*ora) return cmd_oracle(ora_file, ora_o);
    return cmd_examples(exa_o);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ContractViolation& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
