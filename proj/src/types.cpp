#include "dfs/types.hpp"

namespace dfs {

Tolerance& default_tolerance() {
  static Tolerance tol;
  return tol;
}

void ensure(bool cond, const std::string& what) {
  if (!cond) throw ContractViolation(what);
}

void ensure_finite(const CMat& m, const std::string& where) {
  if (!m.allFinite()) throw ContractViolation(where + ": non-finite entries");
}

namespace {

// splitmix64; decorrelates user seeds and substream indices.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), eng_(mix(seed)) {}

Rng Rng::substream(std::uint64_t idx) const {
  return Rng(mix(seed_ ^ mix(idx + 1)));
}

double Rng::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(eng_);
}

double Rng::gauss() {
  return std::normal_distribution<double>(0.0, 1.0)(eng_);
}

Cx Rng::cgauss() {
  const double re = gauss();
  const double im = gauss();
  return Cx(re, im) / std::sqrt(2.0);
}

std::uint64_t Rng::integer() { return eng_(); }

CMat Rng::gaussian(Eigen::Index rows, Eigen::Index cols) {
  CMat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cgauss();
  return m;
}

CMat Rng::unitary(Eigen::Index n) {
  // QR of a Ginibre matrix with the R diagonal phase fixed gives Haar measure.
  const CMat g = gaussian(n, n);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Cx d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0) ? d / a : Cx(1, 0);
  }
  return q;
}

CMat Rng::isometry(Eigen::Index rows, Eigen::Index cols) {
  ensure(cols <= rows, "isometry: cols must not exceed rows");
  return unitary(rows).leftCols(cols);
}

CMat Rng::projector(Eigen::Index n, Eigen::Index rank) {
  ensure(rank >= 0 && rank <= n, "projector: rank out of range");
  const CMat v = isometry(n, rank);
  return v * v.adjoint();
}

}  // namespace dfs
