#include "dfs/optim.hpp"

#include <algorithm>
#include <cmath>

namespace dfs {

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& start, double step, int max_iters,
                          double spread_tol) {
  const int n = static_cast<int>(start.size());
  SimplexResult out;
  std::vector<Eigen::VectorXd> pts(n + 1, start);
  std::vector<double> val(n + 1);
  for (int i = 1; i <= n; ++i) pts[i](i - 1) += step;
  for (int i = 0; i <= n; ++i) val[i] = f(pts[i]);
  out.evaluations = n + 1;

  std::vector<int> ord(n + 1);
  for (int it = 0; it < max_iters; ++it) {
    for (int i = 0; i <= n; ++i) ord[i] = i;
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return val[a] < val[b]; });
    const int lo = ord[0], hi = ord[n], snd = ord[n - 1];
    if (val[hi] - val[lo] <= spread_tol * (1.0 + std::abs(val[lo]))) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != hi) centroid += pts[i];
    centroid /= n;

    auto eval = [&](const Eigen::VectorXd& p) {
      ++out.evaluations;
      return f(p);
    };

    Eigen::VectorXd refl = centroid + (centroid - pts[hi]);
    double fr = eval(refl);
    if (fr < val[lo]) {
      Eigen::VectorXd expd = centroid + 2.0 * (centroid - pts[hi]);
      double fe = eval(expd);
      if (fe < fr) {
        pts[hi] = expd;
        val[hi] = fe;
      } else {
        pts[hi] = refl;
        val[hi] = fr;
      }
    } else if (fr < val[snd]) {
      pts[hi] = refl;
      val[hi] = fr;
    } else {
      Eigen::VectorXd ctr = centroid + 0.5 * (pts[hi] - centroid);
      double fc = eval(ctr);
      if (fc < val[hi]) {
        pts[hi] = ctr;
        val[hi] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == lo) continue;
          pts[i] = pts[lo] + 0.5 * (pts[i] - pts[lo]);
          val[i] = eval(pts[i]);
        }
      }
    }
  }

  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (val[i] < val[best]) best = i;
  out.x = pts[best];
  out.value = val[best];
  return out;
}

}  // namespace dfs
