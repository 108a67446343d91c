#include "bneck/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bneck {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& options) {
  if (options.max_evaluations < 1 || options.restarts < 0 || !(options.initial_scale > 0.0))
    throw std::invalid_argument("nelder_mead: need a positive budget and simplex scale");
  NelderMeadResult res;
  auto eval = [&](const Eigen::VectorXd& x) {
    double v = f(x);
    if (!std::isfinite(v)) v = kInf;
    ++res.evaluations;
    res.history.push_back({x, v});
    if (res.history.size() == 1 || v < res.value) {
      res.value = v;
      res.x = x;
    }
    return v;
  };
  eval(x0);
  const Eigen::Index n = x0.size();
  if (n == 0) {
    res.runs = 1;
    return res;
  }

  double scale = options.initial_scale;
  for (int run = 0; run <= options.restarts; ++run) {
    ++res.runs;
    const int start = res.evaluations;
    std::vector<Eigen::VectorXd> simplex{res.x};
    std::vector<double> values{res.value};
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::VectorXd v = res.x;
      v[i] += scale;
      simplex.push_back(v);
      values.push_back(eval(v));
    }
    std::vector<std::size_t> order(simplex.size());
    while (res.evaluations - start < options.max_evaluations) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
      const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
      double diameter = 0.0;
      for (const auto& v : simplex) diameter = std::max(diameter, (v - simplex[best]).cwiseAbs().maxCoeff());
      if (diameter < options.simplex_tolerance) break;
      if (std::isfinite(values[worst]) && values[worst] - values[best] <= options.value_tolerance * (1.0 + std::abs(values[best])))
        break;

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
      for (std::size_t i : order)
        if (i != worst) centroid += simplex[i];
      centroid /= static_cast<double>(n);

      const Eigen::VectorXd xr = centroid + (centroid - simplex[worst]);
      const double fr = eval(xr);
      if (fr < values[best]) {
        const Eigen::VectorXd xe = centroid + 2.0 * (centroid - simplex[worst]);
        const double fe = eval(xe);
        if (fe < fr) {
          simplex[worst] = xe;
          values[worst] = fe;
        } else {
          simplex[worst] = xr;
          values[worst] = fr;
        }
        continue;
      }
      if (fr < values[second]) {
        simplex[worst] = xr;
        values[worst] = fr;
        continue;
      }
      const bool outside = fr < values[worst];
      const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                         : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
      const double fc = eval(xc);
      if (fc < (outside ? fr : values[worst])) {
        simplex[worst] = xc;
        values[worst] = fc;
        continue;
      }
      for (std::size_t i = 0; i < simplex.size(); ++i) {
        if (i == best) continue;
        simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
        values[i] = eval(simplex[i]);
      }
    }
    scale *= options.restart_shrink;
  }
  return res;
}

}  // namespace bneck
