#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace nevlab {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureResult {
  double value;
  double error_estimate;
  std::size_t panels;
};

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b]: the panel with the
/// largest error estimate is bisected until the summed estimate is below
/// tol. Kinks and integrable log singularities attract panels once the
/// rule can see them; features narrower than a panel should be passed as
/// breakpoints so they sit on a panel edge from the start.
template <class F>
QuadratureResult adaptive_integrate(F f, double a, double b, double tol, std::size_t initial_panels = 16,
                                    std::size_t panel_budget = 200000, std::vector<double> breakpoints = {}) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  struct Panel {
    double lo, hi, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  auto make = [&](double lo, double hi) {
    double err = 0;
    double v = GK::integrate(f, lo, hi, 0, 0, &err);
    // single-panel estimate |K15 - G7| is reported on the reference interval [-1, 1]
    return Panel{lo, hi, v, err * 0.5 * (hi - lo)};
  };

  std::priority_queue<Panel> queue;
  double total = 0, error = 0;
  std::vector<double> edges;
  for (std::size_t i = 0; i <= initial_panels; ++i) {
    edges.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(initial_panels));
  }
  for (double x : breakpoints) {
    if (x > a && x < b) edges.push_back(x);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel p = make(edges[i], edges[i + 1]);
    total += p.value;
    error += p.error;
    queue.push(p);
  }
  while (error > tol) {
    if (queue.size() >= panel_budget) {
      throw QuadratureError("adaptive_integrate: panel budget exhausted (error " + std::to_string(error) + ")");
    }
    Panel worst = queue.top();
    queue.pop();
    double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      throw QuadratureError("adaptive_integrate: panel width reached machine resolution");
    }
    Panel left = make(worst.lo, mid), right = make(mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  // re-sum to shed accumulated cancellation from the running updates
  double sum = 0, err = 0;
  std::size_t n = queue.size();
  while (!queue.empty()) {
    sum += queue.top().value;
    err += queue.top().error;
    queue.pop();
  }
  return {sum, err, n};
}

}  // namespace nevlab
