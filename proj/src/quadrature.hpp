#pragma once

// Composite 3-point Gauss-Legendre rule. Exact for piecewise polynomials of
// degree <= 5 once every kink is a cut, which holds for the bump test
// functions against piecewise-constant or affine-in-t integrands.

#include <algorithm>
#include <vector>

namespace glimm::quad {

/// Calls f(x, weight) for n equal panels of each piece of [a, b] cut at `cuts`.
template <class F>
void gauss(double a, double b, const std::vector<double>& cuts, int n, F&& f) {
  static constexpr double node = 0.7745966692414834;  // sqrt(3/5)
  static constexpr double w_out = 5.0 / 9.0;
  static constexpr double w_mid = 8.0 / 9.0;
  if (!(b > a)) return;
  std::vector<double> xs{a, b};
  for (double c : cuts)
    if (c > a && c < b) xs.push_back(c);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (std::size_t p = 0; p + 1 < xs.size(); ++p) {
    const double h = (xs[p + 1] - xs[p]) / n;
    for (int i = 0; i < n; ++i) {
      const double mid = xs[p] + (i + 0.5) * h;
      const double half = 0.5 * h;
      f(mid - node * half, w_out * half);
      f(mid, w_mid * half);
      f(mid + node * half, w_out * half);
    }
  }
}

}  // namespace glimm::quad
