#include "qrfcomm/quadrature.hpp"

#include "qrfcomm/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>

namespace qrfcomm {

double QuadratureRule::integrate(const std::function<double(double)>& f) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
  return sum;
}

QuadratureRule trapezoid_rule(double a, double b, std::size_t n) {
  if (n == 0) throw PreconditionError("quadrature needs at least one node");
  if (!(b >= a)) throw PreconditionError("quadrature interval is reversed");
  QuadratureRule rule;
  if (n == 1) {
    rule.nodes = {0.5 * (a + b)};
    rule.weights = {b - a};
    return rule;
  }
  const double h = (b - a) / static_cast<double>(n - 1);
  rule.nodes.resize(n);
  rule.weights.assign(n, h);
  for (std::size_t i = 0; i < n; ++i) rule.nodes[i] = a + static_cast<double>(i) * h;
  rule.nodes.back() = b;
  rule.weights.front() = rule.weights.back() = 0.5 * h;
  return rule;
}

QuadratureRule simpson_rule(double a, double b, std::size_t n) {
  if (n == 1) return trapezoid_rule(a, b, 1);
  if (n < 3 || n % 2 == 0) throw PreconditionError("Simpson rule needs an odd node count >= 3");
  QuadratureRule rule = trapezoid_rule(a, b, n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    rule.weights[i] = c * h / 3.0;
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(std::span<const double> breakpoints, double max_panel_width) {
  if (breakpoints.size() < 2) throw PreconditionError("need at least two breakpoints");
  if (!(max_panel_width > 0.0)) throw PreconditionError("panel width must be positive");
  using Gauss = boost::math::quadrature::gauss<double, kGaussLegendreOrder>;
  const auto& abscissa = Gauss::abscissa();
  const auto& weight = Gauss::weights();

  QuadratureRule rule;
  for (std::size_t s = 0; s + 1 < breakpoints.size(); ++s) {
    const double a = breakpoints[s];
    const double b = breakpoints[s + 1];
    if (b < a) throw PreconditionError("breakpoints must be sorted");
    if (b == a) continue;
    const auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_panel_width));
    const double width = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = a + (static_cast<double>(p) + 0.5) * width;
      const double half = 0.5 * width;
      // boost stores the non-negative half of the symmetric rule
      for (std::size_t i = 0; i < abscissa.size(); ++i) {
        const double x = abscissa[i];
        if (x == 0.0) {
          rule.nodes.push_back(mid);
          rule.weights.push_back(half * weight[i]);
          continue;
        }
        rule.nodes.push_back(mid - half * x);
        rule.weights.push_back(half * weight[i]);
        rule.nodes.push_back(mid + half * x);
        rule.weights.push_back(half * weight[i]);
      }
    }
  }
  return rule;
}

GoldenSectionResult golden_section_maximize(const std::function<double(double)>& f, double a, double b,
                                            double tolerance, std::size_t max_iterations) {
  if (!(b > a)) throw PreconditionError("golden-section bracket is empty");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  std::size_t it = 0;
  while (b - a > tolerance) {
    if (++it > max_iterations) throw NumericalError("golden-section search did not converge");
    if (!std::isfinite(fc) || !std::isfinite(fd)) throw NumericalError("golden-section objective is not finite");
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x), it};
}

}  // namespace qrfcomm
