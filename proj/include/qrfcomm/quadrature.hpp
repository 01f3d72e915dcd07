#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qrfcomm {

/// Nodes and weights for \int_a^b f(x) dx ~ sum_i w_i f(x_i).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  double integrate(const std::function<double(double)>& f) const;
};

/// Composite trapezoid on n >= 2 uniform nodes (n == 1 degenerates to the
/// midpoint with the full interval length as weight).
QuadratureRule trapezoid_rule(double a, double b, std::size_t n);

/// Composite Simpson on an odd number n >= 3 of uniform nodes (n == 1 as above).
QuadratureRule simpson_rule(double a, double b, std::size_t n);

/// Composite 20-point Gauss-Legendre. Panels never straddle a breakpoint and
/// are no wider than max_panel_width. Breakpoints must be sorted ascending.
QuadratureRule composite_gauss_legendre(std::span<const double> breakpoints, double max_panel_width);

inline constexpr std::size_t kGaussLegendreOrder = 20;

struct GoldenSectionResult {
  double argmax;
  double value;
  std::size_t iterations;
};

/// Maximizes f on [a, b] assuming unimodality there; stops once the bracket is
/// narrower than tolerance.
GoldenSectionResult golden_section_maximize(const std::function<double(double)>& f, double a, double b,
                                            double tolerance, std::size_t max_iterations = 500);

}  // namespace qrfcomm
