#include "qrfcomm/analytic.hpp"

#include "qrfcomm/errors.hpp"
#include "qrfcomm/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace qrfcomm {

double beta(double Delta, double sigma) {
  if (!(Delta > 0.0)) throw PreconditionError("Delta must be positive");
  if (!(sigma >= 0.0)) throw PreconditionError("sigma must be non-negative");
  return Delta / std::sqrt(Delta * Delta + 0.5 * sigma * sigma);
}

double gaussian_fidelity(double Delta, double sigma, double delta) {
  if (!(Delta > 0.0)) throw PreconditionError("Delta must be positive");
  if (!(sigma >= 0.0) || !(delta >= 0.0)) throw PreconditionError("widths must be non-negative");
  return Delta / std::sqrt(Delta * Delta + 0.5 * (sigma * sigma + delta * delta));
}

double superposition_fidelity(double Delta, double sigma, double x_bar, double p_bar) {
  if (!(sigma > 0.0)) throw PreconditionError("sigma must be positive");
  const double b = beta(Delta, sigma);
  const double b2 = b * b;
  const double y = x_bar * x_bar / (sigma * sigma);
  const double q = p_bar * sigma * p_bar * sigma;
  // numerator and denominator divided by e^{y}
  return b * (std::exp((b2 - 1.0) * y) + std::exp(-y - b2 * q)) / (1.0 + std::exp(-y - q));
}

ScanMaximum scan_fidelity(double ratio, double x_sigma_max, double p_sigma_max, std::size_t x_points,
                          std::size_t p_points) {
  if (x_points < 2 || p_points < 2) throw PreconditionError("scan needs at least 2 points per axis");
  ScanMaximum best{0.0, 0.0, -1.0};
  for (std::size_t i = 0; i < x_points; ++i) {
    const double x = x_sigma_max * static_cast<double>(i) / static_cast<double>(x_points - 1);
    for (std::size_t j = 0; j < p_points; ++j) {
      const double p = p_sigma_max * static_cast<double>(j) / static_cast<double>(p_points - 1);
      const double f = superposition_fidelity(ratio, 1.0, x, p);
      if (f > best.value) best = {x, p, f};
    }
  }
  return best;
}

MaxFidelityResult maximize_fidelity(double ratio, const MaximizeOptions& options) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) throw PreconditionError("ratio must be positive");
  if (options.bracket_points < 3) throw PreconditionError("bracketing scan needs at least 3 points");
  auto f = [&](double p) { return superposition_fidelity(ratio, 1.0, 0.0, p); };

  const std::size_t m = options.bracket_points;
  const double h = options.p_sigma_max / static_cast<double>(m - 1);
  std::size_t best = 0;
  double best_value = f(0.0);
  for (std::size_t i = 1; i < m; ++i) {
    const double v = f(h * static_cast<double>(i));
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  const double a = h * static_cast<double>(best == 0 ? 0 : best - 1);
  const double b = h * static_cast<double>(std::min(best + 1, m - 1));
  const GoldenSectionResult gs = golden_section_maximize(f, a, b, options.tolerance);

  MaxFidelityResult r;
  r.ratio = ratio;
  r.beta = beta(ratio, 1.0);
  if (gs.value >= best_value) {
    r.f_max = gs.value;
    r.p_bar_max_sigma = gs.argmax;
  } else {
    r.f_max = best_value;
    r.p_bar_max_sigma = h * static_cast<double>(best);
  }
  if (options.scan_x_bar) {
    r.x_bar_max_sigma =
        scan_fidelity(ratio, options.x_sigma_max, options.p_sigma_max, options.scan_points, options.scan_points)
            .x_bar_sigma;
  }
  return r;
}

}  // namespace qrfcomm
