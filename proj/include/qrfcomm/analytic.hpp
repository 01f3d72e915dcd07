#pragma once

// Closed-form fidelities for Gaussian inputs of width Delta sent through the
// asymptotic channel.
//
//   single Gaussian token:  F = Delta / sqrt(Delta^2 + (sigma^2 + delta^2) / 2)
//   superposition token (sharp measurement):
//     F = beta (e^{beta^2 x^2/sigma^2} + e^{-beta^2 p^2 sigma^2}) / (e^{x^2/sigma^2} + e^{-p^2 sigma^2})
//   with beta = Delta / sqrt(Delta^2 + sigma^2 / 2).

#include <cstddef>

namespace qrfcomm {

double beta(double Delta, double sigma);

double gaussian_fidelity(double Delta, double sigma, double delta = 0.0);

double superposition_fidelity(double Delta, double sigma, double x_bar, double p_bar);

struct MaxFidelityResult {
  double ratio = 0.0;
  double f_max = 0.0;
  double p_bar_max_sigma = 0.0;
  /// Only filled by the 2-D scan; 0 otherwise.
  double x_bar_max_sigma = 0.0;
  double beta = 0.0;
};

struct MaximizeOptions {
  double p_sigma_max = 20.0;
  std::size_t bracket_points = 256;
  double tolerance = 1e-8;
  /// Also scan (x_bar sigma, p_bar sigma) on a coarse lattice and report the
  /// x_bar sigma of its best point.
  bool scan_x_bar = false;
  double x_sigma_max = 4.0;
  std::size_t scan_points = 41;
};

/// Maximizes superposition_fidelity at sigma = 1, Delta = ratio over
/// p_bar sigma in [0, p_sigma_max] with x_bar = 0: a bracketing scan followed
/// by golden section.
MaxFidelityResult maximize_fidelity(double ratio, const MaximizeOptions& options = {});

struct ScanMaximum {
  double x_bar_sigma = 0.0;
  double p_bar_sigma = 0.0;
  double value = 0.0;
};

/// Best point of superposition_fidelity on a uniform x_points by p_points
/// lattice over [0, x_sigma_max] x [0, p_sigma_max] at sigma = 1.
ScanMaximum scan_fidelity(double ratio, double x_sigma_max, double p_sigma_max, std::size_t x_points,
                          std::size_t p_points);

}  // namespace qrfcomm
