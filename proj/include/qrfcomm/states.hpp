#pragma once

// Gaussian wave packets use the convention
//   psi(x) = pi^{-1/4} w^{-1/2} e^{i mu_p x} e^{-(x - mu_x)^2 / 2 w^2},
// i.e. position variance w^2 / 2 and momentum variance 1 / (2 w^2). Fidelity
// closed forms in analytic.hpp assume this convention.

#include "qrfcomm/grid.hpp"

#include <variant>

namespace qrfcomm {

struct GaussianSpec {
  double mu_x = 0.0;
  double mu_p = 0.0;
  double width = 1.0;
};

struct SingleGaussian {
  double sigma = 1.0;
};

/// (|psi(x_bar, p_bar, sigma)> + |psi(-x_bar, -p_bar, sigma)>) / sqrt(N)
struct Superposition {
  double x_bar = 0.0;
  double p_bar = 0.0;
  double sigma = 1.0;
};

struct TokenSpec {
  std::variant<SingleGaussian, Superposition> shape;

  static TokenSpec single(double sigma) { return {SingleGaussian{sigma}}; }
  static TokenSpec superposition(double x_bar, double p_bar, double sigma) {
    return {Superposition{x_bar, p_bar, sigma}};
  }
  double sigma() const;
  bool is_single() const { return std::holds_alternative<SingleGaussian>(shape); }
};

inline constexpr double kTailMassTolerance = 1e-12;

/// Analytic probability mass of the packet outside the position window and
/// outside the momentum window of the grid (the larger of the two).
double gaussian_tail_mass(const GaussianSpec& spec, const Grid& grid);

WaveFunction gaussian_wavefunction(const GaussianSpec& spec, const Grid& grid);

WaveFunction token_wavefunction(const TokenSpec& spec, const Grid& grid);

/// N = 2 + 2 Re<psi(x_bar, p_bar)|psi(-x_bar, -p_bar)>, by quadrature on the grid.
double superposition_normalization(const Superposition& spec, const Grid& grid);

/// <e(g)|e(g')> with |e(g)> = U(g)|e>.
Complex token_overlap(const TokenSpec& spec, double g, double g_prime, const Grid& grid);

/// Grid sized for the token's outcome density: L = 12 max(s, |x_bar| + 3 s),
/// s = sqrt(sigma^2 + smearing^2).
Grid default_token_grid(const TokenSpec& spec, std::size_t n_points = 1024, double smearing = 0.0);

}  // namespace qrfcomm
