#include "qrfcomm/states.hpp"

#include "qrfcomm/errors.hpp"
#include "qrfcomm/group_action.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qrfcomm {

namespace {

Eigen::VectorXcd gaussian_samples(const GaussianSpec& spec, const Grid& grid) {
  const double w = spec.width;
  const double amp = 1.0 / (std::pow(std::numbers::pi, 0.25) * std::sqrt(w));
  Eigen::VectorXcd v(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.position(j);
    const double d = (x - spec.mu_x) / w;
    v[static_cast<Eigen::Index>(j)] = std::polar(amp * std::exp(-0.5 * d * d), spec.mu_p * x);
  }
  return v;
}

void require_fits(const GaussianSpec& spec, const Grid& grid) {
  if (!(spec.width > 0.0)) throw PreconditionError("Gaussian width must be positive");
  const double tail = gaussian_tail_mass(spec, grid);
  if (tail > kTailMassTolerance) {
    throw SupportError("Gaussian packet does not fit the grid (tail mass " + std::to_string(tail) + ")");
  }
}

}  // namespace

double TokenSpec::sigma() const {
  return std::visit([](const auto& s) { return s.sigma; }, shape);
}

double gaussian_tail_mass(const GaussianSpec& spec, const Grid& grid) {
  // |psi|^2 has standard deviation w / sqrt(2): mass beyond a is erfc(a / w) / 2.
  const double L = grid.half_width();
  const double w = spec.width;
  const double position_tail = 0.5 * std::erfc((L - spec.mu_x) / w) + 0.5 * std::erfc((L + spec.mu_x) / w);
  const double P = grid.momentum_half_width();
  const double momentum_tail = 0.5 * std::erfc((P - spec.mu_p) * w) + 0.5 * std::erfc((P + spec.mu_p) * w);
  return std::max(position_tail, momentum_tail);
}

WaveFunction gaussian_wavefunction(const GaussianSpec& spec, const Grid& grid) {
  require_fits(spec, grid);
  Eigen::VectorXcd v = gaussian_samples(spec, grid);
  v /= std::sqrt(v.squaredNorm() * grid.dx());
  return WaveFunction(grid, Basis::Position, std::move(v));
}

double superposition_normalization(const Superposition& spec, const Grid& grid) {
  const WaveFunction a = gaussian_wavefunction({spec.x_bar, spec.p_bar, spec.sigma}, grid);
  const WaveFunction b = gaussian_wavefunction({-spec.x_bar, -spec.p_bar, spec.sigma}, grid);
  return 2.0 + 2.0 * inner_product(a, b).real();
}

WaveFunction token_wavefunction(const TokenSpec& spec, const Grid& grid) {
  if (const auto* single = std::get_if<SingleGaussian>(&spec.shape)) {
    return gaussian_wavefunction({0.0, 0.0, single->sigma}, grid);
  }
  const auto& sup = std::get<Superposition>(spec.shape);
  const WaveFunction a = gaussian_wavefunction({sup.x_bar, sup.p_bar, sup.sigma}, grid);
  const WaveFunction b = gaussian_wavefunction({-sup.x_bar, -sup.p_bar, sup.sigma}, grid);
  const double n = 2.0 + 2.0 * inner_product(a, b).real();
  if (n <= 1e-14) throw NumericalError("superposition token normalization is degenerate");
  Eigen::VectorXcd v = (a.amplitudes() + b.amplitudes()) / std::sqrt(n);
  return WaveFunction(grid, Basis::Position, std::move(v));
}

Complex token_overlap(const TokenSpec& spec, double g, double g_prime, const Grid& grid) {
  const WaveFunction e = token_wavefunction(spec, grid);
  return inner_product(translate(e, GroupElement{g}), translate(e, GroupElement{g_prime}));
}

Grid default_token_grid(const TokenSpec& spec, std::size_t n_points, double smearing) {
  double extent = std::hypot(spec.sigma(), smearing);
  if (const auto* sup = std::get_if<Superposition>(&spec.shape)) {
    extent = std::max(extent, std::abs(sup->x_bar) + 3.0 * extent);
  }
  return Grid(12.0 * extent, n_points);
}

}  // namespace qrfcomm
