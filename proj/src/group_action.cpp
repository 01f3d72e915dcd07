#include "qrfcomm/group_action.hpp"

#include "qrfcomm/errors.hpp"
#include "qrfcomm/kernels.hpp"
#include "qrfcomm/quadrature.hpp"
#include "qrfcomm/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qrfcomm {

namespace {

void require_no_wrap(const std::vector<double>& density, const Grid& grid, double g) {
  const double leak = wrapped_mass(density, grid, g);
  if (leak > kTailMassTolerance) {
    throw SupportError("translation by " + std::to_string(g) + " pushes mass " + std::to_string(leak) +
                       " off the grid");
  }
}

std::vector<double> difference_sinc(const Grid& grid, double tau) {
  const long n = static_cast<long>(grid.size());
  std::vector<double> f(grid.difference_count());
  for (long l = -(n - 1); l <= n - 1; ++l) f[static_cast<std::size_t>(l + n - 1)] = twirl_factor(tau, grid.difference(l));
  return f;
}

}  // namespace

double wrapped_mass(const std::vector<double>& density, const Grid& grid, double g) {
  if (g == 0.0) return 0.0;
  const double L = grid.half_width();
  if (std::abs(g) >= 2.0 * L) return 1.0;
  double mass = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.position(j);
    if ((g > 0.0 && x + g >= L) || (g < 0.0 && x + g < -L)) mass += density[j];
  }
  return mass * grid.dx();
}

WaveFunction translate(const WaveFunction& state, GroupElement g) {
  const Grid& grid = state.grid();
  require_no_wrap(position_density(state), grid, g.g);
  WaveFunction mom = to_basis(state, Basis::Momentum);
  Eigen::VectorXcd v = mom.amplitudes();
  for (std::size_t m = 0; m < grid.size(); ++m) v[static_cast<Eigen::Index>(m)] *= std::polar(1.0, -g.g * grid.momentum(m));
  return to_basis(WaveFunction(grid, Basis::Momentum, std::move(v)), state.basis());
}

DensityMatrix translate(const DensityMatrix& state, GroupElement g) {
  return translate_mixture(state, {g.g}, {1.0});
}

double twirl_factor(double tau, double k) {
  const double x = tau * k;
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

DensityMatrix compact_twirl(const DensityMatrix& rho, double tau) {
  if (!(tau > 0.0)) throw PreconditionError("twirl interval half-width must be positive");
  const Grid& grid = rho.grid();
  const auto density = position_density(rho);
  require_no_wrap(density, grid, tau);
  require_no_wrap(density, grid, -tau);

  Eigen::MatrixXcd m = to_basis(rho, Basis::Momentum).entries();
  const auto sinc = difference_sinc(grid, tau);
  const std::vector<Complex> factor(sinc.begin(), sinc.end());
  kernels::parallel::modulate_by_difference(m, factor);
  return to_basis(DensityMatrix(grid, Basis::Momentum, std::move(m)), rho.basis());
}

DensityMatrix compact_twirl(const DensityMatrix& rho, double tau, std::size_t n_nodes) {
  if (!(tau > 0.0)) throw PreconditionError("twirl interval half-width must be positive");
  const QuadratureRule rule = simpson_rule(-tau, tau, n_nodes);
  std::vector<double> weights = rule.weights;
  for (double& w : weights) w /= 2.0 * tau;
  if (n_nodes == 1) weights = {1.0};
  return translate_mixture(rho, rule.nodes, weights);
}

std::size_t default_twirl_nodes(const Grid& grid, double tau) {
  const double wanted = std::ceil(8.0 * tau * grid.momentum_half_width() / std::numbers::pi);
  auto n = std::max<std::size_t>(201, static_cast<std::size_t>(wanted));
  if (n % 2 == 0) ++n;
  return n;
}

TwirlEnsemble::TwirlEnsemble(std::vector<GroupElement> nodes, std::vector<double> weights, WaveFunction token,
                             DensityMatrix system)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), token_(std::move(token)), system_(std::move(system)) {
  if (nodes_.empty() || nodes_.size() != weights_.size()) throw PreconditionError("ensemble needs one weight per node");
  double total = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw PreconditionError("ensemble weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw PreconditionError("ensemble weights must sum to 1");
}

DensityMatrix TwirlEnsemble::system_marginal() const {
  std::vector<double> shifts;
  shifts.reserve(nodes_.size());
  for (const auto& n : nodes_) shifts.push_back(n.g);
  return translate_mixture(system_, shifts, weights_);
}

DensityMatrix TwirlEnsemble::token_marginal() const {
  std::vector<double> shifts;
  shifts.reserve(nodes_.size());
  for (const auto& n : nodes_) shifts.push_back(n.g);
  return translate_mixture(projector(token_), shifts, weights_);
}

TwirlEnsemble encode(const DensityMatrix& system, const WaveFunction& token, double tau, std::size_t n_nodes) {
  if (!(tau > 0.0)) throw PreconditionError("twirl interval half-width must be positive");
  const auto system_density = position_density(system);
  const auto token_density = position_density(token);
  for (double edge : {tau, -tau}) {
    require_no_wrap(system_density, system.grid(), edge);
    require_no_wrap(token_density, token.grid(), edge);
  }
  const QuadratureRule rule = simpson_rule(-tau, tau, n_nodes);
  std::vector<GroupElement> nodes;
  std::vector<double> weights;
  double total = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    nodes.push_back({rule.nodes[i]});
    weights.push_back(rule.weights[i]);
    total += rule.weights[i];
  }
  for (double& w : weights) w /= total;
  return TwirlEnsemble(std::move(nodes), std::move(weights), token, system);
}

DensityMatrix translate_mixture(const DensityMatrix& rho, const std::vector<double>& shifts,
                                const std::vector<double>& weights) {
  if (shifts.size() != weights.size()) throw PreconditionError("one weight per shift required");
  const Grid& grid = rho.grid();
  const auto density = position_density(rho);
  double lo = 0.0;
  double hi = 0.0;
  for (double s : shifts) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  require_no_wrap(density, grid, lo);
  require_no_wrap(density, grid, hi);

  const DensityMatrix mom = to_basis(rho, Basis::Momentum);
  const auto momenta = grid.momenta();
  Eigen::MatrixXcd out = kernels::parallel::phase_mixture(mom.entries(), momenta, shifts, weights);
  out = 0.5 * (out + out.adjoint()).eval();
  return to_basis(DensityMatrix(grid, Basis::Momentum, std::move(out)), rho.basis());
}

}  // namespace qrfcomm
