#include "qrfcomm/channel.hpp"

#include "qrfcomm/errors.hpp"
#include "qrfcomm/kernels.hpp"
#include "qrfcomm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace qrfcomm {

namespace {

constexpr double kKernelTolerance = 1e-10;
constexpr std::size_t kMaxQuadratureNodes = 20'000'000;

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

std::vector<double> gl_breakpoints(double radius, double tau) {
  std::vector<double> b{-radius, radius};
  for (double c : {-2.0 * tau, 0.0, 2.0 * tau}) {
    if (c > -radius && c < radius) b.push_back(c);
  }
  std::sort(b.begin(), b.end());
  return b;
}

// Panel width that keeps 8 nodes per period of e^{iuk} at the largest lattice
// |k| and resolves the density's finest feature.
double gl_panel_width(const OutcomeDistribution& dist, const Grid& grid) {
  const double kmax = grid.difference(static_cast<long>(grid.size()) - 1);
  const double order = static_cast<double>(kGaussLegendreOrder);
  double width = order * 2.0 * std::numbers::pi / (8.0 * kmax);
  if (dist.feature_scale() > 0.0) width = std::min(width, dist.feature_scale());
  return width;
}

std::size_t gl_node_count(std::span<const double> breaks, double width) {
  std::size_t panels = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    panels += static_cast<std::size_t>(std::max(1.0, std::ceil((breaks[i + 1] - breaks[i]) / width)));
  }
  return panels * kGaussLegendreOrder;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw PreconditionError("grid mismatch");
}

DensityMatrix validated(const Grid& grid, Basis basis, Eigen::MatrixXcd m) {
  try {
    return DensityMatrix(grid, basis, std::move(m));
  } catch (const PreconditionError& e) {
    throw NumericalError(std::string("channel output is not a density matrix: ") + e.what());
  }
}

std::vector<double> momentum_weights(const WaveFunction& psi) {
  const WaveFunction mom = to_basis(psi, Basis::Momentum);
  const double dp = psi.grid().dp();
  std::vector<double> w(psi.grid().size());
  for (std::size_t m = 0; m < w.size(); ++m) w[m] = std::norm(mom[m]) * dp;
  return w;
}

}  // namespace

DecoherenceKernel::DecoherenceKernel(Grid grid, KernelKind kind, double tau, std::vector<Complex> values)
    : grid_(std::move(grid)), kind_(kind), tau_(tau), values_(std::move(values)) {
  if (values_.size() != grid_.difference_count()) throw PreconditionError("kernel needs 2n - 1 values");
  if (std::abs(factor(0) - 1.0) > kKernelTolerance) {
    throw NumericalError("kernel factor at k = 0 is " + std::to_string(factor(0).real()) + ", not 1");
  }
  for (const Complex& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > 1.0 + kKernelTolerance) {
      throw NumericalError("kernel factor exceeds 1 in modulus");
    }
  }
}

DecoherenceKernel DecoherenceKernel::identity(const Grid& grid) {
  return DecoherenceKernel(grid, KernelKind::Asymptotic, std::numeric_limits<double>::infinity(),
                           std::vector<Complex>(grid.difference_count(), Complex(1.0, 0.0)));
}

DecoherenceKernel asymptotic_kernel(const OutcomeDistribution& dist, const Grid& grid) {
  if (std::abs(dist.characteristic(0.0) - 1.0) > 1e-9) throw NumericalError("outcome distribution is unnormalized");
  const long n = static_cast<long>(grid.size());
  auto values = kernels::parallel::tabulate(grid.difference_count(), [&](std::size_t i) {
    return dist.characteristic(grid.difference(static_cast<long>(i) - (n - 1)));
  });
  values[static_cast<std::size_t>(n - 1)] = dist.characteristic(0.0);
  return DecoherenceKernel(grid, KernelKind::Asymptotic, std::numeric_limits<double>::infinity(), std::move(values));
}

Complex finite_tau_weight(double u, double k, double tau) {
  const double a = std::abs(u);
  const double m = std::min(a, 2.0 * tau);
  Complex out = std::max(0.0, 2.0 * tau - a) * std::polar(1.0, u * k);
  if (m > 0.0) {
    const double s = u > 0.0 ? 1.0 : -1.0;
    out += std::polar(1.0, -s * k * tau + s * k * m / 2.0) * (m * sinc(k * m / 2.0));
  }
  return out / (2.0 * tau);
}

std::size_t finite_tau_required_nodes(const OutcomeDistribution& dist, double tau, const Grid& grid) {
  if (!(tau > 0.0)) throw PreconditionError("tau must be positive");
  const double radius = dist.support_radius();
  if (radius == 0.0) return 1;
  const auto breaks = gl_breakpoints(radius, tau);
  return gl_node_count(breaks, gl_panel_width(dist, grid));
}

DecoherenceKernel finite_tau_kernel(const OutcomeDistribution& dist, double tau, const Grid& grid,
                                    std::size_t n_nodes) {
  if (!(tau > 0.0)) throw PreconditionError("tau must be positive");
  const long n = static_cast<long>(grid.size());
  const double radius = dist.support_radius();
  if (radius == 0.0) {
    return DecoherenceKernel(grid, KernelKind::FiniteTau, tau,
                             std::vector<Complex>(grid.difference_count(), Complex(1.0, 0.0)));
  }
  const auto breaks = gl_breakpoints(radius, tau);
  double width = gl_panel_width(dist, grid);
  const std::size_t required = gl_node_count(breaks, width);
  if (n_nodes != 0 && n_nodes < required) {
    throw NumericalError("finite-tau quadrature needs at least " + std::to_string(required) + " nodes, got " +
                         std::to_string(n_nodes));
  }
  if (n_nodes > required) width *= static_cast<double>(required) / static_cast<double>(n_nodes);
  if (gl_node_count(breaks, width) > kMaxQuadratureNodes) throw NumericalError("finite-tau quadrature too large");

  const QuadratureRule rule = composite_gauss_legendre(breaks, width);
  const auto dens = kernels::parallel::tabulate(rule.size(), [&](std::size_t i) { return dist.density(rule.nodes[i]); });
  std::vector<double> wp(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) wp[i] = rule.weights[i] * dens[i];

  // Real density: c(-k) = conj(c(k)).
  const auto half = kernels::parallel::tabulate(static_cast<std::size_t>(n), [&](std::size_t l) {
    const double k = grid.difference(static_cast<long>(l));
    Complex sum{};
    for (std::size_t i = 0; i < wp.size(); ++i) {
      if (wp[i] != 0.0) sum += wp[i] * finite_tau_weight(rule.nodes[i], k, tau);
    }
    return sum;
  });
  std::vector<Complex> values(grid.difference_count());
  for (long l = 0; l < n; ++l) {
    values[static_cast<std::size_t>(n - 1 + l)] = half[static_cast<std::size_t>(l)];
    values[static_cast<std::size_t>(n - 1 - l)] = std::conj(half[static_cast<std::size_t>(l)]);
  }
  return DecoherenceKernel(grid, KernelKind::FiniteTau, tau, std::move(values));
}

double max_deviation(const DecoherenceKernel& a, const DecoherenceKernel& b) {
  require_same_grid(a.grid(), b.grid());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
  return worst;
}

DensityMatrix apply_kernel(const DensityMatrix& rho, const DecoherenceKernel& kernel) {
  require_same_grid(rho.grid(), kernel.grid());
  Eigen::MatrixXcd m = to_basis(rho, Basis::Momentum).entries();
  kernels::parallel::modulate_by_difference(m, kernel.values());
  const DensityMatrix out = validated(rho.grid(), Basis::Momentum, std::move(m));
  return to_basis(out, rho.basis());
}

DensityMatrix apply_by_convolution(const DensityMatrix& rho, const OutcomeDistribution& dist, std::size_t n_nodes) {
  const double radius = dist.support_radius();
  if (radius == 0.0) return apply_by_convolution(rho, std::vector<double>{0.0}, std::vector<double>{1.0});
  if (n_nodes == 0) {
    const double h = dist.feature_scale() / 8.0;
    n_nodes = static_cast<std::size_t>(std::ceil(2.0 * radius / h)) + 1;
    if (n_nodes % 2 == 0) ++n_nodes;
  }
  if (n_nodes < 2) throw PreconditionError("convolution needs at least 2 nodes");
  const QuadratureRule rule = trapezoid_rule(-radius, radius, n_nodes);
  std::vector<double> weights(rule.size());
  double total = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    weights[i] = rule.weights[i] * dist.density(rule.nodes[i]);
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-8) throw NumericalError("convolution nodes do not resolve the outcome density");
  return apply_by_convolution(rho, rule.nodes, weights);
}

DensityMatrix apply_by_convolution(const DensityMatrix& rho, std::span<const double> errors,
                                   std::span<const double> weights) {
  if (errors.size() != weights.size() || errors.empty()) throw PreconditionError("one weight per error required");
  std::vector<double> shifts(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) shifts[i] = -errors[i];
  return translate_mixture(rho, shifts, std::vector<double>(weights.begin(), weights.end()));
}

double fidelity(const DensityMatrix& rho_out, const WaveFunction& psi_in) {
  require_same_grid(rho_out.grid(), psi_in.grid());
  const WaveFunction psi = to_basis(psi_in, rho_out.basis());
  const double step = rho_out.step();
  const Complex f = psi.amplitudes().dot(rho_out.entries() * psi.amplitudes()) * (step * step);
  return f.real();
}

double fidelity_double_integral(const DecoherenceKernel& kernel, const WaveFunction& psi_in) {
  require_same_grid(kernel.grid(), psi_in.grid());
  const auto w = momentum_weights(psi_in);
  const long n = static_cast<long>(w.size());
  const auto rows = kernels::parallel::tabulate(w.size(), [&](std::size_t i) {
    double sum = 0.0;
    for (long j = 0; j < n; ++j) {
      sum += kernel.factor(static_cast<long>(i) - j).real() * w[static_cast<std::size_t>(j)];
    }
    return sum * w[i];
  });
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

const char* to_string(ChannelMethod method) {
  switch (method) {
    case ChannelMethod::Kernel:
      return "kernel";
    case ChannelMethod::Convolution:
      return "convolution";
    case ChannelMethod::MonteCarlo:
      return "monte_carlo";
  }
  return "unknown";
}

namespace {

ChannelReport report_for(const WaveFunction& psi, const DensityMatrix& rho_in, const DensityMatrix& rho_out,
                         ChannelMethod method) {
  ChannelReport r;
  r.fidelity = fidelity(rho_out, psi);
  r.purity_in = purity(rho_in);
  r.purity_out = purity(rho_out);
  r.trace_error = std::abs(rho_out.trace() - 1.0);
  r.method = method;
  return r;
}

}  // namespace

ChannelReport evaluate_channel(const WaveFunction& psi_in, const DecoherenceKernel& kernel) {
  const DensityMatrix rho = projector(psi_in);
  return report_for(psi_in, rho, apply_kernel(rho, kernel), ChannelMethod::Kernel);
}

ChannelReport evaluate_channel_by_convolution(const WaveFunction& psi_in, const OutcomeDistribution& dist) {
  const DensityMatrix rho = projector(psi_in);
  return report_for(psi_in, rho, apply_by_convolution(rho, dist), ChannelMethod::Convolution);
}

namespace {

struct ShardTally {
  double sum_f = 0.0;
  double sum_f2 = 0.0;
  std::vector<Complex> chi;
};

}  // namespace

ChannelReport mc_protocol(const WaveFunction& psi_in, const OutcomeDistribution& dist, double tau,
                          std::size_t n_samples, std::uint64_t seed, const MonteCarloOptions& options) {
  if (!(tau > 0.0)) throw PreconditionError("tau must be positive");
  if (n_samples < kMinMonteCarloSamples) {
    throw PreconditionError("at least " + std::to_string(kMinMonteCarloSamples) + " samples required");
  }
  if (options.shards == 0) throw PreconditionError("shard count must be positive");
  const Grid& grid = psi_in.grid();
  const std::size_t n = grid.size();
  const auto w = momentum_weights(psi_in);
  const double dp = grid.dp();
  const double p0 = grid.momentum(0);
  const std::size_t shards = std::min(options.shards, n_samples);

  const auto tallies = kernels::parallel::tabulate(shards, [&](std::size_t s) {
    ShardTally t;
    t.chi.assign(n, Complex{});
    std::size_t count = n_samples / shards + (s < n_samples % shards ? 1 : 0);
    Rng rng(stream_seed(seed, s));
    for (std::size_t i = 0; i < count; ++i) {
      const double g = rng.uniform(-tau, tau);
      const MeasurementOutcome out = sample_outcome(dist, {g}, tau, rng);
      const double shift = out.remainder ? g : g - out.g;

      // <psi|U(shift)|psi> = sum_m |psi~_m|^2 e^{-i shift p_m} dp
      const Complex step = std::polar(1.0, -shift * dp);
      Complex phase = std::polar(1.0, -shift * p0);
      Complex overlap{};
      for (std::size_t m = 0; m < n; ++m) {
        overlap += w[m] * phase;
        phase *= step;
      }
      const double f = std::norm(overlap);
      t.sum_f += f;
      t.sum_f2 += f * f;

      Complex z{1.0, 0.0};
      for (std::size_t l = 0; l < n; ++l) {
        t.chi[l] += z;
        z *= step;
      }
    }
    return t;
  });

  double sum_f = 0.0;
  double sum_f2 = 0.0;
  std::vector<Complex> chi(n, Complex{});
  for (const auto& t : tallies) {
    sum_f += t.sum_f;
    sum_f2 += t.sum_f2;
    for (std::size_t l = 0; l < n; ++l) chi[l] += t.chi[l];
  }
  const double N = static_cast<double>(n_samples);
  const double mean = sum_f / N;
  const double var = std::max(0.0, (sum_f2 / N - mean * mean) * N / (N - 1.0));

  const long nl = static_cast<long>(n);
  std::vector<Complex> values(grid.difference_count());
  for (long l = 0; l < nl; ++l) {
    const Complex c = chi[static_cast<std::size_t>(l)] / N;
    values[static_cast<std::size_t>(nl - 1 + l)] = c;
    values[static_cast<std::size_t>(nl - 1 - l)] = std::conj(c);
  }
  values[static_cast<std::size_t>(nl - 1)] = 1.0;
  const DecoherenceKernel kernel(grid, KernelKind::FiniteTau, tau, std::move(values));
  const DensityMatrix rho = projector(psi_in);
  const DensityMatrix rho_out = apply_kernel(rho, kernel);

  ChannelReport r;
  r.fidelity = mean;
  r.purity_in = purity(rho);
  r.purity_out = purity(rho_out);
  r.trace_error = std::abs(rho_out.trace() - 1.0);
  r.method = ChannelMethod::MonteCarlo;
  r.n_samples = n_samples;
  r.std_err = std::sqrt(var / N);
  return r;
}

ChannelReport mc_protocol(const GaussianSpec& system, const TokenSpec& token, PovmSmearing smearing, double tau,
                          std::size_t n_samples, std::uint64_t seed) {
  const Grid grid = default_grid(system.width, token.sigma(), system.mu_x);
  const WaveFunction psi = gaussian_wavefunction(system, grid);
  const auto dist = OutcomeDistribution::for_token(token, smearing);
  return mc_protocol(psi, dist, tau, n_samples, seed);
}

}  // namespace qrfcomm
