#pragma once

// The recovery channel. Bob measures the twirled token, undoes the measured
// translation on the system and discards the token. Net effect on the system:
// a mixture of translations by minus the measurement error u = g' - g, so in
// the momentum basis every off-diagonal rho(p, p') is multiplied by a factor
// depending only on k = p - p':
//
//   asymptotic (tau -> infinity):  p~(k) = \int p(u) e^{iuk} du
//   finite tau:
//     c_tau(k) = \int du p(u) K_tau(u, k),
//     K_tau(u, k) = [ (2 tau - |u|)_+ e^{iuk} + \int_{edge(u)} e^{-igk} dg ] / (2 tau)
//   where edge(u) is the set of g in [-tau, tau] for which g + u leaves the
//   interval (the remainder outcome, left uncorrected).

#include "qrfcomm/grid.hpp"
#include "qrfcomm/povm.hpp"
#include "qrfcomm/states.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qrfcomm {

enum class KernelKind { Asymptotic, FiniteTau };

class DecoherenceKernel {
 public:
  /// values[l + n - 1] is the factor at k = l dp. Throws NumericalError unless
  /// factor(0) = 1 within 1e-10 and |factor| <= 1 + 1e-10 everywhere.
  DecoherenceKernel(Grid grid, KernelKind kind, double tau, std::vector<Complex> values);

  static DecoherenceKernel identity(const Grid& grid);

  const Grid& grid() const { return grid_; }
  KernelKind kind() const { return kind_; }
  double tau() const { return tau_; }
  std::span<const Complex> values() const { return values_; }
  Complex factor(long l) const { return values_[static_cast<std::size_t>(l + static_cast<long>(grid_.size()) - 1)]; }

 private:
  Grid grid_;
  KernelKind kind_;
  double tau_;
  std::vector<Complex> values_;
};

DecoherenceKernel asymptotic_kernel(const OutcomeDistribution& dist, const Grid& grid);

/// Composite Gauss-Legendre over u with breakpoints at 0 and +-2 tau. The
/// default node count gives at least 8 nodes per oscillation of e^{iuk} at the
/// largest lattice |k|; an explicit n_nodes below that throws NumericalError.
DecoherenceKernel finite_tau_kernel(const OutcomeDistribution& dist, double tau, const Grid& grid,
                                    std::size_t n_nodes = 0);

/// Node count required by finite_tau_kernel's resolution guard.
std::size_t finite_tau_required_nodes(const OutcomeDistribution& dist, double tau, const Grid& grid);

/// K_tau(u, k) above.
Complex finite_tau_weight(double u, double k, double tau);

/// max_l |a(k_l) - b(k_l)|.
double max_deviation(const DecoherenceKernel& a, const DecoherenceKernel& b);

/// rho'(p, p') = factor(p - p') rho(p, p'); returned in the basis of rho.
DensityMatrix apply_kernel(const DensityMatrix& rho, const DecoherenceKernel& kernel);

/// Oracle for apply_kernel: rho' = \int p(u) U(-u) rho U(-u)^dagger du as an
/// explicit mixture of translates on n_nodes trapezoid nodes over the
/// distribution's support (default: odd count with spacing <= feature/8).
DensityMatrix apply_by_convolution(const DensityMatrix& rho, const OutcomeDistribution& dist,
                                   std::size_t n_nodes = 0);

/// rho' = sum_i w_i U(-u_i) rho U(-u_i)^dagger for an explicit error ensemble.
DensityMatrix apply_by_convolution(const DensityMatrix& rho, std::span<const double> errors,
                                   std::span<const double> weights);

/// <psi|rho|psi>.
double fidelity(const DensityMatrix& rho_out, const WaveFunction& psi_in);

/// sum_{p, p'} factor(p - p') |psi~(p)|^2 |psi~(p')|^2 dp^2.
double fidelity_double_integral(const DecoherenceKernel& kernel, const WaveFunction& psi_in);

enum class ChannelMethod { Kernel, Convolution, MonteCarlo };

const char* to_string(ChannelMethod method);

struct ChannelReport {
  double fidelity = 0.0;
  double purity_in = 0.0;
  double purity_out = 0.0;
  double trace_error = 0.0;
  ChannelMethod method = ChannelMethod::Kernel;
  std::size_t n_samples = 0;
  double std_err = 0.0;
};

/// Runs |psi><psi| through the kernel channel and reports fidelity, purities
/// and trace error.
ChannelReport evaluate_channel(const WaveFunction& psi_in, const DecoherenceKernel& kernel);

/// Same pipeline through the translate-mixture oracle.
ChannelReport evaluate_channel_by_convolution(const WaveFunction& psi_in, const OutcomeDistribution& dist);

struct MonteCarloOptions {
  /// Samples are split over a fixed number of independently seeded shards so
  /// results do not depend on the thread count.
  std::size_t shards = 64;
};

/// Simulates the measure-and-correct protocol sample by sample: g uniform on
/// [-tau, tau], outcome from the token measurement, net system translation
/// g - g' (outcome) or g (remainder).
ChannelReport mc_protocol(const WaveFunction& psi_in, const OutcomeDistribution& dist, double tau,
                          std::size_t n_samples, std::uint64_t seed, const MonteCarloOptions& options = {});

ChannelReport mc_protocol(const GaussianSpec& system, const TokenSpec& token, PovmSmearing smearing, double tau,
                          std::size_t n_samples, std::uint64_t seed);

inline constexpr std::size_t kMinMonteCarloSamples = 1000;

}  // namespace qrfcomm
