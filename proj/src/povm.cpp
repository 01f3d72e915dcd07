#include "qrfcomm/povm.hpp"

#include "qrfcomm/errors.hpp"
#include "qrfcomm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace qrfcomm {

namespace {

constexpr double kTailMass = 1e-14;
constexpr double kSpectralFloor = 1e-15;
constexpr std::size_t kGaussianTablePoints = 8193;
constexpr std::size_t kTableRefinement = 4;

void require_smearing(PovmSmearing smearing) {
  if (!(smearing.delta >= 0.0) || !std::isfinite(smearing.delta)) {
    throw PreconditionError("smearing width must be non-negative");
  }
}

}  // namespace

OutcomeDistribution OutcomeDistribution::gaussian(double sigma, PovmSmearing smearing) {
  require_smearing(smearing);
  if (!(sigma >= 0.0)) throw PreconditionError("token width must be non-negative");
  OutcomeDistribution d;
  d.delta_ = smearing.delta;
  d.width_ = std::hypot(sigma, smearing.delta);
  d.build_table();
  return d;
}

OutcomeDistribution OutcomeDistribution::from_token(const DensityMatrix& token, PovmSmearing smearing) {
  require_smearing(smearing);
  const DensityMatrix mom = to_basis(token, Basis::Momentum);
  auto chi = kernels::parallel::difference_autocorrelation(mom.entries(), token.grid().dp());
  OutcomeDistribution d;
  d.delta_ = smearing.delta;
  d.grid_ = token.grid();
  const long n = static_cast<long>(token.grid().size());
  for (long l = -(n - 1); l <= n - 1; ++l) {
    const double k = token.grid().difference(l);
    chi[static_cast<std::size_t>(l + n - 1)] *= std::exp(-0.25 * smearing.delta * smearing.delta * k * k);
  }
  d.chi_ = std::move(chi);
  d.build_table();
  return d;
}

OutcomeDistribution OutcomeDistribution::from_token(const WaveFunction& token, PovmSmearing smearing) {
  require_smearing(smearing);
  const WaveFunction mom = to_basis(token, Basis::Momentum);
  auto chi = kernels::parallel::difference_autocorrelation(mom.amplitudes(), token.grid().dp());
  OutcomeDistribution d;
  d.delta_ = smearing.delta;
  d.grid_ = token.grid();
  const long n = static_cast<long>(token.grid().size());
  for (long l = -(n - 1); l <= n - 1; ++l) {
    const double k = token.grid().difference(l);
    chi[static_cast<std::size_t>(l + n - 1)] *= std::exp(-0.25 * smearing.delta * smearing.delta * k * k);
  }
  d.chi_ = std::move(chi);
  d.build_table();
  return d;
}

OutcomeDistribution OutcomeDistribution::for_token(const TokenSpec& spec, PovmSmearing smearing) {
  if (const auto* single = std::get_if<SingleGaussian>(&spec.shape)) return gaussian(single->sigma, smearing);
  const Grid grid = default_token_grid(spec, 1024, smearing.delta);
  return from_token(token_wavefunction(spec, grid), smearing);
}

double OutcomeDistribution::density(double g) const {
  if (closed_form()) {
    if (width_ == 0.0) return g == 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    const double z = g / width_;
    return std::exp(-z * z) / (std::sqrt(std::numbers::pi) * width_);
  }
  const Grid& grid = *grid_;
  if (std::abs(g) > grid.half_width()) return 0.0;
  const long n = static_cast<long>(grid.size());
  double sum = chi_[static_cast<std::size_t>(n - 1)].real();
  for (long l = 1; l <= n - 1; ++l) {
    sum += 2.0 * (chi_[static_cast<std::size_t>(l + n - 1)] * std::polar(1.0, -grid.difference(l) * g)).real();
  }
  return std::max(0.0, sum * grid.dp() / (2.0 * std::numbers::pi));
}

Complex OutcomeDistribution::characteristic(double k) const {
  if (closed_form()) return std::exp(-0.25 * width_ * width_ * k * k);
  const Grid& grid = *grid_;
  const long n = static_cast<long>(grid.size());
  const double l_real = k / grid.dp();
  const double l_round = std::round(l_real);
  if (std::abs(l_real - l_round) < 1e-9 && std::abs(l_round) <= static_cast<double>(n - 1)) {
    return chi_[static_cast<std::size_t>(static_cast<long>(l_round) + n - 1)];
  }
  // Fourier transform of the band-limited density restricted to [-L, L].
  const double L = grid.half_width();
  Complex sum{};
  for (long l = -(n - 1); l <= n - 1; ++l) {
    const double x = (k - grid.difference(l)) * L;
    sum += chi_[static_cast<std::size_t>(l + n - 1)] * (std::sin(x) / x);
  }
  return sum;
}

double OutcomeDistribution::mass(double a, double b) const {
  if (b <= a) return 0.0;
  if (closed_form()) {
    if (width_ == 0.0) return (a <= 0.0 && 0.0 <= b) ? 1.0 : 0.0;
    return 0.5 * (std::erf(b / width_) - std::erf(a / width_));
  }
  const Grid& grid = *grid_;
  const double L = grid.half_width();
  a = std::max(a, -L);
  b = std::min(b, L);
  if (b <= a) return 0.0;
  const long n = static_cast<long>(grid.size());
  double sum = chi_[static_cast<std::size_t>(n - 1)].real() * (b - a);
  for (long l = 1; l <= n - 1; ++l) {
    const double k = grid.difference(l);
    const Complex antideriv = (std::polar(1.0, -k * b) - std::polar(1.0, -k * a)) / Complex(0.0, -k);
    sum += 2.0 * (chi_[static_cast<std::size_t>(l + n - 1)] * antideriv).real();
  }
  return std::clamp(sum * grid.dp() / (2.0 * std::numbers::pi), 0.0, 1.0);
}

double OutcomeDistribution::normalization() const {
  if (closed_form()) return 1.0;
  const Grid& grid = *grid_;
  double sum = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) sum += density(grid.position(j));
  return sum * grid.dx();
}

double OutcomeDistribution::support_radius() const { return support_; }

double OutcomeDistribution::feature_scale() const { return feature_; }

double OutcomeDistribution::quantile(double uniform) const {
  const double u = std::clamp(uniform, 0.0, 1.0);
  auto it = std::upper_bound(table_cdf_.begin(), table_cdf_.end(), u);
  if (it == table_cdf_.begin()) return table_x_.front();
  if (it == table_cdf_.end()) return table_x_.back();
  const auto i = static_cast<std::size_t>(it - table_cdf_.begin());
  const double c0 = table_cdf_[i - 1];
  const double c1 = table_cdf_[i];
  const double t = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
  return table_x_[i - 1] + t * (table_x_[i] - table_x_[i - 1]);
}

void OutcomeDistribution::build_table() {
  if (closed_form()) {
    if (width_ == 0.0) {
      support_ = 0.0;
      feature_ = 0.0;
      table_x_ = {0.0, 0.0};
      table_cdf_ = {0.0, 1.0};
      return;
    }
    // erfc(6.2) ~ 2e-18
    support_ = 6.2 * width_;
    feature_ = std::numbers::pi * width_ / (2.0 * std::sqrt(std::log(1.0 / kSpectralFloor)));
    table_x_.resize(kGaussianTablePoints);
    table_cdf_.resize(kGaussianTablePoints);
    for (std::size_t i = 0; i < kGaussianTablePoints; ++i) {
      const double x = -support_ + 2.0 * support_ * static_cast<double>(i) / static_cast<double>(kGaussianTablePoints - 1);
      table_x_[i] = x;
      table_cdf_[i] = 0.5 * std::erfc(-x / width_);
    }
  } else {
    const Grid& grid = *grid_;
    const double L = grid.half_width();
    const std::size_t points = kTableRefinement * grid.size() + 1;
    const double h = 2.0 * L / static_cast<double>(points - 1);
    table_x_.resize(points);
    for (std::size_t i = 0; i < points; ++i) table_x_[i] = -L + static_cast<double>(i) * h;
    const auto dens = kernels::parallel::tabulate(points, [&](std::size_t i) { return density(table_x_[i]); });
    table_cdf_.assign(points, 0.0);
    for (std::size_t i = 1; i < points; ++i) table_cdf_[i] = table_cdf_[i - 1] + 0.5 * h * (dens[i - 1] + dens[i]);
    // The lattice density is periodic; mass near the edge would wrap.
    const double shell = mass(-L, -0.9 * L) + mass(0.9 * L, L);
    if (shell > kTailMassTolerance) {
      throw SupportError("smeared outcome density does not fit the token grid (edge mass " + std::to_string(shell) +
                         ")");
    }
    const double total = table_cdf_.back();
    if (std::abs(total - 1.0) > 1e-9) throw NumericalError("outcome density is not normalized on its grid");
    for (double& c : table_cdf_) c /= total;

    // Smallest radius whose two tails carry < kTailMass.
    double lo = 0.0;
    double hi = L;
    auto tails = [&](double r) { return mass(-L, -r) + mass(r, L); };
    if (tails(0.0) < kTailMass) hi = 0.0;
    for (int it = 0; it < 60 && hi - lo > 1e-6 * L; ++it) {
      const double mid = 0.5 * (lo + hi);
      (tails(mid) < kTailMass ? hi : lo) = mid;
    }
    support_ = hi;

    // pi / k_c, with k_c the largest lattice |k| where |chi| still exceeds the floor.
    const long n = static_cast<long>(grid.size());
    long cutoff = 1;
    for (long l = n - 1; l >= 1; --l) {
      if (std::abs(chi_[static_cast<std::size_t>(l + n - 1)]) > kSpectralFloor) {
        cutoff = l;
        break;
      }
    }
    feature_ = std::numbers::pi / grid.difference(cutoff);
  }
}

double outcome_density(const DensityMatrix& token, PovmSmearing smearing, GroupElement g) {
  return OutcomeDistribution::from_token(token, smearing).density(g.g);
}

double remainder_weight(const OutcomeDistribution& dist, GroupElement g, double tau) {
  if (!(tau > 0.0)) throw PreconditionError("tau must be positive");
  return std::clamp(1.0 - dist.mass(-tau - g.g, tau - g.g), 0.0, 1.0);
}

double remainder_weight(const DensityMatrix& token, PovmSmearing smearing, GroupElement g, double tau) {
  return remainder_weight(OutcomeDistribution::from_token(token, smearing), g, tau);
}

double check_covariance(const DensityMatrix& token, PovmSmearing smearing, GroupElement shift) {
  const auto base = OutcomeDistribution::from_token(token, smearing);
  const auto moved = OutcomeDistribution::from_token(translate(token, shift), smearing);
  const Grid& grid = token.grid();
  const auto dev = kernels::parallel::tabulate(grid.size(), [&](std::size_t j) {
    const double g = grid.position(j);
    return std::abs(moved.density(g) - base.density(g - shift.g));
  });
  return *std::max_element(dev.begin(), dev.end());
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

MeasurementOutcome sample_outcome(const OutcomeDistribution& dist, GroupElement offset, double tau, Rng& rng) {
  if (!(tau > 0.0)) throw PreconditionError("tau must be positive");
  const double g = offset.g + dist.quantile(rng.uniform());
  if (std::abs(g) <= tau) return MeasurementOutcome::outcome(g);
  return MeasurementOutcome::remainder_outcome();
}

std::vector<MeasurementOutcome> sample_outcomes(const OutcomeDistribution& dist, GroupElement offset, double tau,
                                                std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<MeasurementOutcome> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_outcome(dist, offset, tau, rng));
  return out;
}

}  // namespace qrfcomm
