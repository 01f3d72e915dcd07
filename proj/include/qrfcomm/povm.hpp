#pragma once

// Covariant position measurements on the reference token.
//
// The outcome density is p(g) = tr(E_delta(g) rho_R) where E_delta is the
// position PVM smeared by the normalized kernel e^{-q^2/delta^2} / (sqrt(pi) delta).
// Two representations are supported:
//
//  * closed form, for a single Gaussian token of width sigma:
//      p(g) = e^{-g^2/s^2} / (sqrt(pi) s),  s = sqrt(sigma^2 + delta^2);
//  * sampled, for any lattice token state. The density is stored through its
//    characteristic function on the token grid's momentum-difference lattice,
//      chi(k_l) = e^{-delta^2 k_l^2 / 4} sum_m rho~(p_m, p_m + k_l) dp,
//    which determines the band-limited density exactly:
//      p(g) = (dp / 2 pi) sum_l chi(k_l) e^{-i k_l g},  |g| <= L.

#include "qrfcomm/grid.hpp"
#include "qrfcomm/group_action.hpp"
#include "qrfcomm/states.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace qrfcomm {

struct PovmSmearing {
  double delta = 0.0;
};

class OutcomeDistribution {
 public:
  static OutcomeDistribution gaussian(double sigma, PovmSmearing smearing);
  static OutcomeDistribution from_token(const DensityMatrix& token, PovmSmearing smearing);
  static OutcomeDistribution from_token(const WaveFunction& token, PovmSmearing smearing);
  /// Closed form for SingleGaussian, sampled on default_token_grid otherwise.
  static OutcomeDistribution for_token(const TokenSpec& spec, PovmSmearing smearing);

  bool closed_form() const { return !grid_.has_value(); }
  /// sqrt(sigma^2 + delta^2) for the closed form; 0 for sampled densities.
  double gaussian_width() const { return width_; }
  double smearing() const { return delta_; }
  const std::optional<Grid>& grid() const { return grid_; }

  double density(double g) const;
  /// \int p(g) e^{igk} dg.
  Complex characteristic(double k) const;
  /// \int_a^b p(g) dg.
  double mass(double a, double b) const;
  /// \int p(g) dg evaluated by lattice quadrature (closed form: analytic).
  double normalization() const;
  /// Radius outside which the density carries less than 1e-14 of the mass.
  double support_radius() const;
  /// pi / k_c where |characteristic(k)| < 1e-15 beyond k_c: the finest
  /// length scale present in the density.
  double feature_scale() const;

  /// Inverse CDF with linear interpolation on the tabulated cumulative
  /// distribution; uniform in [0, 1).
  double quantile(double uniform) const;

 private:
  OutcomeDistribution() = default;
  void build_table();

  double width_ = 0.0;
  double delta_ = 0.0;
  std::optional<Grid> grid_;
  std::vector<Complex> chi_;
  std::vector<double> table_x_;
  std::vector<double> table_cdf_;
  double support_ = 0.0;
  double feature_ = 0.0;
};

double outcome_density(const DensityMatrix& token, PovmSmearing smearing, GroupElement g);

/// w_tau(g) = 1 - \int_{-tau}^{tau} p(g' - g) dg': probability that a token
/// translated by g yields the remainder outcome.
double remainder_weight(const OutcomeDistribution& dist, GroupElement g, double tau);
double remainder_weight(const DensityMatrix& token, PovmSmearing smearing, GroupElement g, double tau);

/// max_g |p_{U(shift) token}(g) - p_token(g - shift)| over the token grid.
double check_covariance(const DensityMatrix& token, PovmSmearing smearing, GroupElement shift);

/// Seeded 64-bit Mersenne Twister; one instance per sampling stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

/// Derives the seed of stream `index` from a base seed (splitmix64).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

struct MeasurementOutcome {
  bool remainder = true;
  double g = 0.0;

  static MeasurementOutcome outcome(double g) { return {false, g}; }
  static MeasurementOutcome remainder_outcome() { return {true, 0.0}; }
  bool operator==(const MeasurementOutcome&) const = default;
};

/// Measures a token translated by `offset`: outcome g' = offset + u with
/// u ~ p, reported when |g'| <= tau and as the remainder otherwise.
MeasurementOutcome sample_outcome(const OutcomeDistribution& dist, GroupElement offset, double tau, Rng& rng);

std::vector<MeasurementOutcome> sample_outcomes(const OutcomeDistribution& dist, GroupElement offset, double tau,
                                                std::size_t count, std::uint64_t seed);

}  // namespace qrfcomm
