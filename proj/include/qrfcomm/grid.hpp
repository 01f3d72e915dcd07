#pragma once

// Discretization substrate: a uniform position lattice on [-L, L), its
// discrete-Fourier conjugate momentum lattice on [-P, P), and pure/mixed state
// containers tagged with the basis they are expressed in.
//
// Conventions (hbar = 1):
//   x_j = -L + j dx,   dx = 2L / n
//   p_m = -P + m dp,   dp = pi / L,   P = pi / dx
//   psi~(p) = (2 pi)^(-1/2) \int dx e^{-ipx} psi(x)
// Wave-function amplitudes and density-matrix entries are continuum kernel
// values, so sum |psi_j|^2 * step = 1 and sum rho_jj * step = 1.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace qrfcomm {

using Complex = std::complex<double>;

enum class Basis { Position, Momentum };

const char* to_string(Basis basis);

class Grid {
 public:
  Grid(double half_width, std::size_t n_points);

  double half_width() const { return half_width_; }
  std::size_t size() const { return n_; }
  double dx() const { return 2.0 * half_width_ / static_cast<double>(n_); }
  double dp() const;
  double momentum_half_width() const;
  double step(Basis basis) const { return basis == Basis::Position ? dx() : dp(); }

  double position(std::size_t j) const { return -half_width_ + static_cast<double>(j) * dx(); }
  double momentum(std::size_t m) const;
  std::vector<double> positions() const;
  std::vector<double> momenta() const;

  /// Momentum differences k_l = l * dp for l in [-(n-1), n-1]; index l + n - 1.
  std::size_t difference_count() const { return 2 * n_ - 1; }
  double difference(long l) const { return static_cast<double>(l) * dp(); }

  bool operator==(const Grid& other) const = default;

 private:
  double half_width_;
  std::size_t n_;
};

Grid make_grid(double half_width, std::size_t n_points);

/// L = 12 * max(Delta, sigma, |mu_x| + 3 Delta), n = 1024 unless overridden.
Grid default_grid(double system_width, double token_width, double mean_position = 0.0,
                  std::size_t n_points = 1024);

class WaveFunction {
 public:
  /// Throws PreconditionError unless the norm is 1 within 1e-10.
  WaveFunction(Grid grid, Basis basis, Eigen::VectorXcd amplitudes);

  const Grid& grid() const { return grid_; }
  Basis basis() const { return basis_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }
  double norm() const;

 private:
  Grid grid_;
  Basis basis_;
  Eigen::VectorXcd amplitudes_;
};

class DensityMatrix {
 public:
  /// Validates hermiticity (max |rho - rho^dagger| * step <= 1e-10) and unit
  /// trace within 1e-10. Positivity is O(n^3) and checked on request.
  DensityMatrix(Grid grid, Basis basis, Eigen::MatrixXcd entries);

  const Grid& grid() const { return grid_; }
  Basis basis() const { return basis_; }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  double step() const { return grid_.step(basis_); }

  double trace() const;
  double hermiticity_error() const;
  /// Smallest eigenvalue of the discrete operator rho * step.
  double min_eigenvalue() const;
  /// Throws NumericalError when min_eigenvalue() < -1e-8.
  void require_positive() const;
  /// rho(i, i) for every lattice site.
  std::vector<double> diagonal() const;

 private:
  Grid grid_;
  Basis basis_;
  Eigen::MatrixXcd entries_;
};

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kPositivityTolerance = 1e-8;

WaveFunction to_momentum_basis(const WaveFunction& state);
WaveFunction to_position_basis(const WaveFunction& state);
WaveFunction to_basis(const WaveFunction& state, Basis basis);
DensityMatrix to_momentum_basis(const DensityMatrix& state);
DensityMatrix to_position_basis(const DensityMatrix& state);
DensityMatrix to_basis(const DensityMatrix& state, Basis basis);

/// |psi><psi| in the basis of psi.
DensityMatrix projector(const WaveFunction& state);

/// Convex combination sum_i w_i rho_i; all states must share grid and basis.
DensityMatrix mixture(const std::vector<double>& weights, const std::vector<DensityMatrix>& states);

/// <a|b>, converting b to the basis of a if needed.
Complex inner_product(const WaveFunction& a, const WaveFunction& b);

/// tr(rho^2).
double purity(const DensityMatrix& rho);

/// |psi(x)|^2 or rho(x, x) sampled on the position lattice.
std::vector<double> position_density(const WaveFunction& state);
std::vector<double> position_density(const DensityMatrix& state);

}  // namespace qrfcomm
