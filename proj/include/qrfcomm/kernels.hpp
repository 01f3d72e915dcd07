#pragma once

// Hot loops of the simulator. Every kernel has a plain serial implementation,
// kept as the reference the tests compare against, and an OpenMP
// implementation used by the library. Both must produce results equal to
// rounding; reductions in the parallel versions are ordered so that they are
// bit-identical to serial whenever the loop body has no cross-iteration sums.

#include "qrfcomm/grid.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace qrfcomm::kernels {

enum class Direction { Forward, Inverse };

namespace serial {

/// Centered unitary transform of every column (position <-> momentum).
void transform_columns(Eigen::MatrixXcd& columns, const Grid& grid, Direction direction);

/// m(i, j) *= factor[i - j + n - 1].
void modulate_by_difference(Eigen::MatrixXcd& m, std::span<const Complex> factor);

/// out(i, j) = sum_s w_s exp(-i t_s (p_i - p_j)) rho(i, j), evaluated term by
/// term. Brute-force mixture of lattice translations.
Eigen::MatrixXcd phase_mixture(const Eigen::MatrixXcd& rho_momentum, std::span<const double> momenta,
                               std::span<const double> shifts, std::span<const double> weights);

/// chi_l = sum_m rho(m, m + l) * dp for l in [-(n-1), n-1].
std::vector<Complex> difference_autocorrelation(const Eigen::MatrixXcd& rho_momentum, double dp);

/// chi_l = sum_m psi_m conj(psi_{m+l}) * dp.
std::vector<Complex> difference_autocorrelation(const Eigen::VectorXcd& psi_momentum, double dp);

template <class Fn>
auto tabulate(std::size_t count, Fn&& fn) {
  using T = decltype(fn(std::size_t{0}));
  std::vector<T> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
  return out;
}

}  // namespace serial

namespace parallel {

void transform_columns(Eigen::MatrixXcd& columns, const Grid& grid, Direction direction);
void modulate_by_difference(Eigen::MatrixXcd& m, std::span<const Complex> factor);
Eigen::MatrixXcd phase_mixture(const Eigen::MatrixXcd& rho_momentum, std::span<const double> momenta,
                               std::span<const double> shifts, std::span<const double> weights);
std::vector<Complex> difference_autocorrelation(const Eigen::MatrixXcd& rho_momentum, double dp);
std::vector<Complex> difference_autocorrelation(const Eigen::VectorXcd& psi_momentum, double dp);

template <class Fn>
auto tabulate(std::size_t count, Fn&& fn) {
  using T = decltype(fn(std::size_t{0}));
  std::vector<T> out(count);
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
  return out;
}

}  // namespace parallel

/// Single-vector centered transform (no threading).
Eigen::VectorXcd transform(const Eigen::VectorXcd& v, const Grid& grid, Direction direction);

}  // namespace qrfcomm::kernels
