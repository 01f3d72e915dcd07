#include "qrfcomm/kernels.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>

namespace qrfcomm::kernels {

namespace {

// Centered transform on top of a plain DFT:
//   e^{-i p_m x_j} = (-1)^{n/2} (-1)^j (-1)^m e^{-2 pi i m j / n}   (n even)
class CenteredTransform {
 public:
  explicit CenteredTransform(const Grid& grid) : grid_(grid), buffer_in_(grid.size()), buffer_out_(grid.size()) {
    fft_.SetFlag(Eigen::FFT<double>::Unscaled);
    const double sign = (grid.size() / 2) % 2 == 0 ? 1.0 : -1.0;
    forward_scale_ = sign * grid.dx() / std::sqrt(2.0 * std::numbers::pi);
    inverse_scale_ = sign * grid.dp() / std::sqrt(2.0 * std::numbers::pi);
  }

  template <class Vec>
  void apply(Vec&& v, Direction direction) {
    const std::size_t n = grid_.size();
    for (std::size_t j = 0; j < n; ++j) {
      const Complex a = v[static_cast<Eigen::Index>(j)];
      buffer_in_[j] = (j % 2 == 0) ? a : -a;
    }
    if (direction == Direction::Forward) {
      fft_.fwd(buffer_out_, buffer_in_);
    } else {
      fft_.inv(buffer_out_, buffer_in_);
    }
    const double scale = direction == Direction::Forward ? forward_scale_ : inverse_scale_;
    for (std::size_t m = 0; m < n; ++m) {
      const Complex b = buffer_out_[m] * scale;
      v[static_cast<Eigen::Index>(m)] = (m % 2 == 0) ? b : -b;
    }
  }

 private:
  Grid grid_;
  Eigen::FFT<double> fft_;
  std::vector<Complex> buffer_in_;
  std::vector<Complex> buffer_out_;
  double forward_scale_ = 1.0;
  double inverse_scale_ = 1.0;
};

std::vector<std::vector<Complex>> translation_phases(std::span<const double> momenta,
                                                     std::span<const double> shifts) {
  std::vector<std::vector<Complex>> phases(shifts.size(), std::vector<Complex>(momenta.size()));
  for (std::size_t s = 0; s < shifts.size(); ++s) {
    for (std::size_t m = 0; m < momenta.size(); ++m) phases[s][m] = std::polar(1.0, -shifts[s] * momenta[m]);
  }
  return phases;
}

void mixture_column(const Eigen::MatrixXcd& rho, const std::vector<std::vector<Complex>>& phases,
                    std::span<const double> weights, Eigen::Index col, Eigen::MatrixXcd& out,
                    std::vector<Complex>& acc) {
  const auto n = rho.rows();
  std::fill(acc.begin(), acc.end(), Complex{});
  for (std::size_t s = 0; s < phases.size(); ++s) {
    const Complex right = weights[s] * std::conj(phases[s][static_cast<std::size_t>(col)]);
    const auto& left = phases[s];
    for (Eigen::Index i = 0; i < n; ++i) acc[static_cast<std::size_t>(i)] += left[static_cast<std::size_t>(i)] * right;
  }
  for (Eigen::Index i = 0; i < n; ++i) out(i, col) = acc[static_cast<std::size_t>(i)] * rho(i, col);
}

Complex autocorrelation_term(const Eigen::MatrixXcd& rho, long l) {
  const long n = static_cast<long>(rho.rows());
  Complex sum{};
  const long begin = l < 0 ? -l : 0;
  const long end = l < 0 ? n : n - l;
  for (long m = begin; m < end; ++m) sum += rho(m, m + l);
  return sum;
}

Complex autocorrelation_term(const Eigen::VectorXcd& psi, long l) {
  const long n = static_cast<long>(psi.size());
  Complex sum{};
  const long begin = l < 0 ? -l : 0;
  const long end = l < 0 ? n : n - l;
  for (long m = begin; m < end; ++m) sum += psi[m] * std::conj(psi[m + l]);
  return sum;
}

}  // namespace

Eigen::VectorXcd transform(const Eigen::VectorXcd& v, const Grid& grid, Direction direction) {
  Eigen::VectorXcd out = v;
  CenteredTransform t(grid);
  t.apply(out, direction);
  return out;
}

namespace serial {

void transform_columns(Eigen::MatrixXcd& columns, const Grid& grid, Direction direction) {
  CenteredTransform t(grid);
  for (Eigen::Index c = 0; c < columns.cols(); ++c) t.apply(columns.col(c), direction);
}

void modulate_by_difference(Eigen::MatrixXcd& m, std::span<const Complex> factor) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) *= factor[static_cast<std::size_t>(i - j + n - 1)];
  }
}

Eigen::MatrixXcd phase_mixture(const Eigen::MatrixXcd& rho_momentum, std::span<const double> momenta,
                               std::span<const double> shifts, std::span<const double> weights) {
  const auto phases = translation_phases(momenta, shifts);
  Eigen::MatrixXcd out(rho_momentum.rows(), rho_momentum.cols());
  std::vector<Complex> acc(static_cast<std::size_t>(rho_momentum.rows()));
  for (Eigen::Index j = 0; j < rho_momentum.cols(); ++j) mixture_column(rho_momentum, phases, weights, j, out, acc);
  return out;
}

std::vector<Complex> difference_autocorrelation(const Eigen::MatrixXcd& rho_momentum, double dp) {
  const long n = static_cast<long>(rho_momentum.rows());
  std::vector<Complex> chi(static_cast<std::size_t>(2 * n - 1));
  for (long l = -(n - 1); l <= n - 1; ++l) chi[static_cast<std::size_t>(l + n - 1)] = dp * autocorrelation_term(rho_momentum, l);
  return chi;
}

std::vector<Complex> difference_autocorrelation(const Eigen::VectorXcd& psi_momentum, double dp) {
  const long n = static_cast<long>(psi_momentum.size());
  std::vector<Complex> chi(static_cast<std::size_t>(2 * n - 1));
  for (long l = -(n - 1); l <= n - 1; ++l) chi[static_cast<std::size_t>(l + n - 1)] = dp * autocorrelation_term(psi_momentum, l);
  return chi;
}

}  // namespace serial

namespace parallel {

void transform_columns(Eigen::MatrixXcd& columns, const Grid& grid, Direction direction) {
  const auto cols = static_cast<long long>(columns.cols());
#pragma omp parallel
  {
    CenteredTransform t(grid);
#pragma omp for schedule(static)
    for (long long c = 0; c < cols; ++c) t.apply(columns.col(static_cast<Eigen::Index>(c)), direction);
  }
}

void modulate_by_difference(Eigen::MatrixXcd& m, std::span<const Complex> factor) {
  const Eigen::Index n = m.rows();
  const auto cols = static_cast<long long>(m.cols());
#pragma omp parallel for schedule(static)
  for (long long jj = 0; jj < cols; ++jj) {
    const auto j = static_cast<Eigen::Index>(jj);
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) *= factor[static_cast<std::size_t>(i - j + n - 1)];
  }
}

Eigen::MatrixXcd phase_mixture(const Eigen::MatrixXcd& rho_momentum, std::span<const double> momenta,
                               std::span<const double> shifts, std::span<const double> weights) {
  const auto phases = translation_phases(momenta, shifts);
  Eigen::MatrixXcd out(rho_momentum.rows(), rho_momentum.cols());
  const auto cols = static_cast<long long>(rho_momentum.cols());
#pragma omp parallel
  {
    std::vector<Complex> acc(static_cast<std::size_t>(rho_momentum.rows()));
#pragma omp for schedule(static)
    for (long long j = 0; j < cols; ++j) mixture_column(rho_momentum, phases, weights, static_cast<Eigen::Index>(j), out, acc);
  }
  return out;
}

std::vector<Complex> difference_autocorrelation(const Eigen::MatrixXcd& rho_momentum, double dp) {
  const long n = static_cast<long>(rho_momentum.rows());
  std::vector<Complex> chi(static_cast<std::size_t>(2 * n - 1));
#pragma omp parallel for schedule(dynamic, 16)
  for (long l = -(n - 1); l <= n - 1; ++l) chi[static_cast<std::size_t>(l + n - 1)] = dp * autocorrelation_term(rho_momentum, l);
  return chi;
}

std::vector<Complex> difference_autocorrelation(const Eigen::VectorXcd& psi_momentum, double dp) {
  const long n = static_cast<long>(psi_momentum.size());
  std::vector<Complex> chi(static_cast<std::size_t>(2 * n - 1));
#pragma omp parallel for schedule(dynamic, 16)
  for (long l = -(n - 1); l <= n - 1; ++l) chi[static_cast<std::size_t>(l + n - 1)] = dp * autocorrelation_term(psi_momentum, l);
  return chi;
}

}  // namespace parallel

}  // namespace qrfcomm::kernels
