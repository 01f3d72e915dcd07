#include "qrfcomm/grid.hpp"

#include "qrfcomm/errors.hpp"
#include "qrfcomm/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qrfcomm {

const char* to_string(Basis basis) { return basis == Basis::Position ? "position" : "momentum"; }

Grid::Grid(double half_width, std::size_t n_points) : half_width_(half_width), n_(n_points) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw PreconditionError("grid half-width must be positive and finite");
  }
  if (n_points < 8) throw PreconditionError("grid needs at least 8 points");
  if (n_points % 2 != 0) throw PreconditionError("grid point count must be even");
}

double Grid::dp() const { return std::numbers::pi / half_width_; }

double Grid::momentum_half_width() const { return std::numbers::pi / dx(); }

double Grid::momentum(std::size_t m) const { return -momentum_half_width() + static_cast<double>(m) * dp(); }

std::vector<double> Grid::positions() const {
  std::vector<double> xs(n_);
  for (std::size_t j = 0; j < n_; ++j) xs[j] = position(j);
  return xs;
}

std::vector<double> Grid::momenta() const {
  std::vector<double> ps(n_);
  for (std::size_t m = 0; m < n_; ++m) ps[m] = momentum(m);
  return ps;
}

Grid make_grid(double half_width, std::size_t n_points) { return Grid(half_width, n_points); }

Grid default_grid(double system_width, double token_width, double mean_position, std::size_t n_points) {
  const double extent = std::max({system_width, token_width, std::abs(mean_position) + 3.0 * system_width});
  return Grid(12.0 * extent, n_points);
}

WaveFunction::WaveFunction(Grid grid, Basis basis, Eigen::VectorXcd amplitudes)
    : grid_(grid), basis_(basis), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != grid_.size()) {
    throw PreconditionError("amplitude count does not match grid size");
  }
  const double n = norm();
  if (std::abs(n - 1.0) > kNormTolerance) {
    throw PreconditionError("wave function is not normalized (norm " + std::to_string(n) + ")");
  }
}

double WaveFunction::norm() const { return amplitudes_.squaredNorm() * grid_.step(basis_); }

DensityMatrix::DensityMatrix(Grid grid, Basis basis, Eigen::MatrixXcd entries)
    : grid_(grid), basis_(basis), entries_(std::move(entries)) {
  const auto n = static_cast<Eigen::Index>(grid_.size());
  if (entries_.rows() != n || entries_.cols() != n) throw PreconditionError("density matrix shape does not match grid");
  if (hermiticity_error() > kNormTolerance) throw PreconditionError("density matrix is not Hermitian");
  if (std::abs(trace() - 1.0) > kNormTolerance) {
    throw PreconditionError("density matrix trace is not 1 (" + std::to_string(trace()) + ")");
  }
}

double DensityMatrix::trace() const { return entries_.diagonal().real().sum() * step(); }

double DensityMatrix::hermiticity_error() const {
  double worst = 0.0;
  const auto n = entries_.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) worst = std::max(worst, std::abs(entries_(i, j) - std::conj(entries_(j, i))));
  }
  return worst * step();
}

double DensityMatrix::min_eigenvalue() const {
  const Eigen::MatrixXcd op = entries_ * step();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void DensityMatrix::require_positive() const {
  const double lowest = min_eigenvalue();
  if (lowest < -kPositivityTolerance) {
    throw NumericalError("density matrix has negative eigenvalue " + std::to_string(lowest));
  }
}

std::vector<double> DensityMatrix::diagonal() const {
  std::vector<double> d(grid_.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  return d;
}

namespace {

kernels::Direction direction_to(Basis target) {
  return target == Basis::Momentum ? kernels::Direction::Forward : kernels::Direction::Inverse;
}

Eigen::MatrixXcd change_basis(const Eigen::MatrixXcd& rho, const Grid& grid, Basis target) {
  // F rho F^dagger = (F (F rho)^dagger)^dagger
  Eigen::MatrixXcd m = rho;
  kernels::parallel::transform_columns(m, grid, direction_to(target));
  Eigen::MatrixXcd t = m.adjoint();
  kernels::parallel::transform_columns(t, grid, direction_to(target));
  Eigen::MatrixXcd out = t.adjoint();
  // Restore exact hermiticity lost to rounding.
  return 0.5 * (out + out.adjoint());
}

}  // namespace

WaveFunction to_basis(const WaveFunction& state, Basis basis) {
  if (state.basis() == basis) return state;
  Eigen::VectorXcd v = kernels::transform(state.amplitudes(), state.grid(), direction_to(basis));
  return WaveFunction(state.grid(), basis, std::move(v));
}

WaveFunction to_momentum_basis(const WaveFunction& state) {
  if (state.basis() != Basis::Position) throw PreconditionError("to_momentum_basis expects a position-basis state");
  return to_basis(state, Basis::Momentum);
}

WaveFunction to_position_basis(const WaveFunction& state) {
  if (state.basis() != Basis::Momentum) throw PreconditionError("to_position_basis expects a momentum-basis state");
  return to_basis(state, Basis::Position);
}

DensityMatrix to_basis(const DensityMatrix& state, Basis basis) {
  if (state.basis() == basis) return state;
  return DensityMatrix(state.grid(), basis, change_basis(state.entries(), state.grid(), basis));
}

DensityMatrix to_momentum_basis(const DensityMatrix& state) {
  if (state.basis() != Basis::Position) throw PreconditionError("to_momentum_basis expects a position-basis state");
  return to_basis(state, Basis::Momentum);
}

DensityMatrix to_position_basis(const DensityMatrix& state) {
  if (state.basis() != Basis::Momentum) throw PreconditionError("to_position_basis expects a momentum-basis state");
  return to_basis(state, Basis::Position);
}

DensityMatrix projector(const WaveFunction& state) {
  const auto& a = state.amplitudes();
  return DensityMatrix(state.grid(), state.basis(), a * a.adjoint());
}

DensityMatrix mixture(const std::vector<double>& weights, const std::vector<DensityMatrix>& states) {
  if (weights.empty() || weights.size() != states.size()) throw PreconditionError("mixture needs one weight per state");
  const Grid& grid = states.front().grid();
  const Basis basis = states.front().basis();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(states.front().entries().rows(), states.front().entries().cols());
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!(states[i].grid() == grid) || states[i].basis() != basis) throw PreconditionError("mixture components must share grid and basis");
    if (weights[i] < 0.0) throw PreconditionError("mixture weights must be non-negative");
    sum += weights[i] * states[i].entries();
  }
  return DensityMatrix(grid, basis, std::move(sum));
}

Complex inner_product(const WaveFunction& a, const WaveFunction& b) {
  if (!(a.grid() == b.grid())) throw PreconditionError("inner product of states on different grids");
  const WaveFunction bb = to_basis(b, a.basis());
  return a.amplitudes().dot(bb.amplitudes()) * a.grid().step(a.basis());
}

double purity(const DensityMatrix& rho) {
  const double s = rho.step();
  return rho.entries().squaredNorm() * s * s;
}

std::vector<double> position_density(const WaveFunction& state) {
  const WaveFunction pos = to_basis(state, Basis::Position);
  std::vector<double> d(pos.grid().size());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = std::norm(pos[j]);
  return d;
}

std::vector<double> position_density(const DensityMatrix& state) {
  return to_basis(state, Basis::Position).diagonal();
}

}  // namespace qrfcomm
