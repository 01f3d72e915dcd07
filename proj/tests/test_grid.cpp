#include <doctest.h>

#include "qrfcomm/errors.hpp"
#include "qrfcomm/grid.hpp"
#include "qrfcomm/states.hpp"

#include <cmath>
#include <numbers>

using namespace qrfcomm;

TEST_CASE("grid spacing and lattices") {
  const Grid g(10.0, 256);
  CHECK(g.dx() == doctest::Approx(20.0 / 256));
  CHECK(g.dp() == doctest::Approx(std::numbers::pi / 10.0));
  CHECK(g.momentum_half_width() == doctest::Approx(std::numbers::pi / g.dx()));
  CHECK(g.position(0) == doctest::Approx(-10.0));
  CHECK(g.position(128) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(g.momentum(128) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(g.difference_count() == 511);
  CHECK(g.step(Basis::Position) == g.dx());
  CHECK(g.step(Basis::Momentum) == g.dp());
}

TEST_CASE("grid rejects bad sizes") {
  CHECK_THROWS_AS(Grid(10.0, 7), PreconditionError);
  CHECK_THROWS_AS(Grid(10.0, 6), PreconditionError);
  CHECK_THROWS_AS(Grid(-1.0, 64), PreconditionError);
  CHECK_THROWS_AS(Grid(10.0, 255), PreconditionError);
}

TEST_CASE("default grid follows the widest scale") {
  CHECK(default_grid(1.0, 0.5).half_width() == doctest::Approx(36.0));
  CHECK(default_grid(0.5, 2.0).half_width() == doctest::Approx(24.0));
  CHECK(default_grid(1.0, 1.0, 4.0).half_width() == doctest::Approx(84.0));
  CHECK(default_grid(1.0, 1.0).size() == 1024);
}

TEST_CASE("centered transform of a Gaussian") {
  const Grid g(20.0, 512);
  const auto psi = gaussian_wavefunction({1.0, 0.5, 1.3}, g);
  const auto mom = to_basis(psi, Basis::Momentum);
  CHECK(mom.norm() == doctest::Approx(1.0).epsilon(1e-12));
  // psi~(p) = pi^{-1/4} w^{1/2} e^{-i (p - mu_p) mu_x} e^{-(p - mu_p)^2 w^2 / 2}
  double worst = 0.0;
  for (std::size_t m = 0; m < g.size(); ++m) {
    const double p = g.momentum(m);
    const Complex expect = std::pow(std::numbers::pi, -0.25) * std::sqrt(1.3) *
                           std::polar(std::exp(-0.5 * (p - 0.5) * (p - 0.5) * 1.69), -(p - 0.5) * 1.0);
    worst = std::max(worst, std::abs(mom[m] - expect));
  }
  CHECK(worst < 1e-10);
  const auto back = to_basis(mom, Basis::Position);
  CHECK((back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("basis conversions reject the wrong input basis") {
  const Grid g(10.0, 64);
  const auto psi = gaussian_wavefunction({0.0, 0.0, 1.0}, g);
  CHECK_THROWS_AS(to_position_basis(psi), PreconditionError);
  CHECK_THROWS_AS(to_momentum_basis(to_basis(psi, Basis::Momentum)), PreconditionError);
}

TEST_CASE("density matrix validation") {
  const Grid g(10.0, 64);
  const auto psi = gaussian_wavefunction({0.0, 0.0, 1.0}, g);
  const auto rho = projector(psi);
  CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rho.hermiticity_error() < 1e-14);
  CHECK_NOTHROW(rho.require_positive());

  Eigen::MatrixXcd bad = rho.entries();
  bad(3, 5) += Complex(0.0, 1.0);
  CHECK_THROWS_AS(DensityMatrix(g, Basis::Position, bad), PreconditionError);
  CHECK_THROWS_AS(DensityMatrix(g, Basis::Position, 2.0 * rho.entries()), PreconditionError);
  CHECK_THROWS_AS(WaveFunction(g, Basis::Position, 2.0 * psi.amplitudes()), PreconditionError);

  Eigen::MatrixXcd neg = -rho.entries() + 2.0 * Eigen::MatrixXcd::Identity(64, 64) / (64 * g.dx());
  const DensityMatrix r2(g, Basis::Position, neg);
  CHECK_THROWS_AS(r2.require_positive(), NumericalError);
}

TEST_CASE("density basis change matches the wave function") {
  const Grid g(12.0, 128);
  const auto psi = gaussian_wavefunction({0.5, -1.0, 1.2}, g);
  const auto a = to_basis(projector(psi), Basis::Momentum);
  const auto b = projector(to_basis(psi, Basis::Momentum));
  CHECK((a.entries() - b.entries()).cwiseAbs().maxCoeff() < 1e-12);
  const auto c = to_basis(a, Basis::Position);
  CHECK((c.entries() - projector(psi).entries()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mixtures and overlaps") {
  const Grid g(12.0, 128);
  const auto a = gaussian_wavefunction({-2.0, 0.0, 1.0}, g);
  const auto b = gaussian_wavefunction({2.0, 0.0, 1.0}, g);
  CHECK(std::abs(inner_product(a, b)) == doctest::Approx(std::exp(-4.0)).epsilon(1e-10));
  const auto mix = mixture({0.25, 0.75}, {projector(a), projector(b)});
  CHECK(mix.trace() == doctest::Approx(1.0));
  CHECK(purity(mix) == doctest::Approx(0.625 + 2 * 0.1875 * std::exp(-8.0)).epsilon(1e-10));
  CHECK_THROWS_AS(mixture({1.0}, {}), PreconditionError);
}
