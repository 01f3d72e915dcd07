#include <doctest.h>

#include "qrfcomm/errors.hpp"
#include "qrfcomm/group_action.hpp"
#include "qrfcomm/states.hpp"

#include <cmath>

using namespace qrfcomm;

TEST_CASE("Gaussian moments follow the width convention") {
  const Grid g(30.0, 512);
  const auto psi = gaussian_wavefunction({1.5, 0.0, 2.0}, g);
  const auto dens = position_density(psi);
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    mean += g.position(j) * dens[j] * g.dx();
    second += g.position(j) * g.position(j) * dens[j] * g.dx();
  }
  CHECK(mean == doctest::Approx(1.5).epsilon(1e-12));
  // variance w^2 / 2
  CHECK(second - mean * mean == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("Gaussian packets that do not fit are rejected") {
  const Grid g(5.0, 64);
  CHECK_THROWS_AS(gaussian_wavefunction({0.0, 0.0, 2.0}, g), SupportError);
  CHECK_THROWS_AS(gaussian_wavefunction({0.0, 0.0, 0.02}, g), SupportError);
  CHECK_THROWS_AS(gaussian_wavefunction({0.0, 0.0, 0.0}, g), PreconditionError);
  CHECK(gaussian_tail_mass({0.0, 0.0, 0.5}, g) < 1e-12);
}

TEST_CASE("superposition token normalization") {
  const Grid g(24.0, 512);
  const Superposition s{0.7, 1.1, 1.0};
  // N = 2 + 2 e^{-x^2/sigma^2 - p^2 sigma^2}
  CHECK(superposition_normalization(s, g) == doctest::Approx(2.0 + 2.0 * std::exp(-0.49 - 1.21)).epsilon(1e-12));
  const auto e = token_wavefunction(TokenSpec::superposition(0.7, 1.1, 1.0), g);
  CHECK(e.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(TokenSpec::superposition(0.7, 1.1, 1.0).sigma() == 1.0);
  CHECK_FALSE(TokenSpec::superposition(0.7, 1.1, 1.0).is_single());
  CHECK(TokenSpec::single(2.0).is_single());
}

TEST_CASE("token overlap of a translated Gaussian") {
  const Grid g(24.0, 512);
  const auto spec = TokenSpec::single(1.0);
  // |<e(g)|e(g')>| = e^{-(g - g')^2 / 4 sigma^2}
  CHECK(std::abs(token_overlap(spec, 0.5, -1.0, g)) == doctest::Approx(std::exp(-2.25 / 4.0)).epsilon(1e-10));
  CHECK(std::abs(token_overlap(spec, 0.3, 0.3, g)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("default token grid") {
  CHECK(default_token_grid(TokenSpec::single(1.0)).half_width() == doctest::Approx(12.0));
  CHECK(default_token_grid(TokenSpec::superposition(2.0, 0.0, 1.0)).half_width() == doctest::Approx(60.0));
  CHECK(default_token_grid(TokenSpec::single(3.0), 1024, 4.0).half_width() == doctest::Approx(60.0));
}
