#include <doctest.h>

#include "qrfcomm/errors.hpp"
#include "qrfcomm/group_action.hpp"
#include "qrfcomm/states.hpp"

#include <cmath>

using namespace qrfcomm;

namespace {

double mean_position(const DensityMatrix& rho) {
  const auto d = position_density(rho);
  double m = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) m += rho.grid().position(j) * d[j] * rho.grid().dx();
  return m;
}

}  // namespace

TEST_CASE("translation shifts the mean by +g") {
  const Grid g(20.0, 256);
  const auto psi = gaussian_wavefunction({0.0, 0.3, 1.0}, g);
  const auto moved = translate(psi, {2.0});
  const auto expect = gaussian_wavefunction({2.0, 0.3, 1.0}, g);
  // equal up to the global phase e^{-i mu_p g}
  CHECK(std::abs(inner_product(expect, moved)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mean_position(translate(projector(psi), {2.0})) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("translations compose and preserve the spectrum") {
  const Grid g(20.0, 256);
  const auto rho = projector(gaussian_wavefunction({0.0, 0.0, 1.0}, g));
  const auto a = translate(translate(rho, {1.2}), {-0.5});
  const auto b = translate(rho, {0.7});
  CHECK((a.entries() - b.entries()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(purity(a) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("wrapping translations are refused") {
  const Grid g(10.0, 128);
  const auto psi = gaussian_wavefunction({0.0, 0.0, 1.0}, g);
  CHECK_THROWS_AS(translate(psi, {7.0}), SupportError);
  CHECK_THROWS_AS(compact_twirl(projector(psi), 8.0), SupportError);
  CHECK(wrapped_mass(position_density(psi), g, 0.0) == 0.0);
}

TEST_CASE("twirl factor") {
  CHECK(twirl_factor(2.0, 0.0) == 1.0);
  CHECK(twirl_factor(2.0, 1.0) == doctest::Approx(std::sin(2.0) / 2.0));
  CHECK(twirl_factor(1.0, 1e-12) == doctest::Approx(1.0));
}

TEST_CASE("closed-form twirl matches the node ensemble") {
  const Grid g(16.0, 128);
  const auto rho = projector(gaussian_wavefunction({0.5, 0.8, 1.0}, g));
  const double tau = 2.0;
  const auto closed = compact_twirl(rho, tau);
  const auto nodes = compact_twirl(rho, tau, default_twirl_nodes(g, tau));
  CHECK((closed.entries() - nodes.entries()).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(closed.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(purity(closed) < 1.0);
  CHECK_NOTHROW(closed.require_positive());
  // momentum diagonal untouched
  const auto m0 = to_basis(rho, Basis::Momentum).diagonal();
  const auto m1 = to_basis(closed, Basis::Momentum).diagonal();
  for (std::size_t i = 0; i < m0.size(); ++i) CHECK(std::abs(m0[i] - m1[i]) < 1e-12);
}

TEST_CASE("default twirl node count") {
  const Grid g(16.0, 128);
  CHECK(default_twirl_nodes(g, 0.1) == 201);
  const auto n = default_twirl_nodes(g, 10.0);
  CHECK(n % 2 == 1);
  CHECK(static_cast<double>(n) >= 8.0 * 10.0 * g.momentum_half_width() / std::numbers::pi);
}

TEST_CASE("encoded ensemble marginals") {
  const Grid g(16.0, 128);
  const auto system = projector(gaussian_wavefunction({0.0, 0.0, 1.0}, g));
  const auto token = gaussian_wavefunction({0.0, 0.0, 0.8}, g);
  const double tau = 1.5;
  const auto ens = encode(system, token, tau, default_twirl_nodes(g, tau));
  double total = 0.0;
  for (double w : ens.weights()) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((ens.system_marginal().entries() - compact_twirl(system, tau).entries()).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((ens.token_marginal().entries() - compact_twirl(projector(token), tau).entries()).cwiseAbs().maxCoeff() <
        1e-8);
  CHECK_THROWS_AS(TwirlEnsemble({{0.0}}, {0.5}, token, system), PreconditionError);
}

TEST_CASE("twirl commutes with translations") {
  const Grid g(16.0, 128);
  const auto rho = projector(gaussian_wavefunction({0.3, 0.5, 1.0}, g));
  const auto a = compact_twirl(translate(rho, {1.1}), 2.0);
  const auto b = translate(compact_twirl(rho, 2.0), {1.1});
  CHECK((a.entries() - b.entries()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("group inverse and identity") {
  const Grid g(16.0, 128);
  const auto psi = gaussian_wavefunction({0.3, 0.5, 1.0}, g);
  CHECK((translate(translate(psi, {1.7}), {-1.7}).amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((translate(psi, {0.0}).amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
}
