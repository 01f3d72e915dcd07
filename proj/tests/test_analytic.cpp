#include <doctest.h>

#include "qrfcomm/analytic.hpp"
#include "qrfcomm/errors.hpp"

#include <cmath>

using namespace qrfcomm;

TEST_CASE("Gaussian fidelity closed form") {
  CHECK(gaussian_fidelity(1.0, 1.0, 0.0) == doctest::Approx(1.0 / std::sqrt(1.5)));
  CHECK(gaussian_fidelity(1.0, 1.0, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(gaussian_fidelity(0.5, 0.0, 0.0) == 1.0);
  CHECK(gaussian_fidelity(1.0, 2.0) < gaussian_fidelity(1.0, 1.0));
  CHECK(gaussian_fidelity(2.0, 1.0) > gaussian_fidelity(1.0, 1.0));
  CHECK_THROWS_AS(gaussian_fidelity(0.0, 1.0), PreconditionError);
  CHECK(beta(1.0, 1.0) == doctest::Approx(0.816496580928));
}

TEST_CASE("superposition fidelity") {
  CHECK(superposition_fidelity(1.0, 1.0, 0.0, 0.0) == gaussian_fidelity(1.0, 1.0, 0.0));
  // pinned by an independent quadrature of <psi|rho'|psi> with the token density
  CHECK(superposition_fidelity(1.0, 1.0, 0.0, 1.0) == doctest::Approx(0.903369014852).epsilon(1e-11));
  const double b = beta(1.0, 1.0);
  CHECK(superposition_fidelity(1.0, 1.0, 0.0, 1.0) ==
        doctest::Approx(b * (1.0 + std::exp(-b * b)) / (1.0 + std::exp(-1.0))));
  double prev = 2.0;
  for (double x = 0.0; x <= 3.0; x += 0.25) {
    const double f = superposition_fidelity(1.0, 1.0, x, 1.0);
    CHECK(f < prev);
    prev = f;
  }
  // large arguments stay finite
  CHECK(std::isfinite(superposition_fidelity(1.0, 0.1, 40.0, 300.0)));
}

TEST_CASE("maximization") {
  double prev = 0.0;
  for (double ratio : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    MaximizeOptions opts;
    opts.scan_x_bar = true;
    const auto r = maximize_fidelity(ratio, opts);
    CHECK(r.f_max > r.beta);
    CHECK(r.f_max < 1.0);
    CHECK(r.f_max > prev);
    CHECK(r.x_bar_max_sigma == 0.0);
    prev = r.f_max;
    // dense scan agrees
    double best = 0.0;
    for (int i = 0; i <= 10000; ++i) best = std::max(best, superposition_fidelity(ratio, 1.0, 0.0, 20.0 * i / 10000));
    CHECK(std::abs(best - r.f_max) < 1e-6);
    CHECK(r.f_max >= best - 1e-12);
  }
  CHECK_THROWS_AS(maximize_fidelity(-1.0), PreconditionError);
}
