#include <doctest.h>

#include "qrfcomm/kernels.hpp"

#include <random>

using namespace qrfcomm;
namespace k = qrfcomm::kernels;

namespace {

Eigen::MatrixXcd random_matrix(Eigen::Index n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> d;
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(d(gen), d(gen));
  return m;
}

}  // namespace

TEST_CASE("serial and parallel transforms agree") {
  const Grid g(8.0, 128);
  const auto m = random_matrix(128, 1);
  for (auto dir : {k::Direction::Forward, k::Direction::Inverse}) {
    Eigen::MatrixXcd a = m;
    Eigen::MatrixXcd b = m;
    k::serial::transform_columns(a, g, dir);
    k::parallel::transform_columns(b, g, dir);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  }
  Eigen::MatrixXcd round = m;
  k::parallel::transform_columns(round, g, k::Direction::Forward);
  k::parallel::transform_columns(round, g, k::Direction::Inverse);
  CHECK((round - m).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((k::transform(m.col(3), g, k::Direction::Forward) - [&] {
           Eigen::MatrixXcd c = m;
           k::serial::transform_columns(c, g, k::Direction::Forward);
           return Eigen::VectorXcd(c.col(3));
         }())
            .cwiseAbs()
            .maxCoeff() < 1e-14);
}

TEST_CASE("transform matches the direct sum") {
  const Grid g(5.0, 16);
  const auto m = random_matrix(16, 2);
  Eigen::MatrixXcd a = m;
  k::serial::transform_columns(a, g, k::Direction::Forward);
  double worst = 0.0;
  for (std::size_t mi = 0; mi < 16; ++mi) {
    Complex s{};
    for (std::size_t j = 0; j < 16; ++j)
      s += std::polar(1.0, -g.momentum(mi) * g.position(j)) * m(static_cast<Eigen::Index>(j), 0);
    s *= g.dx() / std::sqrt(2.0 * std::numbers::pi);
    worst = std::max(worst, std::abs(s - a(static_cast<Eigen::Index>(mi), 0)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("serial and parallel modulation, mixtures, autocorrelation agree") {
  const Grid g(8.0, 64);
  const auto m = random_matrix(64, 3);
  std::vector<Complex> f(g.difference_count());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::polar(0.5, 0.1 * static_cast<double>(i));
  Eigen::MatrixXcd a = m;
  Eigen::MatrixXcd b = m;
  k::serial::modulate_by_difference(a, f);
  k::parallel::modulate_by_difference(b, f);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a(5, 2) == m(5, 2) * f[5 - 2 + 63]);

  const auto p = g.momenta();
  const std::vector<double> shifts{-0.3, 0.0, 0.7};
  const std::vector<double> w{0.2, 0.5, 0.3};
  const auto s1 = k::serial::phase_mixture(m, p, shifts, w);
  const auto s2 = k::parallel::phase_mixture(m, p, shifts, w);
  CHECK((s1 - s2).cwiseAbs().maxCoeff() < 1e-14);

  const auto c1 = k::serial::difference_autocorrelation(m, g.dp());
  const auto c2 = k::parallel::difference_autocorrelation(m, g.dp());
  double worst = 0.0;
  for (std::size_t i = 0; i < c1.size(); ++i) worst = std::max(worst, std::abs(c1[i] - c2[i]));
  CHECK(worst < 1e-12);
  Complex direct{};
  for (Eigen::Index i = 0; i + 2 < 64; ++i) direct += m(i, i + 2);
  CHECK(std::abs(c1[63 + 2] - direct * g.dp()) < 1e-12);

  const Eigen::VectorXcd v = m.col(0);
  const auto v1 = k::serial::difference_autocorrelation(v, g.dp());
  const auto v2 = k::parallel::difference_autocorrelation(v, g.dp());
  worst = 0.0;
  for (std::size_t i = 0; i < v1.size(); ++i) worst = std::max(worst, std::abs(v1[i] - v2[i]));
  CHECK(worst < 1e-12);
}

TEST_CASE("tabulate") {
  const auto a = k::serial::tabulate(100, [](std::size_t i) { return static_cast<double>(i * i); });
  const auto b = k::parallel::tabulate(100, [](std::size_t i) { return static_cast<double>(i * i); });
  CHECK(a == b);
}
