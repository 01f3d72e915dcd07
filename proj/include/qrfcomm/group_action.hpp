#pragma once

// Unitary action of the translation group on lattice states and the uniform
// average over translations in [-tau, tau].
//
// U(g) shifts position densities by +g: psi(x) -> psi(x - g), which in the
// momentum basis is multiplication by e^{-i g p}. The shift is exact on the
// lattice (periodic with period 2L), so every translation first checks that no
// probability wraps around the grid edge.

#include "qrfcomm/grid.hpp"

#include <cstddef>
#include <vector>

namespace qrfcomm {

struct GroupElement {
  double g = 0.0;
};

/// Probability mass that a shift by g would carry across the grid edge.
double wrapped_mass(const std::vector<double>& position_density, const Grid& grid, double g);

WaveFunction translate(const WaveFunction& state, GroupElement g);
DensityMatrix translate(const DensityMatrix& state, GroupElement g);

/// sin(tau k) / (tau k), with value 1 at k = 0.
double twirl_factor(double tau, double k);

/// Closed-form average over [-tau, tau]: momentum-basis off-diagonals scaled by
/// sin(tau k) / (tau k), k = p - p'.
DensityMatrix compact_twirl(const DensityMatrix& rho, double tau);

/// Same average evaluated as an explicit mixture of translates on n_nodes
/// Simpson nodes (odd n_nodes).
DensityMatrix compact_twirl(const DensityMatrix& rho, double tau, std::size_t n_nodes);

/// max(201, ceil(8 tau P / pi)), rounded up to odd.
std::size_t default_twirl_nodes(const Grid& grid, double tau);

/// Encoded joint state G_tau[rho_R (x) rho_S] held as the separable ensemble
/// {w_i, U(g_i) rho_R U(g_i)^dagger (x) U(g_i) rho_S U(g_i)^dagger}.
class TwirlEnsemble {
 public:
  TwirlEnsemble(std::vector<GroupElement> nodes, std::vector<double> weights, WaveFunction token,
                DensityMatrix system);

  const std::vector<GroupElement>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const WaveFunction& base_token() const { return token_; }
  const DensityMatrix& base_system() const { return system_; }
  std::size_t size() const { return nodes_.size(); }

  /// Token traced out.
  DensityMatrix system_marginal() const;
  /// System traced out.
  DensityMatrix token_marginal() const;

 private:
  std::vector<GroupElement> nodes_;
  std::vector<double> weights_;
  WaveFunction token_;
  DensityMatrix system_;
};

TwirlEnsemble encode(const DensityMatrix& system, const WaveFunction& token, double tau, std::size_t n_nodes);

/// sum_i w_i U(g_i) rho U(g_i)^dagger; result in the basis of rho.
DensityMatrix translate_mixture(const DensityMatrix& rho, const std::vector<double>& shifts,
                                const std::vector<double>& weights);

}  // namespace qrfcomm
