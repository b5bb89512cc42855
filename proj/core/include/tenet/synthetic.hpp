#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tenet/infotheory.hpp"
#include "tenet/panel.hpp"

namespace tenet {

/// Specification of a stationary VAR(p) generator with known coupling.
/// coupling[k](i, j) is the effect of series j's lag k+1 on series i.
struct VarSpec {
  int n = 0;
  int p = 1;
  std::vector<Eigen::MatrixXd> coupling;
  Eigen::VectorXd noise_sd;  // per-series, all > 0
  int T = 0;
  std::uint64_t seed = 0;

  /// Convenience: n series, all-zero coupling matrices for lags 1..p.
  static VarSpec zero(int n, int p, int T, std::uint64_t seed);
};

/// Spectral radius of the VAR companion matrix (stationary iff < 1).
double companion_spectral_radius(const VarSpec& spec);

/// Simulate the VAR and return the sample path as a ReturnPanel with
/// synthetic ISO dates. The first 10*p samples are discarded as burn-in.
/// Deterministic per seed (xoshiro256++ / Box-Muller).
ReturnPanel generate_var(const VarSpec& spec);

/// Binary copy chain: X iid uniform bits, Y(t) = X(t-1). The canonical
/// known-answer process for transfer-entropy estimators.
std::pair<SymbolSeries, SymbolSeries> generate_copy_chain(int T, std::uint64_t seed);

/// Invert the log-return map: p(t) = initial_price * exp(cumsum of returns),
/// with one synthetic leading timestamp. compute_returns of the result
/// recovers the input panel.
PricePanel price_panel_from_returns(const ReturnPanel& panel, double initial_price);

/// Sequential ISO-8601 dates (plain day arithmetic, no trading calendar).
std::vector<std::string> synthetic_dates(std::size_t count,
                                         const std::string& start = "2000-01-03");

}  // namespace tenet
