#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tenet {

/// Integer-coded series with symbols in [0, n_bins).
struct SymbolSeries {
  std::vector<int> symbols;
  int n_bins = 0;

  std::size_t size() const { return symbols.size(); }
};

enum class BinScheme { Equiwidth, Equiquantile };

/// Bin a real-valued series into B symbols. Equiquantile places edges at the
/// empirical k/B quantiles (ties go to the lower bin); equiwidth spans
/// [min, max] with the max assigned to the top bin.
SymbolSeries discretize(std::span<const double> series, int n_bins,
                        BinScheme scheme);

/// Dense contingency table over one or more discrete axes. Cell (i0,...,id)
/// is reached at linear index sum_k i_k * stride_k, row-major.
struct JointDistribution {
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  std::vector<int> dims;

  static constexpr std::uint64_t kDefaultCellCap = 1000000;

  /// Tabulate aligned symbol series (one axis each, equal lengths).
  static JointDistribution from_series(
      const std::vector<const SymbolSeries*>& axes,
      std::uint64_t cell_cap = kDefaultCellCap);

  /// Tabulate pre-extracted symbol columns (axis k has values columns[k]
  /// drawn from [0, dims[k])).
  static JointDistribution from_columns(
      const std::vector<std::vector<int>>& columns, std::vector<int> dims,
      std::uint64_t cell_cap = kDefaultCellCap);

  /// Sum out every axis not in `keep_axes` (order of kept axes preserved).
  JointDistribution marginal(std::span<const int> keep_axes) const;

  std::size_t cell_count() const { return counts.size(); }
};

/// Shannon entropy of the table's cell probabilities, in nats:
/// H = -sum p ln p with 0 ln 0 = 0. For a one-axis table this is the plain
/// discrete entropy; for multi-axis tables it equals the joint entropy.
double entropy(const JointDistribution& dist);

/// Joint entropy H(X1,...,Xd) over all axes of the table, in nats.
double joint_entropy(const JointDistribution& dist);

/// Conditional entropy H(target | given) in nats via the chain rule
/// H(T,G) - H(G). Axes must be disjoint subsets of the table's dimensions.
double conditional_entropy(const JointDistribution& dist,
                           std::span<const int> target_axes,
                           std::span<const int> given_axes);

/// Discrete transfer-entropy result; `small_sample` is set when the sample
/// count is below 10x the joint state-space size.
struct TeResult {
  double value = 0.0;
  bool small_sample = false;
};

/// Transfer entropy source -> target at lag p, conditioned on the past of
/// every series in `conditioning`, estimated from raw-frequency contingency
/// tables. Computed as the difference of two conditional entropies and
/// cross-checked internally against the equivalent ratio-form sum (the two
/// must agree to 1e-12, else the call aborts with an internal error).
TeResult discrete_transfer_entropy(
    const SymbolSeries& source, const SymbolSeries& target,
    const std::vector<const SymbolSeries*>& conditioning, int lag,
    std::uint64_t cell_cap = JointDistribution::kDefaultCellCap);

/// Differential entropy of a Gaussian with the given variance:
/// 0.5 * ln(2 * pi * e * variance), in nats.
double gaussian_conditional_entropy(double residual_variance);

}  // namespace tenet
