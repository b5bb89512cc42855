#include "tenet/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tenet/errors.hpp"

namespace tenet {

namespace {

// Neumaier compensated accumulator. Entropy differences here must agree
// across two algebraic routes to 1e-12, which plain summation cannot
// guarantee on large tables.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

double empirical_quantile(const std::vector<double>& sorted, double q) {
  // linear interpolation between order statistics
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<std::uint64_t> strides_for(const std::vector<int>& dims) {
  std::vector<std::uint64_t> strides(dims.size());
  std::uint64_t s = 1;
  for (std::size_t k = dims.size(); k-- > 0;) {
    strides[k] = s;
    s *= static_cast<std::uint64_t>(dims[k]);
  }
  return strides;
}

}  // namespace

SymbolSeries discretize(std::span<const double> series, int n_bins,
                        BinScheme scheme) {
  if (n_bins < 2) throw std::invalid_argument("discretize: need at least 2 bins");
  if (series.size() < static_cast<std::size_t>(n_bins)) {
    throw InsufficientSamples("InsufficientSamples: series shorter than bin count");
  }
  const auto [min_it, max_it] = std::minmax_element(series.begin(), series.end());
  if (*min_it == *max_it) {
    throw DegenerateSeries("constant series cannot be discretized");
  }

  SymbolSeries out;
  out.n_bins = n_bins;
  out.symbols.reserve(series.size());

  if (scheme == BinScheme::Equiwidth) {
    const double lo = *min_it;
    const double width = (*max_it - lo) / static_cast<double>(n_bins);
    for (const double x : series) {
      auto bin = static_cast<int>((x - lo) / width);
      out.symbols.push_back(std::clamp(bin, 0, n_bins - 1));
    }
  } else {
    std::vector<double> sorted(series.begin(), series.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> edges;
    edges.reserve(static_cast<std::size_t>(n_bins) - 1);
    for (int k = 1; k < n_bins; ++k) {
      edges.push_back(empirical_quantile(sorted, static_cast<double>(k) /
                                                     static_cast<double>(n_bins)));
    }
    for (const double x : series) {
      // number of edges strictly below x; a value equal to an edge falls in
      // the lower bin
      const auto bin = std::lower_bound(edges.begin(), edges.end(), x) - edges.begin();
      out.symbols.push_back(static_cast<int>(bin));
    }
  }
  return out;
}

JointDistribution JointDistribution::from_series(
    const std::vector<const SymbolSeries*>& axes, std::uint64_t cell_cap) {
  std::vector<std::vector<int>> columns;
  std::vector<int> dims;
  columns.reserve(axes.size());
  dims.reserve(axes.size());
  for (const SymbolSeries* s : axes) {
    columns.push_back(s->symbols);
    dims.push_back(s->n_bins);
  }
  return from_columns(columns, std::move(dims), cell_cap);
}

JointDistribution JointDistribution::from_columns(
    const std::vector<std::vector<int>>& columns, std::vector<int> dims,
    std::uint64_t cell_cap) {
  if (columns.empty() || columns.size() != dims.size()) {
    throw std::invalid_argument("from_columns: axes/dims mismatch");
  }
  const std::size_t n = columns.front().size();
  std::uint64_t cells = 1;
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k].size() != n) {
      throw std::invalid_argument("from_columns: unequal series lengths");
    }
    if (dims[k] < 1) throw std::invalid_argument("from_columns: invalid bin count");
    if (cells > cell_cap / static_cast<std::uint64_t>(dims[k])) {
      throw StateSpaceTooLarge("StateSpaceTooLarge: contingency table exceeds " +
                               std::to_string(cell_cap) + " cells");
    }
    cells *= static_cast<std::uint64_t>(dims[k]);
  }
  if (n == 0) throw std::invalid_argument("from_columns: empty series");

  JointDistribution dist;
  dist.dims = std::move(dims);
  dist.counts.assign(cells, 0);
  const auto strides = strides_for(dist.dims);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t idx = 0;
    for (std::size_t k = 0; k < columns.size(); ++k) {
      const int sym = columns[k][i];
      if (sym < 0 || sym >= dist.dims[k]) {
        throw std::invalid_argument("from_columns: symbol out of range");
      }
      idx += static_cast<std::uint64_t>(sym) * strides[k];
    }
    ++dist.counts[idx];
  }
  dist.total = n;
  return dist;
}

JointDistribution JointDistribution::marginal(std::span<const int> keep_axes) const {
  for (const int a : keep_axes) {
    if (a < 0 || static_cast<std::size_t>(a) >= dims.size()) {
      throw std::invalid_argument("marginal: axis out of range");
    }
  }
  JointDistribution out;
  out.dims.reserve(keep_axes.size());
  for (const int a : keep_axes) out.dims.push_back(dims[static_cast<std::size_t>(a)]);
  std::uint64_t cells = 1;
  for (const int d : out.dims) cells *= static_cast<std::uint64_t>(d);
  out.counts.assign(cells, 0);
  out.total = total;

  const auto strides = strides_for(dims);
  const auto out_strides = strides_for(out.dims);
  for (std::uint64_t idx = 0; idx < counts.size(); ++idx) {
    if (counts[idx] == 0) continue;
    std::uint64_t out_idx = 0;
    for (std::size_t k = 0; k < keep_axes.size(); ++k) {
      const auto axis = static_cast<std::size_t>(keep_axes[k]);
      const std::uint64_t coord =
          (idx / strides[axis]) % static_cast<std::uint64_t>(dims[axis]);
      out_idx += coord * out_strides[k];
    }
    out.counts[out_idx] += counts[idx];
  }
  return out;
}

double entropy(const JointDistribution& dist) {
  if (dist.total < 1) throw std::invalid_argument("entropy: empty distribution");
  const double total = static_cast<double>(dist.total);
  KahanSum h;
  for (const std::uint64_t c : dist.counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h.add(-p * std::log(p));
  }
  return h.value();
}

double joint_entropy(const JointDistribution& dist) { return entropy(dist); }

double conditional_entropy(const JointDistribution& dist,
                           std::span<const int> target_axes,
                           std::span<const int> given_axes) {
  std::vector<int> joint_axes(target_axes.begin(), target_axes.end());
  for (const int a : given_axes) {
    if (std::find(target_axes.begin(), target_axes.end(), a) != target_axes.end()) {
      throw std::invalid_argument("conditional_entropy: axes must be disjoint");
    }
    joint_axes.push_back(a);
  }
  if (given_axes.empty()) return entropy(dist.marginal(joint_axes));
  return entropy(dist.marginal(joint_axes)) - entropy(dist.marginal(given_axes));
}

namespace {

// Ratio-form evaluation of transfer entropy from the full table and the
// three marginals: sum over joint cells of p * ln[(c_full/c_past) /
// (c_nosrc/c_nosrc_past)]. Cross-checks the conditional-entropy route.
double te_ratio_form(const JointDistribution& full,
                     const JointDistribution& past,
                     const JointDistribution& nosrc,
                     const JointDistribution& nosrc_past,
                     std::span<const int> source_axes) {
  const auto strides = strides_for(full.dims);
  // Map a full-table index to indices in the reduced tables.
  std::vector<bool> is_source(full.dims.size(), false);
  for (const int a : source_axes) is_source[static_cast<std::size_t>(a)] = true;

  const auto past_strides = strides_for(past.dims);
  const auto nosrc_strides = strides_for(nosrc.dims);
  const auto nosrc_past_strides = strides_for(nosrc_past.dims);

  const double total = static_cast<double>(full.total);
  KahanSum sum;
  std::vector<std::uint64_t> coords(full.dims.size());
  for (std::uint64_t idx = 0; idx < full.counts.size(); ++idx) {
    const std::uint64_t c_full = full.counts[idx];
    if (c_full == 0) continue;
    for (std::size_t k = 0; k < full.dims.size(); ++k) {
      coords[k] = (idx / strides[k]) % static_cast<std::uint64_t>(full.dims[k]);
    }
    // axis layout: 0 = present value, 1.. = past axes
    std::uint64_t past_idx = 0, nosrc_idx = 0, nosrc_past_idx = 0;
    std::size_t past_k = 0, nosrc_k = 0, nosrc_past_k = 0;
    for (std::size_t k = 0; k < full.dims.size(); ++k) {
      if (k > 0) past_idx += coords[k] * past_strides[past_k++];
      if (!is_source[k]) {
        nosrc_idx += coords[k] * nosrc_strides[nosrc_k++];
        if (k > 0) nosrc_past_idx += coords[k] * nosrc_past_strides[nosrc_past_k++];
      }
    }
    const double p = static_cast<double>(c_full) / total;
    const double num = static_cast<double>(c_full) /
                       static_cast<double>(past.counts[past_idx]);
    const double den = static_cast<double>(nosrc.counts[nosrc_idx]) /
                       static_cast<double>(nosrc_past.counts[nosrc_past_idx]);
    sum.add(p * std::log(num / den));
  }
  return sum.value();
}

}  // namespace

TeResult discrete_transfer_entropy(
    const SymbolSeries& source, const SymbolSeries& target,
    const std::vector<const SymbolSeries*>& conditioning, int lag,
    std::uint64_t cell_cap) {
  if (lag < 1) throw std::invalid_argument("discrete_transfer_entropy: lag must be >= 1");
  const std::size_t T = target.size();
  if (source.size() != T) {
    throw std::invalid_argument("discrete_transfer_entropy: length mismatch");
  }
  for (const SymbolSeries* z : conditioning) {
    if (z->size() != T) {
      throw std::invalid_argument("discrete_transfer_entropy: length mismatch");
    }
  }
  const auto p = static_cast<std::size_t>(lag);
  if (T <= p) throw InsufficientSamples("InsufficientSamples: series shorter than lag");
  const std::size_t n = T - p;

  // Axis layout of the full table:
  //   0                     : target present value
  //   1 .. p                : target past (lags 1..p)
  //   p+1 .. 2p             : source past
  //   2p+1 ..               : conditioning pasts, p axes per series
  std::vector<std::vector<int>> columns;
  std::vector<int> dims;
  auto push_lagged = [&](const SymbolSeries& s, std::size_t shift) {
    std::vector<int> col(n);
    for (std::size_t t = 0; t < n; ++t) col[t] = s.symbols[t + p - shift];
    columns.push_back(std::move(col));
    dims.push_back(s.n_bins);
  };
  push_lagged(target, 0);
  for (std::size_t l = 1; l <= p; ++l) push_lagged(target, l);
  for (std::size_t l = 1; l <= p; ++l) push_lagged(source, l);
  for (const SymbolSeries* z : conditioning) {
    for (std::size_t l = 1; l <= p; ++l) push_lagged(*z, l);
  }

  const auto full = JointDistribution::from_columns(columns, dims, cell_cap);

  std::vector<int> source_axes;
  for (std::size_t l = 0; l < p; ++l) {
    source_axes.push_back(static_cast<int>(p + 1 + l));
  }
  std::vector<int> past_axes, nosrc_axes, nosrc_past_axes;
  for (int a = 1; a < static_cast<int>(dims.size()); ++a) past_axes.push_back(a);
  for (int a = 0; a < static_cast<int>(dims.size()); ++a) {
    if (std::find(source_axes.begin(), source_axes.end(), a) == source_axes.end()) {
      nosrc_axes.push_back(a);
      if (a > 0) nosrc_past_axes.push_back(a);
    }
  }

  const auto past = full.marginal(past_axes);
  const auto nosrc = full.marginal(nosrc_axes);
  const auto nosrc_past = full.marginal(nosrc_past_axes);

  // H(X|X-,Z-) - H(X|X-,Y-,Z-), each term by the chain rule
  const double h_without = entropy(nosrc) - entropy(nosrc_past);
  const double h_with = entropy(full) - entropy(past);
  const double te = h_without - h_with;

  const double te_ratio = te_ratio_form(full, past, nosrc, nosrc_past, source_axes);
  if (std::fabs(te - te_ratio) > 1e-12) {
    throw std::logic_error("discrete_transfer_entropy: estimator routes disagree by " +
                           std::to_string(std::fabs(te - te_ratio)));
  }

  TeResult result;
  result.value = te;
  result.small_sample = n < 10 * full.cell_count();
  return result;
}

double gaussian_conditional_entropy(double residual_variance) {
  if (!(residual_variance > 0.0)) {
    throw NonPositiveVariance("NonPositiveVariance: variance must be > 0, got " +
                              std::to_string(residual_variance));
  }
  constexpr double two_pi = 2.0 * 3.14159265358979323846;
  return 0.5 * (std::log(two_pi * residual_variance) + 1.0);
}

}  // namespace tenet
