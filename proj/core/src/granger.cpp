#include "tenet/granger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tenet/errors.hpp"
#include "tenet/rng.hpp"
#include "tenet/stats.hpp"

namespace tenet {

namespace {

constexpr double kRankTolerance = 1e-10;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Conditioning set for an ordered pair: every other label, sorted, so the
// design (and thus the result bits) cannot depend on panel column order.
std::vector<std::string> conditioning_labels(const ReturnPanel& panel,
                                             const std::string& source,
                                             const std::string& target) {
  std::vector<std::string> z;
  for (const auto& l : panel.labels) {
    if (l != source && l != target) z.push_back(l);
  }
  std::sort(z.begin(), z.end());
  return z;
}

struct PairDesigns {
  LagDesign restricted;
  LagDesign full;
};

PairDesigns build_pair_designs(const ReturnPanel& panel,
                               const std::string& source,
                               const std::string& target, int p,
                               bool conditioned) {
  std::vector<std::string> restricted_sources{target};
  std::vector<std::string> full_sources{target, source};
  if (conditioned) {
    for (const auto& z : conditioning_labels(panel, source, target)) {
      restricted_sources.push_back(z);
      full_sources.push_back(z);
    }
  }
  return {build_lag_design(panel, target, restricted_sources, p),
          build_lag_design(panel, target, full_sources, p)};
}

GcResult evaluate_pair(const ReturnPanel& panel, const std::string& source,
                       const std::string& target, int p, bool conditioned) {
  const auto designs = build_pair_designs(panel, source, target, p, conditioned);
  const OlsFit restricted = ols_fit(designs.restricted);
  const OlsFit full = ols_fit(designs.full);

  GcResult result;
  result.source = source;
  result.target = target;
  result.lag = p;
  result.gc = gc_from_variances(restricted.residual_variance, full.residual_variance);
  result.te = result.gc / 2.0;
  result.p_value = f_test_p_value(restricted, full, p);
  result.pairwise_fallback = !conditioned && panel.cols() > 2;
  return result;
}

double surrogate_p_value(const ReturnPanel& panel, const std::string& source,
                         const std::string& target, int p, bool conditioned,
                         int n_surrogates, std::uint64_t seed) {
  if (n_surrogates < 1) {
    throw std::invalid_argument("gc_significance: need at least 1 surrogate");
  }
  const GcResult observed = evaluate_pair(panel, source, target, p, conditioned);
  const Eigen::Index T = panel.rows();
  const Eigen::Index source_col = panel.column(source);

  // Distinct circular offsets in [p, T-1], sampled without replacement.
  std::vector<Eigen::Index> offsets(static_cast<std::size_t>(T - p));
  std::iota(offsets.begin(), offsets.end(), static_cast<Eigen::Index>(p));
  Xoshiro256pp rng(seed);
  const std::size_t n_used =
      std::min<std::size_t>(static_cast<std::size_t>(n_surrogates), offsets.size());
  for (std::size_t i = 0; i < n_used; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(rng.below(offsets.size() - i));
    std::swap(offsets[i], offsets[j]);
  }

  const Eigen::VectorXd original = panel.values.col(source_col);
  ReturnPanel shifted = panel;
  int exceeding = 0;
  for (std::size_t s = 0; s < n_used; ++s) {
    const Eigen::Index offset = offsets[s];
    for (Eigen::Index t = 0; t < T; ++t) {
      shifted.values(t, source_col) = original((t + offset) % T);
    }
    const GcResult surrogate = evaluate_pair(shifted, source, target, p, conditioned);
    if (surrogate.gc >= observed.gc) ++exceeding;
  }
  return static_cast<double>(1 + exceeding) / static_cast<double>(n_used + 1);
}

}  // namespace

std::string to_string(SigMethod method) {
  return method == SigMethod::FTest ? "f_test" : "surrogate";
}

double gc_from_variances(double var_restricted, double var_full) {
  if (var_full <= 0.0) return std::numeric_limits<double>::infinity();
  return std::log(var_restricted / var_full);
}

double f_test_p_value(const OlsFit& restricted, const OlsFit& full, int p) {
  if (full.rss <= 0.0) return 0.0;
  const double extra = static_cast<double>(p);
  const double dof2 = static_cast<double>(full.dof);
  const double f = ((restricted.rss - full.rss) / extra) / (full.rss / dof2);
  return f_upper_tail(std::max(f, 0.0), extra, dof2);
}

std::string LagDesign::column_name(Eigen::Index c) const {
  if (c == 0) return "intercept";
  const auto idx = static_cast<std::size_t>(c - 1);
  const std::size_t series = idx / static_cast<std::size_t>(lag);
  const std::size_t l = idx % static_cast<std::size_t>(lag) + 1;
  if (series >= included_sources.size()) return "col" + std::to_string(c);
  return included_sources[series] + "[-" + std::to_string(l) + "]";
}

LagDesign build_lag_design(const ReturnPanel& panel, const std::string& target,
                           const std::vector<std::string>& sources, int p,
                           int window) {
  if (p < 1) throw std::invalid_argument("build_lag_design: lag order must be >= 1");
  if (window < 0) window = p;
  if (window < p) throw std::invalid_argument("build_lag_design: window < lag order");

  const Eigen::Index target_col = panel.column(target);
  std::vector<Eigen::Index> source_cols;
  source_cols.reserve(sources.size());
  for (const auto& s : sources) source_cols.push_back(panel.column(s));

  const Eigen::Index T = panel.rows();
  const Eigen::Index rows = T - window;
  const Eigen::Index k = 1 + static_cast<Eigen::Index>(p) *
                                 static_cast<Eigen::Index>(sources.size());
  // rows == k is constructible (exactly determined); ols_fit still demands
  // an overdetermined system
  if (rows < k) {
    throw InsufficientSamples("InsufficientSamples: " + std::to_string(rows) +
                              " rows for " + std::to_string(k) + " predictors");
  }

  LagDesign design;
  design.lag = p;
  design.included_sources = sources;
  design.target.resize(rows);
  design.predictors.resize(rows, k);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index t = window + r;
    design.target(r) = panel.values(t, target_col);
    design.predictors(r, 0) = 1.0;
    Eigen::Index c = 1;
    for (const Eigen::Index sc : source_cols) {
      for (int l = 1; l <= p; ++l) {
        design.predictors(r, c++) = panel.values(t - l, sc);
      }
    }
  }
  return design;
}

OlsFit ols_fit(const LagDesign& design) {
  const Eigen::Index rows = design.predictors.rows();
  const Eigen::Index k = design.predictors.cols();
  if (rows <= k) {
    throw InsufficientSamples("InsufficientSamples: design not overdetermined");
  }

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(design.predictors);
  // Singular values of the k x k R factor equal those of the full design.
  const Eigen::MatrixXd r_factor = qr.matrixQR()
                                       .topRows(k)
                                       .triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(r_factor);
  const auto& sv = svd.singularValues();
  if (!(sv(k - 1) > sv(0) * kRankTolerance)) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> pivoted(design.predictors);
    pivoted.setThreshold(kRankTolerance);
    const Eigen::Index rank = pivoted.rank();
    const auto perm = pivoted.colsPermutation().indices();
    std::vector<std::string> dependent;
    for (Eigen::Index i = rank; i < k; ++i) {
      dependent.push_back(design.column_name(perm(i)));
    }
    throw RankDeficient(dependent);
  }

  OlsFit fit;
  fit.coefficients = qr.solve(design.target);
  const Eigen::VectorXd residuals =
      design.target - design.predictors * fit.coefficients;
  fit.rss = residuals.squaredNorm();
  fit.residual_variance = fit.rss / static_cast<double>(rows);
  fit.dof = rows - k;
  return fit;
}

GcResult conditional_gc(const ReturnPanel& panel, const std::string& source,
                        const std::string& target, int p) {
  if (source == target) {
    throw std::invalid_argument("conditional_gc: source equals target");
  }
  if (panel.cols() < 2) {
    throw InsufficientSamples("InsufficientSamples: need at least 2 series");
  }
  return evaluate_pair(panel, source, target, p, /*conditioned=*/true);
}

double gc_significance(const ReturnPanel& panel, const std::string& source,
                       const std::string& target, int p, SigMethod method,
                       int n_surrogates, std::uint64_t seed) {
  if (method == SigMethod::FTest) {
    return conditional_gc(panel, source, target, p).p_value;
  }
  return surrogate_p_value(panel, source, target, p, /*conditioned=*/true,
                           n_surrogates, seed);
}

int select_lag_bic(const ReturnPanel& panel, const std::string& target, int p_max) {
  if (p_max < 1) throw std::invalid_argument("select_lag_bic: p_max must be >= 1");
  const std::vector<std::string> sources = panel.labels;

  const Eigen::Index T = panel.rows();
  const auto n_rows = static_cast<double>(T - p_max);

  int best_p = 0;
  double best_bic = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= p_max; ++p) {
    const auto design = build_lag_design(panel, target, sources, p, p_max);
    const OlsFit fit = ols_fit(design);
    const auto k = static_cast<double>(design.predictors.cols());
    const double log_var = fit.residual_variance > 0.0
                               ? std::log(fit.residual_variance)
                               : -std::numeric_limits<double>::infinity();
    const double bic = n_rows * log_var + k * std::log(n_rows);
    if (bic < best_bic) {
      best_bic = bic;
      best_p = p;
    }
  }
  return best_p;
}

CausalityMatrix causality_matrix(const ReturnPanel& panel, int p,
                                 SigMethod method, std::uint64_t seed,
                                 int n_surrogates) {
  const Eigen::Index n = panel.cols();
  if (n < 2) throw InsufficientSamples("InsufficientSamples: need at least 2 series");

  CausalityMatrix matrix;
  matrix.labels = panel.labels;
  matrix.lag = p;
  matrix.method = method;
  matrix.seed = seed;
  matrix.gc = Eigen::MatrixXd::Zero(n, n);
  matrix.p_values = Eigen::MatrixXd::Ones(n, n);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::string& source = panel.labels[static_cast<std::size_t>(i)];
      const std::string& target = panel.labels[static_cast<std::size_t>(j)];
      GcResult result;
      bool conditioned = true;
      try {
        try {
          result = evaluate_pair(panel, source, target, p, /*conditioned=*/true);
        } catch (const RankDeficient&) {
          conditioned = false;
          result = evaluate_pair(panel, source, target, p, /*conditioned=*/false);
          matrix.notes.push_back({source, target, "pairwise_fallback"});
        }
        if (method == SigMethod::Surrogate && std::isfinite(result.gc)) {
          const std::uint64_t pair_seed =
              derive_seed(seed, fnv1a(source), fnv1a(target));
          result.p_value = surrogate_p_value(panel, source, target, p, conditioned,
                                             n_surrogates, pair_seed);
          result.method = SigMethod::Surrogate;
        }
      } catch (const Error& err) {
        matrix.gc(i, j) = nan;
        matrix.p_values(i, j) = nan;
        matrix.notes.push_back({source, target, std::string("failed: ") + err.what()});
        continue;
      }
      matrix.gc(i, j) = result.gc;
      matrix.p_values(i, j) = result.p_value;
    }
  }
  return matrix;
}

}  // namespace tenet
