#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "tenet/panel.hpp"

namespace tenet {

/// One lagged regression problem: target value at time t against strictly
/// earlier values of the included series, plus an intercept.
struct LagDesign {
  Eigen::VectorXd target;      // length T - window
  Eigen::MatrixXd predictors;  // columns: intercept, then lags 1..p per source
  int lag = 0;
  std::vector<std::string> included_sources;  // predictor block order

  /// Human-readable name of predictor column c (intercept or "label[-l]").
  std::string column_name(Eigen::Index c) const;
};

/// Build the design for `target` regressed on lags 1..p of each series in
/// `sources` (in the given order). `window` is the first regressed row of
/// the panel; it defaults to p and is raised when several candidate models
/// must share one sample window (lag-order selection).
LagDesign build_lag_design(const ReturnPanel& panel, const std::string& target,
                           const std::vector<std::string>& sources, int p,
                           int window = -1);

struct OlsFit {
  Eigen::VectorXd coefficients;
  double residual_variance = 0.0;  // rss / rows
  double rss = 0.0;
  Eigen::Index dof = 0;  // rows - columns
};

/// Least squares by Householder QR. The design must be numerically full
/// rank (smallest/largest singular value > 1e-10), else RankDeficient names
/// the dependent columns. The normal-equations route exists only as a test
/// oracle, never here.
OlsFit ols_fit(const LagDesign& design);

enum class SigMethod { FTest, Surrogate };

std::string to_string(SigMethod method);

/// ln(var_restricted / var_full); +infinity when the full model's residual
/// variance is zero (the sentinel orders above every finite value).
double gc_from_variances(double var_restricted, double var_full);

/// Nested-model F test: F = ((rss1 - rss2)/p) / (rss2/dof2) against the
/// F(p, dof2) upper tail. rss1 == rss2 gives 1; rss2 == 0 gives 0.
double f_test_p_value(const OlsFit& restricted, const OlsFit& full, int p);

/// Granger causality / transfer entropy for one ordered pair. `te` is
/// always the same floating computation as `gc`, halved.
struct GcResult {
  std::string source;
  std::string target;
  double gc = 0.0;  // ln(var_restricted / var_full); +inf when var_full == 0
  double te = 0.0;  // gc / 2
  double p_value = 1.0;
  int lag = 0;
  SigMethod method = SigMethod::FTest;
  bool pairwise_fallback = false;  // set when conditioning was dropped
};

/// Conditional Granger causality source -> target at lag p, conditioning on
/// the past of every other series in the panel (sorted by label so the
/// result is invariant to panel column order). The restricted model omits
/// the source's lags; gc is the log residual-variance ratio. p_value comes
/// from the analytic F test.
GcResult conditional_gc(const ReturnPanel& panel, const std::string& source,
                        const std::string& target, int p);

/// p-value for the source -> target link at lag p.
///  - FTest: ((rss1-rss2)/p) / (rss2/dof2) against the F(p, dof2) upper tail.
///  - Surrogate: rank of the observed gc among gc values recomputed with the
///    source circularly shifted by n_surrogates distinct offsets >= p;
///    p = (1 + #{gc_s >= gc_obs}) / (n_used + 1). Deterministic per seed.
double gc_significance(const ReturnPanel& panel, const std::string& source,
                       const std::string& target, int p, SigMethod method,
                       int n_surrogates, std::uint64_t seed);

/// Schwarz-criterion lag order for `target` regressed on the full panel:
/// argmin over p in [1, p_max] of N*ln(rss/N) + k*ln(N) with all candidates
/// fit on the common window implied by p_max (N = T - p_max). Ties break
/// toward smaller p.
int select_lag_bic(const ReturnPanel& panel, const std::string& target, int p_max);

/// Why a pair's entry is missing or downgraded.
struct PairNote {
  std::string source;
  std::string target;
  std::string note;
};

/// All ordered-pair conditional GC values with significance. Failed pairs
/// carry NaN and a note instead of aborting the whole matrix.
struct CausalityMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd gc;        // n x n, diagonal 0, entry (i,j) = gc(i -> j)
  Eigen::MatrixXd p_values;  // n x n, diagonal 1
  int lag = 0;
  SigMethod method = SigMethod::FTest;
  std::uint64_t seed = 0;
  std::vector<PairNote> notes;
};

/// Evaluate every ordered pair. RankDeficient conditional designs fall back
/// to pairwise (unconditioned) GC with a note; other per-pair failures are
/// recorded as NaN entries with reasons. Surrogate seeds are derived from
/// (seed, source label, target label), so results are independent of both
/// evaluation order and panel column order.
CausalityMatrix causality_matrix(const ReturnPanel& panel, int p,
                                 SigMethod method, std::uint64_t seed,
                                 int n_surrogates = 100);

}  // namespace tenet
