#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace tenet {

/// Aligned multivariate price history: rows are trading dates (strictly
/// increasing), columns are instruments, all cells present and positive.
struct PricePanel {
  std::vector<std::string> timestamps;  // ISO-8601, strictly increasing
  std::vector<std::string> labels;
  Eigen::MatrixXd values;  // T x n, all > 0

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

/// Which transforms have been applied to a ReturnPanel, cumulatively.
struct Preprocessing {
  bool demeaned = false;
  bool detrended = false;
  bool standardized = false;

  bool operator==(const Preprocessing&) const = default;
};

/// Log-return panel derived from a PricePanel (one fewer row).
struct ReturnPanel {
  std::vector<std::string> timestamps;
  std::vector<std::string> labels;
  Eigen::MatrixXd values;  // (T-1) x n, dimensionless
  Preprocessing preprocessing;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
  /// Column index for a label; throws UnknownLabel.
  Eigen::Index column(const std::string& label) const;
};

/// Load an aligned price panel from CSV (header row `date,<label>,...`,
/// ISO-8601 dates, '.' decimal separator, leading '#' lines ignored).
/// Rows with any missing, unparseable, or non-positive price are dropped
/// whole; duplicate dates are an error. If more than 5% of data rows were
/// dropped a note is appended to `warnings` (when provided).
PricePanel load_price_csv(const std::string& path,
                          const std::string& date_column = "date",
                          std::vector<std::string>* warnings = nullptr);

/// r(t) = ln p(t) - ln p(t-1), per column. Result has T-1 rows and carries
/// the source timestamps from the second row on.
ReturnPanel compute_returns(const PricePanel& panel);

/// Per column, in order: remove least-squares linear trend (detrend),
/// subtract the temporal mean (demean), divide by the sample standard
/// deviation (standardize). Flags accumulate across calls.
ReturnPanel preprocess(const ReturnPanel& panel, bool demean, bool detrend,
                       bool standardize);

}  // namespace tenet
