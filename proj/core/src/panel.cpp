#include "tenet/panel.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "tenet/errors.hpp"

namespace tenet {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace (incl. stray '\r' from CRLF files)
    const auto first = field.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
      fields.emplace_back();
    } else {
      const auto last = field.find_last_not_of(" \t\r\n");
      fields.push_back(field.substr(first, last - first + 1));
    }
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool is_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  const int month = (s[5] - '0') * 10 + (s[6] - '0');
  const int day = (s[8] - '0') * 10 + (s[9] - '0');
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

bool parse_price(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

Eigen::Index ReturnPanel::column(const std::string& label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw UnknownLabel(label);
  return static_cast<Eigen::Index>(it - labels.begin());
}

PricePanel load_price_csv(const std::string& path,
                          const std::string& date_column,
                          std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);

  std::string line;
  std::size_t line_no = 0;

  // Header: first non-comment line.
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    header = split_csv_line(line);
    break;
  }
  if (header.empty()) throw EmptyPanel("EmptyPanel: no header row in " + path);

  const auto date_it = std::find(header.begin(), header.end(), date_column);
  if (date_it == header.end()) {
    throw ParseError(line_no, 0, "date column '" + date_column + "' not found in header");
  }
  const std::size_t date_idx = static_cast<std::size_t>(date_it - header.begin());

  std::vector<std::string> labels;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != date_idx) labels.push_back(header[c]);
  }
  if (labels.empty()) throw EmptyPanel("EmptyPanel: no instrument columns in " + path);

  struct Row {
    std::string date;
    std::vector<double> prices;
    std::size_t line_no;
  };
  std::vector<Row> rows;
  std::size_t data_rows = 0;
  std::size_t dropped = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    ++data_rows;
    const auto fields = split_csv_line(line);

    if (fields.size() != header.size() || date_idx >= fields.size()) {
      // whole row unusable; counts toward the drop statistics
      ++dropped;
      continue;
    }
    const std::string& date = fields[date_idx];
    if (!is_iso_date(date)) {
      throw ParseError(line_no, date_idx + 1, "unparseable ISO-8601 date '" + date + "'");
    }

    Row row;
    row.date = date;
    row.line_no = line_no;
    row.prices.reserve(labels.size());
    bool ok = true;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c == date_idx) continue;
      double value = 0.0;
      if (!parse_price(fields[c], value) || value <= 0.0) {
        ok = false;
        break;
      }
      row.prices.push_back(value);
    }
    if (!ok) {
      ++dropped;
      continue;
    }
    rows.push_back(std::move(row));
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].date == rows[i - 1].date) {
      throw ParseError(rows[i].line_no, date_idx + 1,
                       "duplicate date '" + rows[i].date + "'");
    }
  }

  if (rows.size() < 2) {
    throw EmptyPanel("EmptyPanel: fewer than 2 usable rows in " + path);
  }
  if (warnings && data_rows > 0 &&
      static_cast<double>(dropped) > 0.05 * static_cast<double>(data_rows)) {
    warnings->push_back("dropped " + std::to_string(dropped) + " of " +
                        std::to_string(data_rows) + " rows (>5%) while loading " + path);
  }

  PricePanel panel;
  panel.labels = std::move(labels);
  panel.timestamps.reserve(rows.size());
  panel.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(panel.labels.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    panel.timestamps.push_back(rows[r].date);
    for (std::size_t c = 0; c < rows[r].prices.size(); ++c) {
      panel.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r].prices[c];
    }
  }
  return panel;
}

ReturnPanel compute_returns(const PricePanel& panel) {
  const Eigen::Index T = panel.rows();
  if (T < 2) throw EmptyPanel("EmptyPanel: need at least 2 price rows to form returns");

  ReturnPanel out;
  out.labels = panel.labels;
  out.timestamps.assign(panel.timestamps.begin() + 1, panel.timestamps.end());
  out.values.resize(T - 1, panel.cols());
  for (Eigen::Index t = 0; t + 1 < T; ++t) {
    for (Eigen::Index i = 0; i < panel.cols(); ++i) {
      out.values(t, i) = std::log(panel.values(t + 1, i)) - std::log(panel.values(t, i));
    }
  }
  return out;
}

ReturnPanel preprocess(const ReturnPanel& panel, bool demean, bool detrend,
                       bool standardize) {
  const Eigen::Index T = panel.rows();
  if (T == 0) throw EmptyPanel("EmptyPanel: cannot preprocess an empty panel");

  ReturnPanel out = panel;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    auto col = out.values.col(c);

    if (detrend && T >= 2) {
      // least-squares fit of col ~ a + b*t, t = 0..T-1
      const double tbar = 0.5 * static_cast<double>(T - 1);
      double stt = 0.0, sty = 0.0;
      const double ybar = col.mean();
      for (Eigen::Index t = 0; t < T; ++t) {
        const double dt = static_cast<double>(t) - tbar;
        stt += dt * dt;
        sty += dt * (col(t) - ybar);
      }
      const double slope = stt > 0.0 ? sty / stt : 0.0;
      const double intercept = ybar - slope * tbar;
      for (Eigen::Index t = 0; t < T; ++t) {
        col(t) -= intercept + slope * static_cast<double>(t);
      }
    }
    if (demean) {
      col.array() -= col.mean();
    }
    if (standardize) {
      const double mean = col.mean();
      const double denom = static_cast<double>(T > 1 ? T - 1 : 1);
      const double var = (col.array() - mean).square().sum() / denom;
      if (var <= 0.0) throw DegenerateSeries(out.labels[static_cast<std::size_t>(c)]);
      col /= std::sqrt(var);
    }
  }
  out.preprocessing.demeaned = panel.preprocessing.demeaned || demean;
  out.preprocessing.detrended = panel.preprocessing.detrended || detrend;
  out.preprocessing.standardized = panel.preprocessing.standardized || standardize;
  return out;
}

}  // namespace tenet
