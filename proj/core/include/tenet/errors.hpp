#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tenet {

/// Base class for all library errors. Subclasses carry the failure category
/// in the type so callers can catch selectively; the message carries detail.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class FileNotFound : public Error {
public:
  explicit FileNotFound(const std::string& path)
      : Error("FileNotFound: " + path), path_(path) {}
  const std::string& path() const { return path_; }

private:
  std::string path_;
};

class ParseError : public Error {
public:
  ParseError(std::size_t row, std::size_t column, const std::string& what)
      : Error("ParseError at row " + std::to_string(row) + ", column " +
              std::to_string(column) + ": " + what),
        row_(row), column_(column) {}
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

private:
  std::size_t row_;
  std::size_t column_;
};

class EmptyPanel : public Error {
public:
  using Error::Error;
};

class DegenerateSeries : public Error {
public:
  explicit DegenerateSeries(const std::string& label)
      : Error("DegenerateSeries: " + label), label_(label) {}
  const std::string& label() const { return label_; }

private:
  std::string label_;
};

class InsufficientSamples : public Error {
public:
  using Error::Error;
};

class UnknownLabel : public Error {
public:
  explicit UnknownLabel(const std::string& label)
      : Error("UnknownLabel: " + label), label_(label) {}
  const std::string& label() const { return label_; }

private:
  std::string label_;
};

class RankDeficient : public Error {
public:
  explicit RankDeficient(std::vector<std::string> columns)
      : Error("RankDeficient: collinear columns {" + join(columns) + "}"),
        columns_(std::move(columns)) {}
  const std::vector<std::string>& columns() const { return columns_; }

private:
  static std::string join(const std::vector<std::string>& cols) {
    std::string out;
    for (const auto& c : cols) {
      if (!out.empty()) out += ", ";
      out += c;
    }
    return out;
  }
  std::vector<std::string> columns_;
};

class NonPositiveVariance : public Error {
public:
  using Error::Error;
};

class StateSpaceTooLarge : public Error {
public:
  using Error::Error;
};

class NonStationary : public Error {
public:
  explicit NonStationary(double spectral_radius)
      : Error("NonStationary: companion spectral radius " +
              std::to_string(spectral_radius)),
        spectral_radius_(spectral_radius) {}
  double spectral_radius() const { return spectral_radius_; }

private:
  double spectral_radius_;
};

class EmptyGraph : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& key, const std::string& what = "")
      : Error("ConfigError(" + key + ")" + (what.empty() ? "" : ": " + what)),
        key_(key) {}
  const std::string& key() const { return key_; }

private:
  std::string key_;
};

}  // namespace tenet
