#include "tenet/synthetic.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "tenet/errors.hpp"
#include "tenet/rng.hpp"

namespace tenet {

namespace {

// Civil-calendar day arithmetic (Euclidean affine transforms; proleptic
// Gregorian). Enough to mint strictly increasing ISO dates.
long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (static_cast<unsigned>(m) + (m > 2 ? -3 : 9)) + 2) / 5 +
                       static_cast<unsigned>(d) - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

void civil_from_days(long z, int& y, int& m, int& d) {
  z += 719468;
  const long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const long yy = static_cast<long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

std::string iso_date(long day_serial) {
  int y = 0, m = 0, d = 0;
  civil_from_days(day_serial, y, m, d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
  return buf;
}

long parse_day_serial(const std::string& iso) {
  int y = 0, m = 0, d = 0;
  if (std::sscanf(iso.c_str(), "%d-%d-%d", &y, &m, &d) != 3) {
    throw std::invalid_argument("synthetic_dates: bad start date '" + iso + "'");
  }
  return days_from_civil(y, m, d);
}

std::string default_label(int i) {
  if (i < 26) return std::string(1, static_cast<char>('A' + i));
  return "S" + std::to_string(i + 1);
}

}  // namespace

std::vector<std::string> synthetic_dates(std::size_t count, const std::string& start) {
  const long first = parse_day_serial(start);
  std::vector<std::string> dates;
  dates.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    dates.push_back(iso_date(first + static_cast<long>(i)));
  }
  return dates;
}

VarSpec VarSpec::zero(int n, int p, int T, std::uint64_t seed) {
  VarSpec spec;
  spec.n = n;
  spec.p = p;
  spec.T = T;
  spec.seed = seed;
  spec.coupling.assign(static_cast<std::size_t>(p), Eigen::MatrixXd::Zero(n, n));
  spec.noise_sd = Eigen::VectorXd::Ones(n);
  return spec;
}

double companion_spectral_radius(const VarSpec& spec) {
  const int n = spec.n;
  const int p = spec.p;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n * p, n * p);
  for (int k = 0; k < p; ++k) {
    companion.block(0, k * n, n, n) = spec.coupling[static_cast<std::size_t>(k)];
  }
  if (p > 1) {
    companion.block(n, 0, n * (p - 1), n * (p - 1)) =
        Eigen::MatrixXd::Identity(n * (p - 1), n * (p - 1));
  }
  return companion.eigenvalues().cwiseAbs().maxCoeff();
}

ReturnPanel generate_var(const VarSpec& spec) {
  if (spec.n < 1 || spec.p < 1 || spec.T < 1) {
    throw std::invalid_argument("generate_var: n, p, T must be positive");
  }
  if (spec.coupling.size() != static_cast<std::size_t>(spec.p)) {
    throw std::invalid_argument("generate_var: need one coupling matrix per lag");
  }
  for (const auto& c : spec.coupling) {
    if (c.rows() != spec.n || c.cols() != spec.n) {
      throw std::invalid_argument("generate_var: coupling matrices must be n x n");
    }
  }
  if (spec.noise_sd.size() != spec.n || (spec.noise_sd.array() <= 0.0).any()) {
    throw std::invalid_argument("generate_var: noise_sd must be positive per series");
  }
  const double radius = companion_spectral_radius(spec);
  if (!(radius < 1.0)) throw NonStationary(radius);

  const int burn_in = 10 * spec.p;
  const int total = spec.T + burn_in;
  Xoshiro256pp rng(spec.seed);

  Eigen::MatrixXd path = Eigen::MatrixXd::Zero(total + spec.p, spec.n);
  for (int t = spec.p; t < total + spec.p; ++t) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(spec.n);
    for (int k = 0; k < spec.p; ++k) {
      x += spec.coupling[static_cast<std::size_t>(k)] *
           path.row(t - k - 1).transpose();
    }
    for (int i = 0; i < spec.n; ++i) {
      x(i) += spec.noise_sd(i) * rng.gaussian();
    }
    path.row(t) = x.transpose();
  }

  ReturnPanel panel;
  panel.labels.reserve(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) panel.labels.push_back(default_label(i));
  panel.values = path.bottomRows(spec.T);
  panel.timestamps = synthetic_dates(static_cast<std::size_t>(spec.T));
  return panel;
}

std::pair<SymbolSeries, SymbolSeries> generate_copy_chain(int T, std::uint64_t seed) {
  if (T < 2) throw std::invalid_argument("generate_copy_chain: T must be >= 2");
  Xoshiro256pp rng(seed);
  SymbolSeries x, y;
  x.n_bins = 2;
  y.n_bins = 2;
  x.symbols.resize(static_cast<std::size_t>(T));
  y.symbols.resize(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    x.symbols[static_cast<std::size_t>(t)] = static_cast<int>(rng.next() >> 63);
  }
  y.symbols[0] = static_cast<int>(rng.next() >> 63);
  for (int t = 1; t < T; ++t) {
    y.symbols[static_cast<std::size_t>(t)] = x.symbols[static_cast<std::size_t>(t - 1)];
  }
  return {std::move(x), std::move(y)};
}

PricePanel price_panel_from_returns(const ReturnPanel& panel, double initial_price) {
  if (!(initial_price > 0.0)) {
    throw std::invalid_argument("price_panel_from_returns: initial price must be > 0");
  }
  const Eigen::Index T = panel.rows();
  const Eigen::Index n = panel.cols() > 0 ? panel.cols() : 1;

  PricePanel out;
  out.labels = panel.labels.empty() ? std::vector<std::string>{default_label(0)}
                                    : panel.labels;
  out.values.resize(T + 1, static_cast<Eigen::Index>(out.labels.size()));
  out.values.row(0).setConstant(initial_price);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index i = 0; i < n && i < out.values.cols(); ++i) {
      out.values(t + 1, i) = out.values(t, i) * std::exp(panel.values(t, i));
    }
  }

  // one synthetic timestamp ahead of the return dates
  if (panel.timestamps.empty()) {
    out.timestamps = synthetic_dates(static_cast<std::size_t>(T) + 1);
  } else {
    const long first = parse_day_serial(panel.timestamps.front());
    out.timestamps.reserve(static_cast<std::size_t>(T) + 1);
    out.timestamps.push_back(iso_date(first - 1));
    out.timestamps.insert(out.timestamps.end(), panel.timestamps.begin(),
                          panel.timestamps.end());
  }
  return out;
}

}  // namespace tenet
