#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "tenet/errors.hpp"
#include "tenet/infotheory.hpp"
#include "tenet/rng.hpp"
#include "tenet/synthetic.hpp"

using namespace tenet;

namespace {

constexpr double kLn2 = 0.69314718055994531;

JointDistribution table_from_counts(std::vector<std::uint64_t> counts,
                                    std::vector<int> dims) {
  JointDistribution dist;
  dist.counts = std::move(counts);
  dist.dims = std::move(dims);
  dist.total = 0;
  for (const auto c : dist.counts) dist.total += c;
  return dist;
}

SymbolSeries random_symbols(int T, int bins, Xoshiro256pp& rng) {
  SymbolSeries s;
  s.n_bins = bins;
  s.symbols.reserve(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    s.symbols.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(bins))));
  }
  return s;
}

}  // namespace

TEST_CASE("discretize schemes") {
  SUBCASE("equiquantile median split") {
    const std::vector<double> v{1, 2, 3, 4};
    const SymbolSeries s = discretize(v, 2, BinScheme::Equiquantile);
    CHECK(s.symbols == std::vector<int>{0, 0, 1, 1});
  }
  SUBCASE("equiwidth endpoints") {
    const std::vector<double> v{0, 10};
    const SymbolSeries s = discretize(v, 2, BinScheme::Equiwidth);
    CHECK(s.symbols == std::vector<int>{0, 1});
  }
  SUBCASE("constant series is degenerate") {
    const std::vector<double> v{5, 5, 5};
    CHECK_THROWS_AS(discretize(v, 2, BinScheme::Equiquantile), DegenerateSeries);
    CHECK_THROWS_AS(discretize(v, 2, BinScheme::Equiwidth), DegenerateSeries);
  }
  SUBCASE("series shorter than bin count") {
    const std::vector<double> v{1, 2};
    CHECK_THROWS_AS(discretize(v, 3, BinScheme::Equiquantile), InsufficientSamples);
  }
  SUBCASE("boundary ties go to the lower bin") {
    const std::vector<double> v{1, 1, 1, 2};
    const SymbolSeries s = discretize(v, 2, BinScheme::Equiquantile);
    CHECK(s.symbols == std::vector<int>{0, 0, 0, 1});
  }
  SUBCASE("every symbol lies in range for random input") {
    Xoshiro256pp rng(3);
    std::vector<double> v(257);
    for (auto& x : v) x = rng.gaussian();
    for (const auto scheme : {BinScheme::Equiwidth, BinScheme::Equiquantile}) {
      const SymbolSeries s = discretize(v, 5, scheme);
      for (const int sym : s.symbols) {
        CHECK(sym >= 0);
        CHECK(sym < 5);
      }
    }
  }
}

TEST_CASE("entropy closed forms") {
  CHECK(entropy(table_from_counts({1, 1, 1, 1}, {4})) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(entropy(table_from_counts({7, 0, 0, 0}, {4})) == 0.0);
  // pmf (1/2, 1/4, 1/4): hand-summed -sum p ln p = 1.5 ln 2
  const double h = entropy(table_from_counts({2, 1, 1}, {3}));
  CHECK(h == doctest::Approx(1.5 * kLn2).epsilon(1e-12));
  double by_hand = -(0.5 * std::log(0.5) + 0.25 * std::log(0.25) + 0.25 * std::log(0.25));
  CHECK(h == doctest::Approx(by_hand).epsilon(1e-15));
}

TEST_CASE("joint entropy closed forms and bounds") {
  SUBCASE("independent uniform binary pair") {
    CHECK(joint_entropy(table_from_counts({1, 1, 1, 1}, {2, 2})) ==
          doctest::Approx(std::log(4.0)).epsilon(1e-12));
  }
  SUBCASE("perfect copy") {
    CHECK(joint_entropy(table_from_counts({1, 0, 0, 1}, {2, 2})) ==
          doctest::Approx(kLn2).epsilon(1e-12));
  }
  SUBCASE("hand-summed joint pmf [[1/2,0],[1/4,1/4]]") {
    CHECK(joint_entropy(table_from_counts({2, 0, 1, 1}, {2, 2})) ==
          doctest::Approx(1.5 * kLn2).epsilon(1e-12));
  }
  SUBCASE("bounds on random tables") {
    Xoshiro256pp rng(17);
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<std::uint64_t> counts(9);
      std::size_t occupied = 0;
      for (auto& c : counts) {
        c = rng.below(20);
        if (c > 0) ++occupied;
      }
      if (counts[0] == 0) ++occupied;
      counts[0] += 1;  // keep total >= 1
      const auto dist = table_from_counts(counts, {3, 3});
      const double hxy = joint_entropy(dist);
      const double hx = entropy(dist.marginal(std::array{0}));
      const double hy = entropy(dist.marginal(std::array{1}));
      CHECK(hxy >= std::max(hx, hy) - 1e-12);
      CHECK(hxy <= hx + hy + 1e-12);
      CHECK(hxy >= 0.0);
      CHECK(hxy <= std::log(static_cast<double>(occupied)) + 1e-12);
    }
  }
}

TEST_CASE("conditional entropy matches the direct double sum") {
  SUBCASE("independence and determinism") {
    const auto indep = table_from_counts({1, 1, 1, 1}, {2, 2});
    CHECK(conditional_entropy(indep, std::array{0}, std::array{1}) ==
          doctest::Approx(kLn2).epsilon(1e-12));
    const auto copy = table_from_counts({1, 0, 0, 1}, {2, 2});
    CHECK(conditional_entropy(copy, std::array{0}, std::array{1}) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("hand value for [[1/2,0],[1/4,1/4]]") {
    // rows (axis 0) have the uniform marginal, H = ln 2; conditioning on
    // them leaves H(joint) - ln 2 = ln(2)/2
    const auto dist = table_from_counts({2, 0, 1, 1}, {2, 2});
    CHECK(conditional_entropy(dist, std::array{1}, std::array{0}) ==
          doctest::Approx(0.5 * kLn2).epsilon(1e-12));
    // the other direction conditions on the (3/4, 1/4) marginal
    const double expected = 1.5 * kLn2 -
                            (std::log(4.0) - 0.75 * std::log(3.0));
    CHECK(conditional_entropy(dist, std::array{0}, std::array{1}) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("chain rule and the elementwise definition on random tables") {
    Xoshiro256pp rng(23);
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<std::uint64_t> counts(12);
      for (auto& c : counts) c = rng.below(30);
      counts[3] += 1;
      const auto dist = table_from_counts(counts, {4, 3});
      const double chain = conditional_entropy(dist, std::array{0}, std::array{1});
      CHECK(joint_entropy(dist) ==
            doctest::Approx(entropy(dist.marginal(std::array{1})) + chain)
                .epsilon(1e-12));

      // direct -sum p(x,y) ln p(x|y)
      const auto py = dist.marginal(std::array{1});
      double direct = 0.0;
      for (int x = 0; x < 4; ++x) {
        for (int y = 0; y < 3; ++y) {
          const auto joint = dist.counts[static_cast<std::size_t>(x * 3 + y)];
          if (joint == 0) continue;
          const double pxy = static_cast<double>(joint) / static_cast<double>(dist.total);
          const double cond = static_cast<double>(joint) /
                              static_cast<double>(py.counts[static_cast<std::size_t>(y)]);
          direct -= pxy * std::log(cond);
        }
      }
      CHECK(chain == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("entropy is invariant under symbol relabeling") {
  Xoshiro256pp rng(31);
  auto s = random_symbols(400, 4, rng);
  const auto base = JointDistribution::from_series({&s});
  SymbolSeries relabeled = s;
  for (auto& sym : relabeled.symbols) sym = (sym + 3) % 4;  // permutation of bins
  const auto perm = JointDistribution::from_series({&relabeled});
  CHECK(entropy(base) == doctest::Approx(entropy(perm)).epsilon(1e-15));
}

TEST_CASE("copy chain transfer entropy hits ln 2") {
  const auto [x, y] = generate_copy_chain(100000, 1234);
  const TeResult forward = discrete_transfer_entropy(x, y, {}, 1);
  const TeResult backward = discrete_transfer_entropy(y, x, {}, 1);
  CHECK(std::fabs(forward.value - kLn2) < 0.02);
  CHECK(backward.value <= 0.01);
  CHECK(backward.value >= -1e-12);
  CHECK_FALSE(forward.small_sample);
}

TEST_CASE("independent series carry no transfer entropy") {
  Xoshiro256pp rng(55);
  const auto x = random_symbols(100000, 2, rng);
  const auto y = random_symbols(100000, 2, rng);
  const TeResult te = discrete_transfer_entropy(x, y, {}, 1);
  CHECK(te.value <= 0.005);
  CHECK(te.value >= -1e-12);
}

TEST_CASE("self transfer entropy vanishes") {
  Xoshiro256pp rng(77);
  const auto x = random_symbols(5000, 3, rng);
  const TeResult te = discrete_transfer_entropy(x, x, {}, 1);
  CHECK(std::fabs(te.value) <= 1e-12);
}

TEST_CASE("transfer entropy is nonnegative across random panels") {
  Xoshiro256pp rng(91);
  for (int rep = 0; rep < 100; ++rep) {
    const int bins = 2 + static_cast<int>(rng.below(3));
    const int lag = 1 + static_cast<int>(rng.below(2));
    const auto x = random_symbols(300, bins, rng);
    const auto y = random_symbols(300, bins, rng);
    const auto z = random_symbols(300, 2, rng);
    const std::vector<const SymbolSeries*> conditioning{&z};
    // the ratio-form cross-check runs inside the call; disagreement throws
    const TeResult te = discrete_transfer_entropy(x, y, conditioning, lag);
    CHECK(te.value >= -1e-12);
  }
}

TEST_CASE("transfer entropy with conditioning removes a known driver") {
  // y copies x with lag 1; conditioning on x's own series as z kills the flow
  const auto [x, y] = generate_copy_chain(20000, 42);
  const std::vector<const SymbolSeries*> conditioning{&x};
  const TeResult te = discrete_transfer_entropy(x, y, conditioning, 1);
  CHECK(std::fabs(te.value) <= 1e-12);  // duplicated axes add nothing
}

TEST_CASE("state-space guard") {
  Xoshiro256pp rng(13);
  const auto x = random_symbols(200, 10, rng);
  const auto y = random_symbols(200, 10, rng);
  CHECK_THROWS_AS(discrete_transfer_entropy(x, y, {}, 2, /*cell_cap=*/1000),
                  StateSpaceTooLarge);
}

TEST_CASE("small-sample warning") {
  Xoshiro256pp rng(14);
  const auto x = random_symbols(40, 3, rng);
  const auto y = random_symbols(40, 3, rng);
  const TeResult te = discrete_transfer_entropy(x, y, {}, 1);
  CHECK(te.small_sample);  // 39 < 10 * 27 cells
}

TEST_CASE("gaussian conditional entropy") {
  constexpr double two_pi_e = 2.0 * 3.14159265358979323846 * 2.718281828459045235;
  CHECK(gaussian_conditional_entropy(1.0 / two_pi_e) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(gaussian_conditional_entropy(std::exp(2.0) / two_pi_e) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(gaussian_conditional_entropy(0.0), NonPositiveVariance);
  CHECK_THROWS_AS(gaussian_conditional_entropy(-1.0), NonPositiveVariance);

  // quadrature oracle for the differential entropy integral
  for (const double variance : {0.25, 1.0, 7.5}) {
    CHECK(gaussian_conditional_entropy(variance) ==
          doctest::Approx(oracles::gaussian_entropy_quadrature(variance)).epsilon(1e-9));
  }
  CHECK(gaussian_conditional_entropy(1.0) ==
        doctest::Approx(1.4189385332046727).epsilon(1e-14));
}
