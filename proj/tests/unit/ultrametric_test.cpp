#include <doctest.h>

#include <cmath>
#include <set>
#include <utility>

#include "oracles.hpp"
#include "tenet/errors.hpp"
#include "tenet/rng.hpp"
#include "tenet/synthetic.hpp"
#include "tenet/ultrametric.hpp"

using namespace tenet;

namespace {

ReturnPanel random_panel(int T, int n, std::uint64_t seed) {
  return generate_var(VarSpec::zero(n, 1, T, seed));
}

DistanceMatrix matrix3(double d01, double d02, double d12) {
  DistanceMatrix d;
  d.labels = {"A", "B", "C"};
  d.values.resize(3, 3);
  d.values << 0, d01, d02,
              d01, 0, d12,
              d02, d12, 0;
  return d;
}

}  // namespace

TEST_CASE("correlation matrix basics") {
  ReturnPanel panel = random_panel(200, 2, 1);
  panel.labels = {"A", "B"};
  panel.values.col(1) = -panel.values.col(0);

  const CorrMatrix corr = correlation_matrix(panel);
  CHECK(corr.values(0, 0) == 1.0);
  CHECK(corr.values(1, 1) == 1.0);
  CHECK(corr.values(0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(corr.values(0, 1) == corr.values(1, 0));
}

TEST_CASE("independent series decorrelate at scale") {
  const ReturnPanel panel = random_panel(100000, 2, 2);
  const CorrMatrix corr = correlation_matrix(panel);
  CHECK(std::fabs(corr.values(0, 1)) < 0.02);
}

TEST_CASE("correlation matrix guards") {
  ReturnPanel panel = random_panel(50, 2, 3);
  panel.values.col(1).setConstant(0.25);
  CHECK_THROWS_AS(correlation_matrix(panel), DegenerateSeries);

  const ReturnPanel tiny = random_panel(2, 2, 4);
  CHECK_THROWS_AS(correlation_matrix(tiny), InsufficientSamples);
}

TEST_CASE("exact-correlation construction hits the designed values") {
  const ReturnPanel panel = oracles::exact_correlation_panel();
  const CorrMatrix corr = correlation_matrix(panel);
  CHECK(corr.values(0, 1) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(corr.values(0, 2) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(corr.values(1, 2) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("to_distance endpoints are exact") {
  CorrMatrix corr;
  corr.labels = {"A", "B", "C"};
  corr.values.resize(3, 3);
  corr.values << 1.0, 1.0, 0.0,
                 1.0, 1.0, -1.0,
                 0.0, -1.0, 1.0;
  const DistanceMatrix d = to_distance(corr);
  CHECK(d.values(0, 1) == 0.0);
  CHECK(d.values(0, 2) == std::sqrt(2.0));
  CHECK(d.values(1, 2) == 2.0);
  CHECK(d.values(0, 0) == 0.0);
}

TEST_CASE("to_distance clamps floating dust and stays monotone") {
  CorrMatrix corr;
  corr.labels = {"A", "B"};
  corr.values.resize(2, 2);
  corr.values << 1.0, 1.0 + 1e-16,
                 1.0 + 1e-16, 1.0;
  const DistanceMatrix d = to_distance(corr);
  CHECK(d.values(0, 1) == 0.0);

  // monotone decreasing in c
  double prev = 3.0;
  for (double c = -1.0; c <= 1.0; c += 0.125) {
    CorrMatrix m;
    m.labels = {"A", "B"};
    m.values.resize(2, 2);
    m.values << 1.0, c, c, 1.0;
    const double dist = to_distance(m).values(0, 1);
    CHECK(dist < prev);
    prev = dist;
  }
}

TEST_CASE("kruskal on the 3-node hand example") {
  // c01=0.9, c02=0.1, c12=0.2 -> d01=0.4472, d02=1.3416, d12=1.2649
  const ReturnPanel panel = oracles::exact_correlation_panel();
  const DistanceMatrix d = to_distance(correlation_matrix(panel));
  CHECK(d.values(0, 1) == doctest::Approx(0.44721359549995794).epsilon(1e-12));
  CHECK(d.values(0, 2) == doctest::Approx(1.3416407864998738).epsilon(1e-12));
  CHECK(d.values(1, 2) == doctest::Approx(1.2649110640673517).epsilon(1e-12));

  const Mst mst = kruskal_mst(d);
  REQUIRE(mst.edges.size() == 2);
  std::set<std::pair<Eigen::Index, Eigen::Index>> edges;
  for (const auto& e : mst.edges) edges.insert({e.i, e.j});
  CHECK(edges == std::set<std::pair<Eigen::Index, Eigen::Index>>{{0, 1}, {1, 2}});
}

TEST_CASE("kruskal trivial and degenerate cases") {
  SUBCASE("two nodes yield the single edge") {
    DistanceMatrix d;
    d.labels = {"A", "B"};
    d.values.resize(2, 2);
    d.values << 0, 0.7, 0.7, 0;
    const Mst two = kruskal_mst(d);
    REQUIRE(two.edges.size() == 1);
    CHECK(two.edges[0].distance == 0.7);
  }
  SUBCASE("equal weights break ties lexicographically") {
    DistanceMatrix d;
    d.labels = {"A", "B", "C"};
    d.values = Eigen::MatrixXd::Constant(3, 3, 1.0);
    d.values.diagonal().setZero();
    const Mst mst = kruskal_mst(d);
    REQUIRE(mst.edges.size() == 2);
    CHECK(mst.edges[0].i == 0);
    CHECK(mst.edges[0].j == 1);
    CHECK(mst.edges[1].i == 0);
    CHECK(mst.edges[1].j == 2);
  }
  SUBCASE("single node is rejected") {
    DistanceMatrix d;
    d.labels = {"A"};
    d.values = Eigen::MatrixXd::Zero(1, 1);
    CHECK_THROWS_AS(kruskal_mst(d), InsufficientSamples);
  }
}

TEST_CASE("kruskal equals brute-force enumeration on random 6-node matrices") {
  for (int rep = 0; rep < 100; ++rep) {
    const ReturnPanel panel = random_panel(60, 6, 7000 + static_cast<std::uint64_t>(rep));
    const DistanceMatrix d = to_distance(correlation_matrix(panel));
    const Mst mst = kruskal_mst(d);
    std::vector<double> weights;
    for (const auto& e : mst.edges) weights.push_back(e.distance);
    const double kruskal_weight = oracles::sorted_sum(std::move(weights));
    const double brute = oracles::min_spanning_tree_weight_bruteforce(d.values);
    CHECK(kruskal_weight == brute);
  }
}

TEST_CASE("subdominant distance takes the max edge along the path") {
  SUBCASE("path graph") {
    Mst mst;
    mst.labels = {"A", "B", "C"};
    mst.edges = {{0, 1, 1.0}, {1, 2, 2.0}};
    const DistanceMatrix d = subdominant_distance(mst);
    CHECK(d.values(0, 2) == 2.0);
    CHECK(d.values(2, 0) == 2.0);
    CHECK(d.values(0, 1) == 1.0);
    for (Eigen::Index i = 0; i < 3; ++i) CHECK(d.values(i, i) == 0.0);
  }
  SUBCASE("3-node hand example") {
    const ReturnPanel panel = oracles::exact_correlation_panel();
    const Mst mst = kruskal_mst(to_distance(correlation_matrix(panel)));
    const DistanceMatrix d = subdominant_distance(mst);
    CHECK(d.values(0, 2) == doctest::Approx(1.2649110640673517).epsilon(1e-12));
  }
  SUBCASE("tree edges keep their own weight") {
    const ReturnPanel panel = random_panel(80, 5, 31);
    const Mst mst = kruskal_mst(to_distance(correlation_matrix(panel)));
    const DistanceMatrix d = subdominant_distance(mst);
    for (const auto& e : mst.edges) {
      CHECK(d.values(e.i, e.j) == e.distance);
    }
  }
}

TEST_CASE("metric and ultrametric property scans") {
  SUBCASE("pearson distances satisfy the triangle inequality") {
    for (int rep = 0; rep < 20; ++rep) {
      const ReturnPanel panel = random_panel(50, 5, 900 + static_cast<std::uint64_t>(rep));
      const DistanceMatrix d = to_distance(correlation_matrix(panel));
      const MetricReport report = check_metric_properties(d, false);
      CHECK(report.pass());
    }
  }
  SUBCASE("subdominant distances are ultrametric for every triple") {
    for (int rep = 0; rep < 20; ++rep) {
      const ReturnPanel panel = random_panel(50, 6, 950 + static_cast<std::uint64_t>(rep));
      const DistanceMatrix d = to_distance(correlation_matrix(panel));
      const DistanceMatrix ultra = subdominant_distance(kruskal_mst(d));
      const MetricReport report = check_metric_properties(ultra, true);
      CHECK(report.pass());
      CHECK(report.ultrametric_ok);
    }
  }
  SUBCASE("a planted triangle violation is reported with its triple") {
    const MetricReport report = check_metric_properties(matrix3(1.0, 0.1, 0.1), false);
    CHECK_FALSE(report.pass());
    CHECK(report.worst_property == "triangle");
    CHECK(report.worst_violation == doctest::Approx(0.8));
    const std::set<Eigen::Index> triple{report.worst_i, report.worst_j, report.worst_k};
    CHECK(triple == std::set<Eigen::Index>{0, 1, 2});
  }
  SUBCASE("asymmetry is caught") {
    DistanceMatrix d = matrix3(0.5, 0.6, 0.7);
    d.values(0, 1) = 0.51;
    const MetricReport report = check_metric_properties(d, false);
    CHECK_FALSE(report.symmetry_ok);
    CHECK(report.worst_property == "symmetry");
  }
}

TEST_CASE("affine per-column rescaling leaves correlations and the MST unchanged") {
  const ReturnPanel panel = random_panel(300, 4, 33);
  ReturnPanel scaled = panel;
  for (Eigen::Index c = 0; c < 4; ++c) {
    scaled.values.col(c) = panel.values.col(c) * (1.0 + 0.5 * static_cast<double>(c)) +
                           Eigen::VectorXd::Constant(panel.rows(), 0.1 * static_cast<double>(c));
  }
  const CorrMatrix a = correlation_matrix(panel);
  const CorrMatrix b = correlation_matrix(scaled);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-12);

  const Mst ma = kruskal_mst(to_distance(a));
  const Mst mb = kruskal_mst(to_distance(b));
  REQUIRE(ma.edges.size() == mb.edges.size());
  for (std::size_t e = 0; e < ma.edges.size(); ++e) {
    CHECK(ma.edges[e].i == mb.edges[e].i);
    CHECK(ma.edges[e].j == mb.edges[e].j);
  }
}

TEST_CASE("mst renders through the shared writers") {
  const ReturnPanel panel = oracles::exact_correlation_panel();
  const Mst mst = kruskal_mst(to_distance(correlation_matrix(panel)));
  const DirectedGraph g = to_graph(mst);
  CHECK(g.arcs.size() == 2);
  const std::string dot = export_dot(g, /*directed=*/false);
  CHECK(dot.find("--") != std::string::npos);
  CHECK(dot.find("->") == std::string::npos);
  const std::string json = export_json(g, GraphMeta{0, 0.01, "f_test", 42, ""});
  CHECK(parse_graph_json(json) == g);
}
