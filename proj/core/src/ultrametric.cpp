#include "tenet/ultrametric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tenet/errors.hpp"

namespace tenet {

namespace {

struct UnionFind {
  std::vector<Eigen::Index> parent;

  explicit UnionFind(Eigen::Index n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  Eigen::Index find(Eigen::Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      // path compression
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(Eigen::Index a, Eigen::Index b) {
    const Eigen::Index ra = find(a);
    const Eigen::Index rb = find(b);
    if (ra == rb) return false;
    parent[static_cast<std::size_t>(ra)] = rb;
    return true;
  }
};

}  // namespace

double Mst::total_weight() const {
  double sum = 0.0;
  for (const MstEdge& e : edges) sum += e.distance;
  return sum;
}

CorrMatrix correlation_matrix(const ReturnPanel& panel) {
  const Eigen::Index T = panel.rows();
  const Eigen::Index n = panel.cols();
  if (T < 3) throw InsufficientSamples("InsufficientSamples: need T >= 3 for correlations");

  Eigen::MatrixXd centered = panel.values;
  Eigen::VectorXd norms(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    centered.col(c).array() -= centered.col(c).mean();
    norms(c) = centered.col(c).norm();
    if (norms(c) == 0.0) {
      throw DegenerateSeries(panel.labels[static_cast<std::size_t>(c)]);
    }
  }

  CorrMatrix corr;
  corr.labels = panel.labels;
  corr.values.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    corr.values(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double c = centered.col(i).dot(centered.col(j)) / (norms(i) * norms(j));
      const double clamped = std::clamp(c, -1.0, 1.0);
      corr.values(i, j) = clamped;
      corr.values(j, i) = clamped;
    }
  }
  return corr;
}

DistanceMatrix to_distance(const CorrMatrix& corr) {
  DistanceMatrix dist;
  dist.labels = corr.labels;
  dist.values.resizeLike(corr.values);
  for (Eigen::Index i = 0; i < corr.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < corr.values.cols(); ++j) {
      const double radicand = std::max(2.0 * (1.0 - corr.values(i, j)), 0.0);
      dist.values(i, j) = i == j ? 0.0 : std::sqrt(radicand);
    }
  }
  return dist;
}

Mst kruskal_mst(const DistanceMatrix& dist) {
  const Eigen::Index n = dist.values.rows();
  if (n < 2) throw InsufficientSamples("InsufficientSamples: MST needs n >= 2");

  std::vector<MstEdge> edges;
  edges.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      edges.push_back({i, j, dist.values(i, j)});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const MstEdge& a, const MstEdge& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  Mst mst;
  mst.labels = dist.labels;
  UnionFind uf(n);
  for (const MstEdge& e : edges) {
    if (uf.unite(e.i, e.j)) {
      mst.edges.push_back(e);
      if (mst.edges.size() == static_cast<std::size_t>(n - 1)) break;
    }
  }
  return mst;
}

DistanceMatrix subdominant_distance(const Mst& mst) {
  const auto n = static_cast<Eigen::Index>(mst.labels.size());
  std::vector<std::vector<std::pair<Eigen::Index, double>>> adjacency(
      static_cast<std::size_t>(n));
  for (const MstEdge& e : mst.edges) {
    adjacency[static_cast<std::size_t>(e.i)].push_back({e.j, e.distance});
    adjacency[static_cast<std::size_t>(e.j)].push_back({e.i, e.distance});
  }

  DistanceMatrix out;
  out.labels = mst.labels;
  out.values = Eigen::MatrixXd::Zero(n, n);
  // max edge along the unique path, one DFS per source
  std::vector<Eigen::Index> stack;
  std::vector<bool> seen(static_cast<std::size_t>(n));
  for (Eigen::Index s = 0; s < n; ++s) {
    std::fill(seen.begin(), seen.end(), false);
    seen[static_cast<std::size_t>(s)] = true;
    stack.assign(1, s);
    while (!stack.empty()) {
      const Eigen::Index u = stack.back();
      stack.pop_back();
      for (const auto& [v, w] : adjacency[static_cast<std::size_t>(u)]) {
        if (seen[static_cast<std::size_t>(v)]) continue;
        seen[static_cast<std::size_t>(v)] = true;
        out.values(s, v) = std::max(out.values(s, u), w);
        stack.push_back(v);
      }
    }
  }
  return out;
}

MetricReport check_metric_properties(const DistanceMatrix& dist, bool ultrametric) {
  const Eigen::Index n = dist.values.rows();
  MetricReport report;
  report.ultrametric_checked = ultrametric;

  auto record = [&report](double violation, const char* property, Eigen::Index i,
                          Eigen::Index j, Eigen::Index k) {
    if (violation > report.worst_violation) {
      report.worst_violation = violation;
      report.worst_property = property;
      report.worst_i = i;
      report.worst_j = j;
      report.worst_k = k;
    }
  };

  for (Eigen::Index i = 0; i < n; ++i) {
    const double self = std::fabs(dist.values(i, i));
    if (self > 1e-12) {
      report.identity_ok = false;
      record(self, "identity", i, i, -1);
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double asym = std::fabs(dist.values(i, j) - dist.values(j, i));
      if (asym > 1e-12) {
        report.symmetry_ok = false;
        record(asym, "symmetry", i, j, -1);
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double dij = dist.values(i, j);
        const double dik = dist.values(i, k);
        const double dkj = dist.values(k, j);
        const double triangle = dij - (dik + dkj);
        if (triangle > 1e-9) {
          report.triangle_ok = false;
          record(triangle, "triangle", i, j, k);
        }
        if (ultrametric) {
          const double ultra = dij - std::max(dik, dkj);
          if (ultra > 1e-12) {
            report.ultrametric_ok = false;
            record(ultra, "ultrametric", i, j, k);
          }
        }
      }
    }
  }
  return report;
}

DirectedGraph to_graph(const Mst& mst) {
  DirectedGraph graph;
  graph.vertices = mst.labels;
  graph.flags.assign(mst.labels.size(), {});
  const auto n = static_cast<Eigen::Index>(mst.labels.size());
  graph.adjacency = Eigen::MatrixXd::Zero(n, n);
  for (const MstEdge& e : mst.edges) {
    Arc arc;
    arc.from = mst.labels[static_cast<std::size_t>(e.i)];
    arc.to = mst.labels[static_cast<std::size_t>(e.j)];
    arc.weight = e.distance;
    arc.p_value = 0.0;  // distances carry no significance test
    graph.arcs.push_back(std::move(arc));
    graph.adjacency(e.i, e.j) = e.distance;
  }
  std::sort(graph.arcs.begin(), graph.arcs.end(), [](const Arc& a, const Arc& b) {
    if (a.from != b.from) return a.from < b.from;
    return a.to < b.to;
  });
  return graph;
}

}  // namespace tenet
