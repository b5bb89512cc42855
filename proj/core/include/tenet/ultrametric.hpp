#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tenet/graph.hpp"
#include "tenet/panel.hpp"

namespace tenet {

/// Pearson correlation matrix: symmetric, unit diagonal, entries in [-1, 1].
struct CorrMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd values;
};

/// Metric-space distances d = sqrt(2 (1 - c)), entries in [0, 2].
struct DistanceMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd values;
};

struct MstEdge {
  Eigen::Index i = 0;
  Eigen::Index j = 0;  // i < j
  double distance = 0.0;
};

/// Kruskal minimum spanning tree over the distance matrix.
struct Mst {
  std::vector<std::string> labels;
  std::vector<MstEdge> edges;  // n - 1

  double total_weight() const;
};

CorrMatrix correlation_matrix(const ReturnPanel& panel);

DistanceMatrix to_distance(const CorrMatrix& corr);

/// Globally minimum spanning tree by sort + union-find; equal-weight ties
/// break by lexicographic (i, j) so the edge set is deterministic.
Mst kruskal_mst(const DistanceMatrix& dist);

/// Subdominant ultrametric distance: maximum edge weight along the unique
/// tree path between each pair. Satisfies d(i,j) <= max(d(i,k), d(k,j)) for
/// every triple by construction.
DistanceMatrix subdominant_distance(const Mst& mst);

/// Outcome of a metric / ultrametric property scan. A failed check is a
/// report, not an error.
struct MetricReport {
  bool identity_ok = true;      // d_ii = 0
  bool symmetry_ok = true;      // d_ij = d_ji
  bool triangle_ok = true;      // d_ij <= d_ik + d_kj
  bool ultrametric_checked = false;
  bool ultrametric_ok = true;   // d_ij <= max(d_ik, d_kj)
  Eigen::Index worst_i = -1, worst_j = -1, worst_k = -1;
  double worst_violation = 0.0;
  std::string worst_property;

  bool pass() const {
    return identity_ok && symmetry_ok && triangle_ok &&
           (!ultrametric_checked || ultrametric_ok);
  }
};

/// Scan all triples; tolerance 1e-9 for the triangle inequality and 1e-12
/// for identity/symmetry/ultrametricity.
MetricReport check_metric_properties(const DistanceMatrix& dist, bool ultrametric);

/// Render the MST through the shared graph writers (undirected edges, one
/// arc per pair with i < j).
DirectedGraph to_graph(const Mst& mst);

}  // namespace tenet
