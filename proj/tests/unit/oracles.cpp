#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tenet/synthetic.hpp"

namespace oracles {

NormalEqFit normal_equations_ols(const Eigen::MatrixXd& predictors,
                                 const Eigen::VectorXd& target) {
  const Eigen::MatrixXd gram = predictors.transpose() * predictors;
  const Eigen::VectorXd moment = predictors.transpose() * target;
  NormalEqFit fit;
  fit.beta = gram.ldlt().solve(moment);
  fit.rss = (target - predictors * fit.beta).squaredNorm();
  fit.residual_variance = fit.rss / static_cast<double>(predictors.rows());
  return fit;
}

double gaussian_entropy_quadrature(double variance) {
  const double sd = std::sqrt(variance);
  const double lo = -40.0 * sd;
  const double hi = 40.0 * sd;
  const int n = 400000;  // even
  const double h = (hi - lo) / n;
  auto integrand = [variance](double x) {
    const double p = std::exp(-x * x / (2.0 * variance)) /
                     std::sqrt(2.0 * 3.14159265358979323846 * variance);
    return p > 0.0 ? -p * std::log(p) : 0.0;
  };
  double sum = integrand(lo) + integrand(hi);
  for (int i = 1; i < n; ++i) {
    sum += integrand(lo + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
  }
  return sum * h / 3.0;
}

double sorted_sum(std::vector<double> weights) {
  std::sort(weights.begin(), weights.end());
  double total = 0.0;
  for (const double w : weights) total += w;
  return total;
}

double min_spanning_tree_weight_bruteforce(const Eigen::MatrixXd& distances) {
  const int n = static_cast<int>(distances.rows());
  if (n == 2) return distances(0, 1);

  // decode every Prufer sequence of length n-2
  std::vector<int> seq(static_cast<std::size_t>(n - 2), 0);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    std::vector<int> degree(static_cast<std::size_t>(n), 1);
    for (const int v : seq) ++degree[static_cast<std::size_t>(v)];
    std::vector<double> weights;
    weights.reserve(static_cast<std::size_t>(n - 1));
    std::vector<int> deg = degree;
    for (const int v : seq) {
      for (int leaf = 0; leaf < n; ++leaf) {
        if (deg[static_cast<std::size_t>(leaf)] == 1) {
          weights.push_back(distances(leaf, v));
          --deg[static_cast<std::size_t>(leaf)];
          --deg[static_cast<std::size_t>(v)];
          break;
        }
      }
    }
    int u = -1;
    for (int v = 0; v < n; ++v) {
      if (deg[static_cast<std::size_t>(v)] == 1) {
        if (u < 0) {
          u = v;
        } else {
          weights.push_back(distances(u, v));
        }
      }
    }
    best = std::min(best, sorted_sum(std::move(weights)));

    // next sequence
    int pos = n - 3;
    while (pos >= 0 && seq[static_cast<std::size_t>(pos)] == n - 1) {
      seq[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++seq[static_cast<std::size_t>(pos)];
  }
  return best;
}

namespace {

bool assignment_is_arborescence(int n, int root, const std::vector<int>& parent) {
  // every non-root must reach the root through parent pointers, cycle-free
  for (int v = 0; v < n; ++v) {
    if (v == root) continue;
    int steps = 0;
    int u = v;
    while (u != root && steps <= n) {
      u = parent[static_cast<std::size_t>(u)];
      ++steps;
    }
    if (u != root) return false;
  }
  return true;
}

void enumerate_assignments(int n, int root,
                           const std::vector<std::vector<std::pair<int, double>>>& in_arcs,
                           int vertex, std::vector<int>& parent,
                           std::vector<double>& weights, double& best) {
  if (vertex == n) {
    if (assignment_is_arborescence(n, root, parent)) {
      best = std::max(best, sorted_sum(weights));
    }
    return;
  }
  if (vertex == root) {
    enumerate_assignments(n, root, in_arcs, vertex + 1, parent, weights, best);
    return;
  }
  for (const auto& [from, w] : in_arcs[static_cast<std::size_t>(vertex)]) {
    parent[static_cast<std::size_t>(vertex)] = from;
    weights.push_back(w);
    enumerate_assignments(n, root, in_arcs, vertex + 1, parent, weights, best);
    weights.pop_back();
  }
}

}  // namespace

double max_arborescence_weight_bruteforce(
    int n, int root, const std::vector<std::tuple<int, int, double>>& arcs) {
  std::vector<std::vector<std::pair<int, double>>> in_arcs(
      static_cast<std::size_t>(n));
  for (const auto& [from, to, w] : arcs) {
    if (from != to && to != root) {
      in_arcs[static_cast<std::size_t>(to)].push_back({from, w});
    }
  }
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<double> weights;
  enumerate_assignments(n, root, in_arcs, 0, parent, weights, best);
  return best;
}

double max_causal_tree_weight_bruteforce(const tenet::DirectedGraph& graph) {
  const int n = static_cast<int>(graph.vertices.size());
  std::vector<std::tuple<int, int, double>> arcs;
  for (const auto& arc : graph.arcs) {
    arcs.push_back({static_cast<int>(graph.vertex_index(arc.from)),
                    static_cast<int>(graph.vertex_index(arc.to)), arc.weight});
  }

  double best = -std::numeric_limits<double>::infinity();
  for (int root = 0; root < n; ++root) {
    // bridge exactly the vertices this root cannot reach
    std::vector<bool> reachable(static_cast<std::size_t>(n), false);
    reachable[static_cast<std::size_t>(root)] = true;
    std::vector<int> frontier{root};
    while (!frontier.empty()) {
      const int u = frontier.back();
      frontier.pop_back();
      for (const auto& [from, to, w] : arcs) {
        if (from == u && !reachable[static_cast<std::size_t>(to)]) {
          reachable[static_cast<std::size_t>(to)] = true;
          frontier.push_back(to);
        }
      }
    }
    auto augmented = arcs;
    for (int v = 0; v < n; ++v) {
      if (!reachable[static_cast<std::size_t>(v)]) augmented.push_back({root, v, 0.0});
    }
    best = std::max(best, max_arborescence_weight_bruteforce(n, root, augmented));
  }
  return best;
}

double ks_uniform_statistic(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double u = samples[i];
    const double hi = (static_cast<double>(i) + 1.0) / n - u;
    const double lo = u - static_cast<double>(i) / n;
    d = std::max({d, hi, lo});
  }
  return d;
}

tenet::ReturnPanel exact_correlation_panel() {
  constexpr int T = 12;
  // raw vectors, then project out span{1, t} and orthonormalize
  Eigen::MatrixXd raw(T, 3);
  for (int t = 0; t < T; ++t) {
    raw(t, 0) = std::sin(1.0 + t);
    raw(t, 1) = std::cos(0.5 + 2.0 * t);
    raw(t, 2) = std::sin(0.3 + 3.0 * t) * std::cos(0.7 + t);
  }
  Eigen::MatrixXd basis(T, 5);
  basis.col(0).setOnes();
  for (int t = 0; t < T; ++t) basis(t, 1) = t;
  basis.col(2) = raw.col(0);
  basis.col(3) = raw.col(1);
  basis.col(4) = raw.col(2);
  // Gram-Schmidt; columns 2..4 become the zero-mean, trend-free basis
  for (int c = 0; c < 5; ++c) {
    for (int prev = 0; prev < c; ++prev) {
      basis.col(c) -= basis.col(prev).dot(basis.col(c)) * basis.col(prev);
    }
    basis.col(c).normalize();
  }
  const Eigen::VectorXd e1 = basis.col(2);
  const Eigen::VectorXd e2 = basis.col(3);
  const Eigen::VectorXd e3 = basis.col(4);

  const double c12 = 0.9, c13 = 0.1, c23 = 0.2;
  const double b = (c23 - c12 * c13) / std::sqrt(1.0 - c12 * c12);
  const double c = std::sqrt(1.0 - c13 * c13 - b * b);

  tenet::ReturnPanel panel;
  panel.labels = {"A", "B", "C"};
  panel.values.resize(T, 3);
  panel.values.col(0) = e1;
  panel.values.col(1) = c12 * e1 + std::sqrt(1.0 - c12 * c12) * e2;
  panel.values.col(2) = c13 * e1 + b * e2 + c * e3;
  panel.timestamps = tenet::synthetic_dates(T);
  return panel;
}

}  // namespace oracles
