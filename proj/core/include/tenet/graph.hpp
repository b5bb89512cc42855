#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tenet/granger.hpp"

namespace tenet {

struct Arc {
  std::string from;
  std::string to;
  double weight = 0.0;
  double p_value = 1.0;
  bool synthetic = false;  // zero-weight bridge added during tree extraction

  bool operator==(const Arc&) const = default;
};

/// Pruned information-flow graph. Arc list and adjacency matrix describe the
/// same arcs; isolated vertices stay in the vertex set.
struct DirectedGraph {
  std::vector<std::string> vertices;
  std::vector<std::vector<std::string>> flags;  // caller metadata, per vertex
  std::vector<Arc> arcs;                        // sorted by (from, to)
  Eigen::MatrixXd adjacency;                    // weight, 0 = absent

  Eigen::Index vertex_index(const std::string& label) const;
  bool operator==(const DirectedGraph& other) const;
};

/// Spanning arborescence: every non-root vertex has exactly one incoming
/// edge; synthetic edges mark bridges that were not present in the input.
struct CausalTree {
  std::string root;
  std::vector<std::string> vertices;
  std::vector<std::vector<std::string>> flags;
  std::vector<Arc> edges;  // |vertices| - 1, sorted by (from, to)
};

/// Keep arc (i -> j) with weight gc(i -> j) when its p-value is <= alpha and
/// the gc is positive; everything else becomes 0 in the adjacency. Vertices
/// are always retained. alpha must lie in (0, 1]; 1 disables pruning.
DirectedGraph threshold_adjacency(const CausalityMatrix& matrix, double alpha);

/// Maximum-weight spanning arborescence (Chu-Liu/Edmonds) of the pruned
/// graph. The root is the vertex with the largest total weight flowing out
/// through its arborescence, ties broken by label order. Vertices the root
/// cannot reach are bridged with zero-weight synthetic arcs from the root.
CausalTree extract_causal_tree(const DirectedGraph& graph);

CausalTree extract_causal_tree(const DirectedGraph& graph,
                               const std::string& root);

DirectedGraph to_graph(const CausalTree& tree);

/// Extra metadata carried into exported artifacts.
struct GraphMeta {
  int lag = 0;
  double alpha = 0.0;
  std::string method;
  std::uint64_t seed = 0;
  /// Optional raw JSON object merged into the meta block (e.g. the full run
  /// configuration under "config"). Must be a valid JSON object or empty.
  std::string extra_json;
};

/// Graphviz dot text. Directed graphs use `->`, undirected `--`. Penwidth
/// is linearly scaled to [0.5, 5] over the finite weight range (midpoint
/// 2.75 when degenerate); flagged vertices are colored blue; synthetic arcs
/// render dashed.
std::string export_dot(const DirectedGraph& graph, bool directed = true,
                       const std::string& name = "tenet");
std::string export_dot(const CausalTree& tree, const std::string& name = "tenet");

/// JSON schema:
///   {"vertices":[{"label","flags"}],
///    "arcs":[{"from","to","weight","p_value","synthetic"}],
///    "meta":{"lag","alpha","method","seed", ...}}
/// Arcs are sorted by (from, to); numbers carry full round-trip precision;
/// infinite weights serialize as null and parse back to +infinity.
std::string export_json(const DirectedGraph& graph, const GraphMeta& meta);
std::string export_json(const CausalTree& tree, const GraphMeta& meta);

/// Inverse of export_json for the graph data content (meta is returned as a
/// raw JSON string when requested).
DirectedGraph parse_graph_json(const std::string& text,
                               std::string* meta_json = nullptr);

}  // namespace tenet
