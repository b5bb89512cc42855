#include "tenet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "tenet/errors.hpp"

namespace tenet {

namespace {

using ordered_json = nlohmann::ordered_json;

void sort_arcs(std::vector<Arc>& arcs) {
  std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
    if (a.from != b.from) return a.from < b.from;
    return a.to < b.to;
  });
}

// ---- Chu-Liu/Edmonds ------------------------------------------------------

struct EArc {
  int from;
  int to;
  double weight;
  int ref;  // index into the arc list one level up
};

// Selected arc indices of a maximum-weight spanning arborescence rooted at
// `root`. Every non-root vertex must have at least one incoming arc (the
// caller guarantees this by bridging from the root). Ties resolve to the
// first arc in list order, which keeps the extraction deterministic.
std::vector<int> max_arborescence(int n, int root, const std::vector<EArc>& arcs) {
  constexpr int kNone = -1;
  std::vector<int> best_in(static_cast<std::size_t>(n), kNone);
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const EArc& arc = arcs[a];
    if (arc.to == root || arc.from == arc.to) continue;
    const int cur = best_in[static_cast<std::size_t>(arc.to)];
    if (cur == kNone || arc.weight > arcs[static_cast<std::size_t>(cur)].weight) {
      best_in[static_cast<std::size_t>(arc.to)] = static_cast<int>(a);
    }
  }
  for (int v = 0; v < n; ++v) {
    if (v != root && best_in[static_cast<std::size_t>(v)] == kNone) {
      throw std::logic_error("max_arborescence: vertex unreachable from root");
    }
  }

  // Look for a cycle among the chosen in-arcs.
  std::vector<int> color(static_cast<std::size_t>(n), 0);  // 0 new, 1 active, 2 done
  std::vector<int> cycle;
  for (int start = 0; start < n && cycle.empty(); ++start) {
    int v = start;
    std::vector<int> trail;
    while (v != root && color[static_cast<std::size_t>(v)] == 0) {
      color[static_cast<std::size_t>(v)] = 1;
      trail.push_back(v);
      v = arcs[static_cast<std::size_t>(best_in[static_cast<std::size_t>(v)])].from;
    }
    if (v != root && color[static_cast<std::size_t>(v)] == 1) {
      // walk the trail back to v to recover the cycle
      auto it = std::find(trail.begin(), trail.end(), v);
      cycle.assign(it, trail.end());
    }
    for (const int u : trail) color[static_cast<std::size_t>(u)] = 2;
  }

  if (cycle.empty()) {
    std::vector<int> chosen;
    chosen.reserve(static_cast<std::size_t>(n) - 1);
    for (int v = 0; v < n; ++v) {
      if (v != root) chosen.push_back(best_in[static_cast<std::size_t>(v)]);
    }
    return chosen;
  }

  // Contract the cycle into one supervertex and recurse.
  std::vector<bool> in_cycle(static_cast<std::size_t>(n), false);
  for (const int v : cycle) in_cycle[static_cast<std::size_t>(v)] = true;

  std::vector<int> remap(static_cast<std::size_t>(n), kNone);
  int next_id = 0;
  for (int v = 0; v < n; ++v) {
    if (!in_cycle[static_cast<std::size_t>(v)]) remap[static_cast<std::size_t>(v)] = next_id++;
  }
  const int super = next_id++;
  for (const int v : cycle) remap[static_cast<std::size_t>(v)] = super;

  std::vector<EArc> contracted;
  contracted.reserve(arcs.size());
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const EArc& arc = arcs[a];
    const int u = remap[static_cast<std::size_t>(arc.from)];
    const int v = remap[static_cast<std::size_t>(arc.to)];
    if (u == v) continue;
    double w = arc.weight;
    if (v == super) {
      // entering the cycle at arc.to displaces the cycle's own in-arc there
      const EArc& displaced =
          arcs[static_cast<std::size_t>(best_in[static_cast<std::size_t>(arc.to)])];
      w -= displaced.weight;
    }
    contracted.push_back({u, v, w, static_cast<int>(a)});
  }

  const std::vector<int> sub =
      max_arborescence(next_id, remap[static_cast<std::size_t>(root)], contracted);

  std::vector<int> chosen;
  chosen.reserve(static_cast<std::size_t>(n) - 1);
  int cycle_entry = kNone;  // original arc chosen to enter the cycle
  for (const int idx : sub) {
    const EArc& carc = contracted[static_cast<std::size_t>(idx)];
    chosen.push_back(carc.ref);
    if (carc.to == super) cycle_entry = carc.ref;
  }
  if (cycle_entry == kNone) {
    throw std::logic_error("max_arborescence: contracted cycle has no entry");
  }
  const int entry_vertex = arcs[static_cast<std::size_t>(cycle_entry)].to;
  for (const int v : cycle) {
    if (v != entry_vertex) chosen.push_back(best_in[static_cast<std::size_t>(v)]);
  }
  return chosen;
}

// ---- rendering helpers ----------------------------------------------------

std::string format_number(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

double penwidth_for(double w, double finite_min, double finite_max) {
  if (std::isinf(w)) return 5.0;
  if (!(finite_max > finite_min)) return 2.75;
  return 0.5 + (w - finite_min) / (finite_max - finite_min) * 4.5;
}

std::string render_dot(const std::vector<std::string>& vertices,
                       const std::vector<std::vector<std::string>>& flags,
                       const std::vector<Arc>& arcs, bool directed,
                       const std::string& name) {
  double finite_min = std::numeric_limits<double>::infinity();
  double finite_max = -std::numeric_limits<double>::infinity();
  for (const Arc& a : arcs) {
    if (std::isfinite(a.weight)) {
      finite_min = std::min(finite_min, a.weight);
      finite_max = std::max(finite_max, a.weight);
    }
  }

  std::string out = directed ? "digraph " : "graph ";
  out += dot_quote(name) + " {\n";
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    out += "  " + dot_quote(vertices[i]);
    if (i < flags.size() && !flags[i].empty()) out += " [color=blue]";
    out += ";\n";
  }
  const char* edge_op = directed ? " -> " : " -- ";
  for (const Arc& a : arcs) {
    out += "  " + dot_quote(a.from) + edge_op + dot_quote(a.to);
    out += " [penwidth=" + format_number(penwidth_for(a.weight, finite_min, finite_max), "%.4g");
    out += ", label=" + format_number(a.weight, "%.6g");
    if (a.synthetic) out += ", style=dashed";
    out += "];\n";
  }
  out += "}\n";
  return out;
}

ordered_json meta_to_json(const GraphMeta& meta) {
  ordered_json m;
  m["lag"] = meta.lag;
  m["alpha"] = meta.alpha;
  m["method"] = meta.method;
  m["seed"] = meta.seed;
  if (!meta.extra_json.empty()) {
    const auto extra = ordered_json::parse(meta.extra_json);
    if (!extra.is_object()) {
      throw std::invalid_argument("export_json: extra_json must be a JSON object");
    }
    for (const auto& [key, value] : extra.items()) m[key] = value;
  }
  return m;
}

ordered_json render_json(const std::vector<std::string>& vertices,
                         const std::vector<std::vector<std::string>>& flags,
                         std::vector<Arc> arcs, const GraphMeta& meta) {
  sort_arcs(arcs);
  ordered_json doc;
  doc["vertices"] = ordered_json::array();
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    ordered_json v;
    v["label"] = vertices[i];
    v["flags"] = i < flags.size() ? flags[i] : std::vector<std::string>{};
    doc["vertices"].push_back(std::move(v));
  }
  doc["arcs"] = ordered_json::array();
  for (const Arc& a : arcs) {
    ordered_json arc;
    arc["from"] = a.from;
    arc["to"] = a.to;
    if (std::isfinite(a.weight)) {
      arc["weight"] = a.weight;
    } else {
      arc["weight"] = nullptr;  // +infinity sentinel
    }
    arc["p_value"] = a.p_value;
    arc["synthetic"] = a.synthetic;
    doc["arcs"].push_back(std::move(arc));
  }
  doc["meta"] = meta_to_json(meta);
  return doc;
}

}  // namespace

Eigen::Index DirectedGraph::vertex_index(const std::string& label) const {
  const auto it = std::find(vertices.begin(), vertices.end(), label);
  if (it == vertices.end()) throw UnknownLabel(label);
  return static_cast<Eigen::Index>(it - vertices.begin());
}

bool DirectedGraph::operator==(const DirectedGraph& other) const {
  return vertices == other.vertices && flags == other.flags && arcs == other.arcs;
}

DirectedGraph threshold_adjacency(const CausalityMatrix& matrix, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw std::invalid_argument("threshold_adjacency: alpha must be in (0, 1]");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(matrix.labels.size());

  DirectedGraph graph;
  graph.vertices = matrix.labels;
  graph.flags.assign(matrix.labels.size(), {});
  graph.adjacency = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double gc = matrix.gc(i, j);
      const double p = matrix.p_values(i, j);
      if (p <= alpha && gc > 0.0) {  // NaN entries fail the comparison
        graph.adjacency(i, j) = gc;
        graph.arcs.push_back({matrix.labels[static_cast<std::size_t>(i)],
                              matrix.labels[static_cast<std::size_t>(j)], gc, p,
                              false});
      }
    }
  }
  sort_arcs(graph.arcs);
  return graph;
}

CausalTree extract_causal_tree(const DirectedGraph& graph) {
  if (graph.vertices.empty()) {
    throw EmptyGraph("EmptyGraph: cannot extract a tree from no vertices");
  }
  // The root is the vertex with the largest total weight flowing out through
  // its spanning arborescence (ties to the smaller label). Trying every
  // candidate root keeps the two-vertex case at the heavier arc and roots a
  // causal chain at its origin rather than at the busiest middle vertex.
  const CausalTree* best = nullptr;
  std::vector<CausalTree> candidates;
  candidates.reserve(graph.vertices.size());
  auto tree_weight = [](const CausalTree& t) {
    double w = 0.0;
    for (const Arc& a : t.edges) w += a.weight;
    return w;
  };
  double best_weight = -std::numeric_limits<double>::infinity();
  for (const auto& root : graph.vertices) {
    candidates.push_back(extract_causal_tree(graph, root));
    const double w = tree_weight(candidates.back());
    if (best == nullptr || w > best_weight ||
        (w == best_weight && root < best->root)) {
      best = &candidates.back();
      best_weight = w;
    }
  }
  return *best;
}

CausalTree extract_causal_tree(const DirectedGraph& graph, const std::string& root) {
  if (graph.vertices.empty()) {
    throw EmptyGraph("EmptyGraph: cannot extract a tree from no vertices");
  }
  const int n = static_cast<int>(graph.vertices.size());
  const int root_idx = static_cast<int>(graph.vertex_index(root));

  // Real arcs first (already sorted), then zero-weight bridges from the root
  // to exactly the vertices it cannot reach; a root-connected graph is left
  // untouched so bridges never distort the optimum.
  std::vector<EArc> arcs;
  std::vector<const Arc*> origin;
  arcs.reserve(graph.arcs.size() + static_cast<std::size_t>(n));
  for (const Arc& a : graph.arcs) {
    arcs.push_back({static_cast<int>(graph.vertex_index(a.from)),
                    static_cast<int>(graph.vertex_index(a.to)), a.weight,
                    static_cast<int>(origin.size())});
    origin.push_back(&a);
  }
  std::vector<bool> reachable(static_cast<std::size_t>(n), false);
  reachable[static_cast<std::size_t>(root_idx)] = true;
  std::vector<int> frontier{root_idx};
  while (!frontier.empty()) {
    const int u = frontier.back();
    frontier.pop_back();
    for (const EArc& a : arcs) {
      if (a.from == u && !reachable[static_cast<std::size_t>(a.to)]) {
        reachable[static_cast<std::size_t>(a.to)] = true;
        frontier.push_back(a.to);
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    if (!reachable[static_cast<std::size_t>(v)]) {
      arcs.push_back({root_idx, v, 0.0, -1});
    }
  }

  const std::vector<int> chosen = max_arborescence(n, root_idx, arcs);

  CausalTree tree;
  tree.root = root;
  tree.vertices = graph.vertices;
  tree.flags = graph.flags;
  for (const int idx : chosen) {
    const EArc& earc = arcs[static_cast<std::size_t>(idx)];
    if (earc.ref >= 0) {
      tree.edges.push_back(*origin[static_cast<std::size_t>(earc.ref)]);
    } else {
      Arc bridge;
      bridge.from = root;
      bridge.to = graph.vertices[static_cast<std::size_t>(earc.to)];
      bridge.weight = 0.0;
      bridge.p_value = 1.0;
      bridge.synthetic = true;
      tree.edges.push_back(bridge);
    }
  }
  sort_arcs(tree.edges);
  return tree;
}

DirectedGraph to_graph(const CausalTree& tree) {
  DirectedGraph graph;
  graph.vertices = tree.vertices;
  graph.flags = tree.flags;
  graph.arcs = tree.edges;
  sort_arcs(graph.arcs);
  const auto n = static_cast<Eigen::Index>(tree.vertices.size());
  graph.adjacency = Eigen::MatrixXd::Zero(n, n);
  for (const Arc& a : graph.arcs) {
    graph.adjacency(graph.vertex_index(a.from), graph.vertex_index(a.to)) = a.weight;
  }
  return graph;
}

std::string export_dot(const DirectedGraph& graph, bool directed,
                       const std::string& name) {
  return render_dot(graph.vertices, graph.flags, graph.arcs, directed, name);
}

std::string export_dot(const CausalTree& tree, const std::string& name) {
  return render_dot(tree.vertices, tree.flags, tree.edges, /*directed=*/true, name);
}

std::string export_json(const DirectedGraph& graph, const GraphMeta& meta) {
  return render_json(graph.vertices, graph.flags, graph.arcs, meta).dump(2) + "\n";
}

std::string export_json(const CausalTree& tree, const GraphMeta& meta) {
  ordered_json doc = render_json(tree.vertices, tree.flags, tree.edges, meta);
  doc["meta"]["root"] = tree.root;
  return doc.dump(2) + "\n";
}

DirectedGraph parse_graph_json(const std::string& text, std::string* meta_json) {
  const auto doc = ordered_json::parse(text);
  DirectedGraph graph;
  for (const auto& v : doc.at("vertices")) {
    graph.vertices.push_back(v.at("label").get<std::string>());
    graph.flags.push_back(v.at("flags").get<std::vector<std::string>>());
  }
  const auto n = static_cast<Eigen::Index>(graph.vertices.size());
  graph.adjacency = Eigen::MatrixXd::Zero(n, n);
  for (const auto& a : doc.at("arcs")) {
    Arc arc;
    arc.from = a.at("from").get<std::string>();
    arc.to = a.at("to").get<std::string>();
    arc.weight = a.at("weight").is_null()
                     ? std::numeric_limits<double>::infinity()
                     : a.at("weight").get<double>();
    arc.p_value = a.at("p_value").get<double>();
    arc.synthetic = a.at("synthetic").get<bool>();
    graph.adjacency(graph.vertex_index(arc.from), graph.vertex_index(arc.to)) =
        arc.weight;
    graph.arcs.push_back(std::move(arc));
  }
  sort_arcs(graph.arcs);
  if (meta_json != nullptr && doc.contains("meta")) {
    *meta_json = doc.at("meta").dump();
  }
  return graph;
}

}  // namespace tenet
