// tenet command line: ingest -> returns -> causality -> graph/tree -> MST.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "runconfig.hpp"
#include "tenet/errors.hpp"
#include "tenet/graph.hpp"
#include "tenet/granger.hpp"
#include "tenet/infotheory.hpp"
#include "tenet/panel.hpp"
#include "tenet/synthetic.hpp"
#include "tenet/ultrametric.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace tenet;
using cli::RunConfig;

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

fs::path artifact_path(const RunConfig& config, const std::string& name) {
  fs::create_directories(config.output_dir);
  return fs::path(config.output_dir) / name;
}

// dot artifacts carry the run configuration as leading '//' comments
std::string dot_with_meta(const RunConfig& config, const std::string& dot) {
  std::string out;
  std::stringstream block(cli::config_to_comment_block(config));
  std::string line;
  while (std::getline(block, line)) {
    out += "//" + line.substr(1) + "\n";
  }
  return out + dot;
}

std::vector<std::string> read_flagged(const RunConfig& config) {
  std::vector<std::string> flagged;
  if (config.flagged.empty()) return flagged;
  std::ifstream in(config.flagged);
  if (!in) throw FileNotFound(config.flagged);
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r\n");
    flagged.push_back(line.substr(first, last - first + 1));
  }
  return flagged;
}

void apply_flags(DirectedGraph& graph, const std::vector<std::string>& flagged) {
  for (const auto& label : flagged) {
    const auto it = std::find(graph.vertices.begin(), graph.vertices.end(), label);
    if (it == graph.vertices.end()) continue;
    graph.flags[static_cast<std::size_t>(it - graph.vertices.begin())].push_back("flagged");
  }
}

// ---- pipeline stages -------------------------------------------------------

ReturnPanel load_returns(const RunConfig& config, bool preprocessed) {
  if (config.input.empty()) throw ConfigError("input", "no input file given");
  std::vector<std::string> warnings;
  const PricePanel prices = load_price_csv(config.input, config.date_column, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  ReturnPanel returns = compute_returns(prices);
  if (preprocessed) {
    returns = preprocess(returns, /*demean=*/true, /*detrend=*/true,
                         /*standardize=*/false);
  }
  return returns;
}

int resolve_lag(const RunConfig& config, const ReturnPanel& panel) {
  if (!config.lag_is_auto()) return config.lag_value();
  const auto T = static_cast<int>(panel.rows());
  const auto n = static_cast<int>(panel.cols());
  const int feasible = (T - 2) / (n + 1);
  const int p_max = std::min(10, feasible);
  if (p_max < 1) {
    throw InsufficientSamples("InsufficientSamples: panel too short for lag selection");
  }
  int lag = 1;
  for (const auto& label : panel.labels) {
    lag = std::max(lag, select_lag_bic(panel, label, p_max));
  }
  return lag;
}

ordered_json preprocessing_json(const ReturnPanel& panel) {
  ordered_json p;
  p["demeaned"] = panel.preprocessing.demeaned;
  p["detrended"] = panel.preprocessing.detrended;
  p["standardized"] = panel.preprocessing.standardized;
  return p;
}

GraphMeta make_meta(const RunConfig& config, int lag, const ordered_json& extra) {
  GraphMeta meta;
  meta.lag = lag;
  meta.alpha = config.alpha;
  meta.method = config.method;
  meta.seed = config.seed;
  ordered_json merged = extra;
  merged["config"] = ordered_json::parse(cli::config_to_json(config));
  meta.extra_json = merged.dump();
  return meta;
}

CausalityMatrix run_causality(const RunConfig& config, const ReturnPanel& returns,
                              int lag) {
  return causality_matrix(returns, lag, config.sig_method(), config.seed,
                          config.surrogates);
}

std::string matrix_csv(const CausalityMatrix& matrix, const Eigen::MatrixXd& cells,
                       const RunConfig& config) {
  std::string out = cli::config_to_comment_block(config);
  out += "source";
  for (const auto& l : matrix.labels) out += "," + l;
  out += "\n";
  const auto n = static_cast<Eigen::Index>(matrix.labels.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    out += matrix.labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) {
      out += ",";
      if (std::isfinite(cells(i, j))) out += fmt17(cells(i, j));
      // NaN (failed pair) stays an empty cell; the notes carry the reason
    }
    out += "\n";
  }
  return out;
}

ordered_json matrix_json(const CausalityMatrix& matrix, const RunConfig& config,
                         const ReturnPanel& returns) {
  ordered_json doc;
  doc["labels"] = matrix.labels;
  auto matrix_to_json = [](const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      ordered_json row = ordered_json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  doc["gc"] = matrix_to_json(matrix.gc);
  doc["p_values"] = matrix_to_json(matrix.p_values);
  doc["notes"] = ordered_json::array();
  for (const auto& note : matrix.notes) {
    ordered_json n;
    n["source"] = note.source;
    n["target"] = note.target;
    n["note"] = note.note;
    doc["notes"].push_back(std::move(n));
  }
  ordered_json meta;
  meta["lag"] = matrix.lag;
  meta["alpha"] = config.alpha;
  meta["method"] = config.method;
  meta["seed"] = config.seed;
  meta["preprocessing"] = preprocessing_json(returns);
  meta["config"] = ordered_json::parse(cli::config_to_json(config));
  doc["meta"] = std::move(meta);
  return doc;
}

// ---- subcommands -----------------------------------------------------------

int cmd_returns(const RunConfig& config) {
  const ReturnPanel returns = load_returns(config, /*preprocessed=*/false);
  std::string out = cli::config_to_comment_block(config);
  out += config.date_column;
  for (const auto& l : returns.labels) out += "," + l;
  out += "\n";
  for (Eigen::Index t = 0; t < returns.rows(); ++t) {
    out += returns.timestamps[static_cast<std::size_t>(t)];
    for (Eigen::Index i = 0; i < returns.cols(); ++i) {
      out += "," + fmt17(returns.values(t, i));
    }
    out += "\n";
  }
  write_file(artifact_path(config, "returns.csv"), out);
  return 0;
}

int cmd_granger(const RunConfig& config) {
  const ReturnPanel returns = load_returns(config, /*preprocessed=*/true);
  const int lag = resolve_lag(config, returns);
  const CausalityMatrix matrix = run_causality(config, returns, lag);
  write_file(artifact_path(config, "causality.json"),
             matrix_json(matrix, config, returns).dump(2) + "\n");
  write_file(artifact_path(config, "gc.csv"), matrix_csv(matrix, matrix.gc, config));
  write_file(artifact_path(config, "pvalues.csv"),
             matrix_csv(matrix, matrix.p_values, config));
  return 0;
}

int cmd_graph(const RunConfig& config) {
  const ReturnPanel returns = load_returns(config, /*preprocessed=*/true);
  const int lag = resolve_lag(config, returns);
  const CausalityMatrix matrix = run_causality(config, returns, lag);
  DirectedGraph graph = threshold_adjacency(matrix, config.alpha);
  apply_flags(graph, read_flagged(config));
  const CausalTree tree = extract_causal_tree(graph);

  ordered_json extra;
  extra["preprocessing"] = preprocessing_json(returns);
  const GraphMeta meta = make_meta(config, lag, extra);
  write_file(artifact_path(config, "graph.json"), export_json(graph, meta));
  write_file(artifact_path(config, "graph.dot"),
             dot_with_meta(config, export_dot(graph, true, "causal_graph")));
  write_file(artifact_path(config, "causal_tree.json"), export_json(tree, meta));
  write_file(artifact_path(config, "causal_tree.dot"),
             dot_with_meta(config, export_dot(tree, "causal_tree")));
  return 0;
}

int cmd_mst(const RunConfig& config) {
  const ReturnPanel returns = load_returns(config, /*preprocessed=*/true);
  const CorrMatrix corr = correlation_matrix(returns);
  const DistanceMatrix dist = to_distance(corr);
  const Mst mst = kruskal_mst(dist);
  const DistanceMatrix ultra = subdominant_distance(mst);
  const MetricReport metric = check_metric_properties(dist, /*ultrametric=*/false);
  const MetricReport ultra_report = check_metric_properties(ultra, /*ultrametric=*/true);

  DirectedGraph graph = to_graph(mst);
  apply_flags(graph, read_flagged(config));
  ordered_json extra;
  extra["kind"] = "mst";
  extra["preprocessing"] = preprocessing_json(returns);
  const GraphMeta meta = make_meta(config, 0, extra);
  write_file(artifact_path(config, "mst.json"), export_json(graph, meta));
  write_file(artifact_path(config, "mst.dot"),
             dot_with_meta(config, export_dot(graph, false, "mst")));

  auto report_json = [](const MetricReport& r) {
    ordered_json j;
    j["pass"] = r.pass();
    j["identity_ok"] = r.identity_ok;
    j["symmetry_ok"] = r.symmetry_ok;
    j["triangle_ok"] = r.triangle_ok;
    if (r.ultrametric_checked) j["ultrametric_ok"] = r.ultrametric_ok;
    if (!r.pass()) {
      j["worst_property"] = r.worst_property;
      j["worst_triple"] = {r.worst_i, r.worst_j, r.worst_k};
      j["worst_violation"] = r.worst_violation;
    }
    return j;
  };
  ordered_json doc;
  doc["distance_metric_check"] = report_json(metric);
  doc["subdominant_ultrametric_check"] = report_json(ultra_report);
  doc["mst_total_weight"] = mst.total_weight();
  doc["meta"] = ordered_json::parse(meta.extra_json);
  doc["meta"]["alpha"] = config.alpha;
  doc["meta"]["method"] = config.method;
  doc["meta"]["seed"] = config.seed;
  write_file(artifact_path(config, "ultrametric_report.json"), doc.dump(2) + "\n");
  return 0;
}

int cmd_compare(const RunConfig& config) {
  const ReturnPanel returns = load_returns(config, /*preprocessed=*/true);
  const int lag = resolve_lag(config, returns);
  const CausalityMatrix matrix = run_causality(config, returns, lag);
  DirectedGraph pruned = threshold_adjacency(matrix, config.alpha);
  const std::vector<std::string> flagged = read_flagged(config);
  apply_flags(pruned, flagged);
  const CausalTree tree = extract_causal_tree(pruned);

  const CorrMatrix corr = correlation_matrix(returns);
  const Mst mst = kruskal_mst(to_distance(corr));
  DirectedGraph mst_graph = to_graph(mst);
  apply_flags(mst_graph, flagged);

  ordered_json extra;
  extra["preprocessing"] = preprocessing_json(returns);
  const GraphMeta meta = make_meta(config, lag, extra);
  write_file(artifact_path(config, "causal_tree.json"), export_json(tree, meta));
  write_file(artifact_path(config, "causal_tree.dot"),
             dot_with_meta(config, export_dot(tree, "causal_tree")));
  write_file(artifact_path(config, "mst.json"), export_json(mst_graph, meta));
  write_file(artifact_path(config, "mst.dot"),
             dot_with_meta(config, export_dot(mst_graph, false, "mst")));

  // undirected edge sets: symmetrized causal tree vs MST
  auto key = [](const std::string& a, const std::string& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  };
  std::set<std::pair<std::string, std::string>> tree_edges, mst_edges;
  for (const Arc& a : tree.edges) tree_edges.insert(key(a.from, a.to));
  for (const Arc& a : mst_graph.arcs) mst_edges.insert(key(a.from, a.to));

  auto edge_list = [](const std::set<std::pair<std::string, std::string>>& edges) {
    ordered_json list = ordered_json::array();
    for (const auto& [a, b] : edges) {
      ordered_json e;
      e["a"] = a;
      e["b"] = b;
      list.push_back(std::move(e));
    }
    return list;
  };
  std::set<std::pair<std::string, std::string>> shared, tree_only, mst_only;
  for (const auto& e : tree_edges) {
    (mst_edges.count(e) ? shared : tree_only).insert(e);
  }
  for (const auto& e : mst_edges) {
    if (!tree_edges.count(e)) mst_only.insert(e);
  }

  ordered_json doc;
  doc["shared_edges"] = edge_list(shared);
  doc["causal_tree_only"] = edge_list(tree_only);
  doc["mst_only"] = edge_list(mst_only);
  doc["shared_count"] = shared.size();
  doc["meta"] = ordered_json::parse(meta.extra_json);
  doc["meta"]["lag"] = lag;
  doc["meta"]["alpha"] = config.alpha;
  doc["meta"]["method"] = config.method;
  doc["meta"]["seed"] = config.seed;
  write_file(artifact_path(config, "compare_report.json"), doc.dump(2) + "\n");
  return 0;
}

VarSpec spec_from_config(const RunConfig& config) {
  const auto& s = config.synth;
  VarSpec spec = VarSpec::zero(s.n, s.p, s.T, config.seed);
  spec.noise_sd = Eigen::VectorXd::Constant(s.n, s.noise_sd);
  if (s.preset == "chain") {
    for (int i = 0; i < s.n; ++i) spec.coupling[0](i, i) = s.self_coupling;
    for (int i = 0; i + 1 < s.n; ++i) spec.coupling[0](i + 1, i) = s.strength;
  }
  for (const auto& entry : s.coupling) {
    int lag = 0, target = 0, source = 0;
    double value = 0.0;
    if (std::sscanf(entry.c_str(), "%d:%d:%d:%lf", &lag, &target, &source, &value) != 4 ||
        lag < 1 || lag > s.p || target < 0 || target >= s.n || source < 0 ||
        source >= s.n) {
      throw ConfigError("synth_coupling", "bad entry '" + entry +
                                              "', expected lag:target:source:value");
    }
    spec.coupling[static_cast<std::size_t>(lag - 1)](target, source) = value;
  }
  return spec;
}

int cmd_synth(const RunConfig& config) {
  const VarSpec spec = spec_from_config(config);
  const ReturnPanel returns = generate_var(spec);
  const PricePanel prices = price_panel_from_returns(returns, 100.0);

  std::string out = cli::config_to_comment_block(config);
  out += config.date_column;
  for (const auto& l : prices.labels) out += "," + l;
  out += "\n";
  for (Eigen::Index t = 0; t < prices.rows(); ++t) {
    out += prices.timestamps[static_cast<std::size_t>(t)];
    for (Eigen::Index i = 0; i < prices.cols(); ++i) {
      out += "," + fmt17(prices.values(t, i));
    }
    out += "\n";
  }
  write_file(artifact_path(config, "prices.csv"), out);
  return 0;
}

int cmd_te(const RunConfig& config, const std::string& source,
           const std::string& target, const std::string& conditioning_csv) {
  const ReturnPanel returns = load_returns(config, /*preprocessed=*/true);
  const int lag = config.lag_is_auto() ? 1 : config.lag_value();

  std::vector<std::string> conditioning;
  if (conditioning_csv == "all") {
    for (const auto& l : returns.labels) {
      if (l != source && l != target) conditioning.push_back(l);
    }
    std::sort(conditioning.begin(), conditioning.end());
  } else if (!conditioning_csv.empty() && conditioning_csv != "none") {
    std::stringstream ss(conditioning_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) conditioning.push_back(item);
    }
  }

  auto symbolize = [&](const std::string& label) {
    const Eigen::Index c = returns.column(label);
    const Eigen::VectorXd col = returns.values.col(c);
    return discretize(std::span<const double>(col.data(),
                                              static_cast<std::size_t>(col.size())),
                      config.bins, BinScheme::Equiquantile);
  };
  const SymbolSeries src = symbolize(source);
  const SymbolSeries dst = symbolize(target);
  std::vector<SymbolSeries> cond;
  cond.reserve(conditioning.size());
  for (const auto& l : conditioning) cond.push_back(symbolize(l));
  std::vector<const SymbolSeries*> cond_ptrs;
  for (const auto& s : cond) cond_ptrs.push_back(&s);

  const TeResult te = discrete_transfer_entropy(src, dst, cond_ptrs, lag);

  ordered_json doc;
  doc["source"] = source;
  doc["target"] = target;
  doc["conditioning"] = conditioning;
  doc["te"] = te.value;
  doc["small_sample"] = te.small_sample;
  ordered_json meta;
  meta["lag"] = lag;
  meta["alpha"] = config.alpha;
  meta["method"] = config.method;
  meta["seed"] = config.seed;
  meta["bins"] = config.bins;
  meta["config"] = ordered_json::parse(cli::config_to_json(config));
  doc["meta"] = std::move(meta);
  write_file(artifact_path(config, "te.json"), doc.dump(2) + "\n");
  return 0;
}

void add_common_options(CLI::App* cmd, RunConfig& config, std::string& config_path) {
  cmd->add_option("-c,--config", config_path, "flat key = value configuration file");
  cmd->add_option("-i,--input", config.input, "input price CSV");
  cmd->add_option("--date-column", config.date_column, "date column name");
  cmd->add_option("--lag", config.lag, "lag order, integer or 'auto'");
  cmd->add_option("--alpha", config.alpha, "significance level in (0,1)");
  cmd->add_option("--method", config.method, "f_test or surrogate");
  cmd->add_option("--bins", config.bins, "bins for discrete TE");
  cmd->add_option("--surrogates", config.surrogates, "surrogate count");
  cmd->add_option("--seed", config.seed, "random seed");
  cmd->add_option("-o,--output-dir", config.output_dir, "artifact directory");
  cmd->add_option("--flagged", config.flagged, "file of vertex labels to highlight");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tenet: directed information flow and correlation trees for "
               "multivariate price series"};
  app.require_subcommand(1);

  // The config file (if any) is applied first so that explicit flags win.
  std::string config_path;
  for (int i = 1; i + 1 < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "-c" || arg == "--config") config_path = argv[i + 1];
  }
  RunConfig config;
  try {
    if (!config_path.empty()) config = cli::parse_config(config_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::string te_source, te_target;
  std::string te_conditioning = "all";
  std::string ignored_config_path;  // real parsing happened above

  auto* c_returns = app.add_subcommand("returns", "write log-return CSV");
  add_common_options(c_returns, config, ignored_config_path);
  auto* c_granger = app.add_subcommand("granger", "ordered-pair causality matrix");
  add_common_options(c_granger, config, ignored_config_path);
  auto* c_graph = app.add_subcommand("graph", "pruned causal graph and tree");
  add_common_options(c_graph, config, ignored_config_path);
  auto* c_mst = app.add_subcommand("mst", "correlation-distance minimum spanning tree");
  add_common_options(c_mst, config, ignored_config_path);
  auto* c_compare = app.add_subcommand("compare", "causal tree vs MST report");
  add_common_options(c_compare, config, ignored_config_path);
  auto* c_synth = app.add_subcommand("synth", "generate a synthetic price panel");
  add_common_options(c_synth, config, ignored_config_path);
  c_synth->add_option("--n", config.synth.n, "series count");
  c_synth->add_option("--T", config.synth.T, "sample length (returns)");
  c_synth->add_option("--p", config.synth.p, "generator lag order");
  c_synth->add_option("--noise-sd", config.synth.noise_sd, "noise scale");
  c_synth->add_option("--preset", config.synth.preset, "chain or independent");
  c_synth->add_option("--strength", config.synth.strength, "chain coupling");
  c_synth->add_option("--self", config.synth.self_coupling, "self coupling");
  c_synth->add_option("--coupling", config.synth.coupling,
                      "extra lag:target:source:value entries");
  auto* c_te = app.add_subcommand("te", "discrete transfer entropy for one pair");
  add_common_options(c_te, config, ignored_config_path);
  c_te->add_option("--source", te_source, "source label")->required();
  c_te->add_option("--target", te_target, "target label")->required();
  c_te->add_option("--conditioning", te_conditioning,
                   "comma list of labels, 'all' (default) or 'none'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    cli::validate_config(config);
    if (c_returns->parsed()) return cmd_returns(config);
    if (c_granger->parsed()) return cmd_granger(config);
    if (c_graph->parsed()) return cmd_graph(config);
    if (c_mst->parsed()) return cmd_mst(config);
    if (c_compare->parsed()) return cmd_compare(config);
    if (c_synth->parsed()) return cmd_synth(config);
    if (c_te->parsed()) return cmd_te(config, te_source, te_target, te_conditioning);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
