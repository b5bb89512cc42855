#include "runconfig.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tenet/errors.hpp"

namespace tenet::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

int parse_int(const std::string& key, const std::string& value) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(key, "expected an integer, got '" + value + "'");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(key, "expected a number, got '" + value + "'");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(key, "expected an unsigned integer, got '" + value + "'");
  }
  return out;
}

void apply_key(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "input") {
    config.input = value;
  } else if (key == "date_column") {
    config.date_column = value;
  } else if (key == "lag") {
    config.lag = value;
  } else if (key == "alpha") {
    config.alpha = parse_double(key, value);
  } else if (key == "method") {
    config.method = value;
  } else if (key == "bins") {
    config.bins = parse_int(key, value);
  } else if (key == "surrogates") {
    config.surrogates = parse_int(key, value);
  } else if (key == "seed") {
    config.seed = parse_u64(key, value);
  } else if (key == "output_dir") {
    config.output_dir = value;
  } else if (key == "flagged") {
    config.flagged = value;
  } else if (key == "synth_n") {
    config.synth.n = parse_int(key, value);
  } else if (key == "synth_t") {
    config.synth.T = parse_int(key, value);
  } else if (key == "synth_p") {
    config.synth.p = parse_int(key, value);
  } else if (key == "synth_noise_sd") {
    config.synth.noise_sd = parse_double(key, value);
  } else if (key == "synth_preset") {
    config.synth.preset = value;
  } else if (key == "synth_strength") {
    config.synth.strength = parse_double(key, value);
  } else if (key == "synth_self") {
    config.synth.self_coupling = parse_double(key, value);
  } else if (key == "synth_coupling") {
    std::stringstream ss(value);
    std::string entry;
    config.synth.coupling.clear();
    while (std::getline(ss, entry, ';')) {
      entry = trim(entry);
      if (!entry.empty()) config.synth.coupling.push_back(entry);
    }
  } else {
    throw ConfigError(key, "unknown configuration key");
  }
}

}  // namespace

int RunConfig::lag_value() const {
  if (lag_is_auto()) throw ConfigError("lag", "lag is 'auto', not numeric");
  return parse_int("lag", lag);
}

SigMethod RunConfig::sig_method() const {
  if (method == "f_test") return SigMethod::FTest;
  if (method == "surrogate") return SigMethod::Surrogate;
  throw ConfigError("method", "expected f_test or surrogate, got '" + method + "'");
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);

  RunConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line, "expected 'key = value' at line " + std::to_string(line_no));
    }
    apply_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

void validate_config(const RunConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw ConfigError("alpha", "must lie in (0, 1)");
  }
  if (config.bins < 2) throw ConfigError("bins", "must be >= 2");
  if (config.surrogates < 1) throw ConfigError("surrogates", "must be >= 1");
  if (!config.lag_is_auto() && config.lag_value() < 1) {
    throw ConfigError("lag", "must be 'auto' or >= 1");
  }
  config.sig_method();  // validates method
  if (config.synth.n < 1) throw ConfigError("synth_n", "must be >= 1");
  if (config.synth.T < 2) throw ConfigError("synth_t", "must be >= 2");
  if (config.synth.p < 1) throw ConfigError("synth_p", "must be >= 1");
  if (!(config.synth.noise_sd > 0.0)) {
    throw ConfigError("synth_noise_sd", "must be > 0");
  }
  if (config.synth.preset != "chain" && config.synth.preset != "independent") {
    throw ConfigError("synth_preset", "expected chain or independent");
  }
}

std::string config_to_json(const RunConfig& config) {
  nlohmann::ordered_json j;
  j["input"] = config.input;
  j["date_column"] = config.date_column;
  j["lag"] = config.lag;
  j["alpha"] = config.alpha;
  j["method"] = config.method;
  j["bins"] = config.bins;
  j["surrogates"] = config.surrogates;
  j["seed"] = config.seed;
  j["output_dir"] = config.output_dir;
  j["flagged"] = config.flagged;
  nlohmann::ordered_json s;
  s["n"] = config.synth.n;
  s["t"] = config.synth.T;
  s["p"] = config.synth.p;
  s["noise_sd"] = config.synth.noise_sd;
  s["preset"] = config.synth.preset;
  s["strength"] = config.synth.strength;
  s["self"] = config.synth.self_coupling;
  s["coupling"] = config.synth.coupling;
  j["synth"] = std::move(s);
  return j.dump();
}

RunConfig config_from_json(const std::string& json_text) {
  const auto j = nlohmann::ordered_json::parse(json_text);
  RunConfig config;
  config.input = j.at("input").get<std::string>();
  config.date_column = j.at("date_column").get<std::string>();
  config.lag = j.at("lag").get<std::string>();
  config.alpha = j.at("alpha").get<double>();
  config.method = j.at("method").get<std::string>();
  config.bins = j.at("bins").get<int>();
  config.surrogates = j.at("surrogates").get<int>();
  config.seed = j.at("seed").get<std::uint64_t>();
  config.output_dir = j.at("output_dir").get<std::string>();
  config.flagged = j.at("flagged").get<std::string>();
  const auto& s = j.at("synth");
  config.synth.n = s.at("n").get<int>();
  config.synth.T = s.at("t").get<int>();
  config.synth.p = s.at("p").get<int>();
  config.synth.noise_sd = s.at("noise_sd").get<double>();
  config.synth.preset = s.at("preset").get<std::string>();
  config.synth.strength = s.at("strength").get<double>();
  config.synth.self_coupling = s.at("self").get<double>();
  config.synth.coupling = s.at("coupling").get<std::vector<std::string>>();
  return config;
}

std::string config_to_comment_block(const RunConfig& config) {
  std::ostringstream out;
  out << "# input = " << config.input << "\n";
  out << "# date_column = " << config.date_column << "\n";
  out << "# lag = " << config.lag << "\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", config.alpha);
  out << "# alpha = " << buf << "\n";
  out << "# method = " << config.method << "\n";
  out << "# bins = " << config.bins << "\n";
  out << "# surrogates = " << config.surrogates << "\n";
  out << "# seed = " << config.seed << "\n";
  out << "# output_dir = " << config.output_dir << "\n";
  out << "# flagged = " << config.flagged << "\n";
  out << "# synth_n = " << config.synth.n << "\n";
  out << "# synth_t = " << config.synth.T << "\n";
  out << "# synth_p = " << config.synth.p << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", config.synth.noise_sd);
  out << "# synth_noise_sd = " << buf << "\n";
  out << "# synth_preset = " << config.synth.preset << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", config.synth.strength);
  out << "# synth_strength = " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", config.synth.self_coupling);
  out << "# synth_self = " << buf << "\n";
  std::string joined;
  for (const auto& c : config.synth.coupling) {
    if (!joined.empty()) joined += "; ";
    joined += c;
  }
  out << "# synth_coupling = " << joined << "\n";
  return out.str();
}

}  // namespace tenet::cli
