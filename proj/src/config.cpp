#include "tilenas/config.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace tilenas {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  std::ostringstream out;
  out << "config line " << line << ": " << msg;
  throw ConfigError(out.str());
}

long long to_int(const std::string& v, int line, const std::string& key) {
  size_t pos = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &pos);
  } catch (...) {
    fail(line, "field '" + key + "': expected an integer, got '" + v + "'");
  }
  if (pos != v.size()) fail(line, "field '" + key + "': trailing junk in '" + v + "'");
  return out;
}

double to_double(const std::string& v, int line, const std::string& key) {
  size_t pos = 0;
  double out = 0;
  try {
    out = std::stod(v, &pos);
  } catch (...) {
    fail(line, "field '" + key + "': expected a number, got '" + v + "'");
  }
  if (pos != v.size()) fail(line, "field '" + key + "': trailing junk in '" + v + "'");
  return out;
}

std::vector<int> to_int_list(const std::string& v, int line, const std::string& key) {
  std::istringstream in(v);
  std::vector<int> out;
  int x;
  while (in >> x) out.push_back(x);
  if (!in.eof()) fail(line, "field '" + key + "': expected a list of integers");
  if (out.empty()) fail(line, "field '" + key + "': empty list");
  return out;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  bool saw_space = false;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  SearchSpace space;
  ChildNetwork network;
  int line = 0;
  while (std::getline(in, raw)) {
    line++;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "platform" && section != "space" && section != "network" &&
          section != "search")
        fail(line, "unknown section '" + section + "'");
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (section.empty()) fail(line, "key '" + key + "' outside any section");

    if (section == "platform") {
      if (key == "fpgas") cfg.platform.num_fpgas = int(to_int(value, line, key));
      else if (key == "dsp_per_fpga") cfg.platform.dsp_per_fpga = int(to_int(value, line, key));
      else if (key == "clock_mhz") cfg.platform.clock_mhz = to_double(value, line, key);
      else if (key == "rl_ms") cfg.platform.rl_ms = to_double(value, line, key);
      else fail(line, "unknown platform field '" + key + "'");
    } else if (section == "space") {
      saw_space = true;
      if (key == "layers") space.num_layers = int(to_int(value, line, key));
      else if (key == "filter_sizes") space.filter_sizes = to_int_list(value, line, key);
      else if (key == "filter_counts") space.filter_counts = to_int_list(value, line, key);
      else if (key == "input") {
        auto dims = to_int_list(value, line, key);
        if (dims.size() != 3) fail(line, "field 'input': expected 'rows cols channels'");
        space.input_rows = dims[0];
        space.input_cols = dims[1];
        space.input_channels = dims[2];
      } else fail(line, "unknown space field '" + key + "'");
    } else if (section == "network") {
      if (key != "layer") fail(line, "unknown network field '" + key + "'");
      auto f = to_int_list(value, line, key);
      if (f.size() != 6) fail(line, "field 'layer': expected 'kh kw n m r c'");
      network.layers.push_back({f[0], f[1], f[2], f[3], f[4], f[5]});
    } else {  // search
      if (key == "strategy") {
        if (value == "reinforce") cfg.strategy = Strategy::Reinforce;
        else if (value == "random") cfg.strategy = Strategy::Random;
        else fail(line, "strategy must be 'reinforce' or 'random'");
      } else if (key == "trials") cfg.trials = int(to_int(value, line, key));
      else if (key == "seed") cfg.seed = uint64_t(to_int(value, line, key));
      else if (key == "learning_rate") cfg.learning_rate = to_double(value, line, key);
      else if (key == "ema_decay") cfg.ema_decay = to_double(value, line, key);
      else if (key == "gate") {
        if (value == "true") cfg.gate = true;
        else if (value == "false") cfg.gate = false;
        else fail(line, "field 'gate': expected true or false");
      } else if (key == "failed_reward") cfg.failed_reward = to_double(value, line, key);
      else if (key == "exhaustive_cap") cfg.exhaustive_cap = uint64_t(to_int(value, line, key));
      else if (key == "evaluator") cfg.evaluator = value;
      else if (key == "surrogate_noise") cfg.surrogate_noise = to_double(value, line, key);
      else if (key == "evaluator_timeout_sec")
        cfg.evaluator_timeout_sec = to_double(value, line, key);
      else fail(line, "unknown search field '" + key + "'");
    }
  }
  if (saw_space) cfg.space = space;
  if (!network.layers.empty()) cfg.network = network;
  if (cfg.evaluator != "surrogate" && cfg.evaluator.rfind("command ", 0) != 0)
    throw ConfigError("evaluator must be 'surrogate' or 'command <cmdline>'");
  if (auto err = validate_platform(cfg.platform))
    throw ConfigError("platform: " + *err);
  if (cfg.space)
    if (auto err = validate_space(*cfg.space)) throw ConfigError("space: " + *err);
  if (cfg.network)
    if (auto issue = validate_network(*cfg.network))
      throw ConfigError("network: " + issue->message);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[platform]\n";
  out << "fpgas = " << cfg.platform.num_fpgas << "\n";
  out << "dsp_per_fpga = " << cfg.platform.dsp_per_fpga << "\n";
  out << "clock_mhz = " << fmt_double(cfg.platform.clock_mhz) << "\n";
  out << "rl_ms = " << fmt_double(cfg.platform.rl_ms) << "\n";
  if (cfg.space) {
    out << "\n[space]\n";
    out << "layers = " << cfg.space->num_layers << "\n";
    out << "filter_sizes =";
    for (int v : cfg.space->filter_sizes) out << ' ' << v;
    out << "\nfilter_counts =";
    for (int v : cfg.space->filter_counts) out << ' ' << v;
    out << "\ninput = " << cfg.space->input_rows << ' ' << cfg.space->input_cols << ' '
        << cfg.space->input_channels << "\n";
  }
  if (cfg.network) {
    out << "\n[network]\n";
    for (const auto& l : cfg.network->layers)
      out << "layer = " << l.kh << ' ' << l.kw << ' ' << l.in_ch << ' ' << l.out_ch
          << ' ' << l.rows << ' ' << l.cols << "\n";
  }
  out << "\n[search]\n";
  out << "strategy = " << (cfg.strategy == Strategy::Reinforce ? "reinforce" : "random")
      << "\n";
  out << "trials = " << cfg.trials << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "learning_rate = " << fmt_double(cfg.learning_rate) << "\n";
  out << "ema_decay = " << fmt_double(cfg.ema_decay) << "\n";
  out << "gate = " << (cfg.gate ? "true" : "false") << "\n";
  out << "failed_reward = " << fmt_double(cfg.failed_reward) << "\n";
  out << "exhaustive_cap = " << cfg.exhaustive_cap << "\n";
  out << "evaluator = " << cfg.evaluator << "\n";
  out << "surrogate_noise = " << fmt_double(cfg.surrogate_noise) << "\n";
  out << "evaluator_timeout_sec = " << fmt_double(cfg.evaluator_timeout_sec) << "\n";
  return out.str();
}

std::unique_ptr<AccuracyEvaluator> make_evaluator(const RunConfig& cfg) {
  if (cfg.evaluator == "surrogate")
    return std::make_unique<SurrogateEvaluator>(cfg.surrogate_noise, cfg.seed);
  if (cfg.evaluator.rfind("command ", 0) == 0 && cfg.evaluator.size() > 8)
    return std::make_unique<CommandEvaluator>(cfg.evaluator.substr(8),
                                              cfg.evaluator_timeout_sec);
  throw ConfigError("unknown evaluator '" + cfg.evaluator +
                    "' (expected 'surrogate' or 'command <cmdline>')");
}

}  // namespace tilenas
