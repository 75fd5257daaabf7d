#include "femto/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace femto {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double to_double(const std::string& v, const std::string& key) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != v.size())
    throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + v + "'");
  return x;
}

int to_int(const std::string& v, const std::string& key) {
  const double x = to_double(v, key);
  const int i = static_cast<int>(x);
  if (x != i)
    throw std::invalid_argument("config: key '" + key + "' expects an integer, got '" + v + "'");
  return i;
}

}  // namespace

std::vector<Algorithm> parse_algorithm_list(const std::string& csv) {
  std::vector<Algorithm> algs;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) algs.push_back(algorithm_from_name(item));
  }
  if (algs.empty()) throw std::invalid_argument("empty algorithm list");
  return algs;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> vals;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) vals.push_back(to_double(item, "list"));
  }
  return vals;
}

void Config::validate() const {
  params.validate();
  if (runs < 1) throw std::invalid_argument("config: runs must be >= 1");
  if (max_iterations < 0) throw std::invalid_argument("config: max_iterations must be >= 0");
  if (jobs < 0) throw std::invalid_argument("config: jobs must be >= 0");
  if (algorithms.empty()) throw std::invalid_argument("config: no algorithms selected");
  if (sa.window < 1) throw std::invalid_argument("config: sa_window must be >= 1");
  if (!(sa.tau > 0)) throw std::invalid_argument("config: sa_tau must be > 0");
  if (sa.beta0 < 0) throw std::invalid_argument("config: sa_beta0 must be >= 0");
  for (double w : omega_values)
    if (w < 0) throw std::invalid_argument("config: omega values must be >= 0");
  if (scenario.kind == ScenarioSpec::Kind::File && scenario.path.empty())
    throw std::invalid_argument("config: scenario 'file' requires a path");
  if (scenario.kind == ScenarioSpec::Kind::Grid) {
    const GridSpec& g = scenario.grid;
    if (g.rows < 1 || g.cols < 1) throw std::invalid_argument("config: grid rows/cols must be >= 1");
    if (!(g.spacing_m > 0)) throw std::invalid_argument("config: grid_spacing_m must be > 0");
    if (!(g.range_m > 0)) throw std::invalid_argument("config: grid_range_m must be > 0");
    if (g.ues_per_circle < 1 || g.gbr_per_circle < 0 || g.gbr_per_circle > g.ues_per_circle)
      throw std::invalid_argument("config: bad grid UE counts");
    if (g.alternate_circles && g.alternate_gbr_mix)
      throw std::invalid_argument("config: grid_alternate and grid_alternate_gbr_mix are exclusive");
    if (!(g.gbr_demand_mbps > 0) || !(g.non_gbr_cap_mbps > 0))
      throw std::invalid_argument("config: bearer rates must be > 0");
  }
}

BatchConfig Config::to_batch_config() const {
  BatchConfig b;
  b.scenario = scenario;
  b.algorithms = algorithms;
  b.params = params;
  b.runs = runs;
  b.seed = seed;
  b.max_iterations = max_iterations;
  b.selection = selection;
  b.sa = sa;
  b.jobs = jobs;
  return b;
}

Config parse_config_text(const std::string& text, const std::string& context) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::string value;
    std::getline(ls, value);
    const auto first = value.find_first_not_of(" \t");
    value = first == std::string::npos ? std::string{} : value.substr(first);
    const auto last = value.find_last_not_of(" \t\r");
    if (last != std::string::npos) value.erase(last + 1);
    auto fail = [&](const std::string& what) {
      throw std::invalid_argument(context + ":" + std::to_string(line_no) + ": " + what);
    };
    if (value.empty()) fail("key '" + key + "' has no value");

    try {
      if (key == "scenario") {
        if (value == "simple") cfg.scenario.kind = ScenarioSpec::Kind::Simple;
        else if (value == "grid") cfg.scenario.kind = ScenarioSpec::Kind::Grid;
        else if (value == "file") cfg.scenario.kind = ScenarioSpec::Kind::File;
        else fail("unknown scenario '" + value + "' (expected simple, grid or file)");
      } else if (key == "file") cfg.scenario.path = value;
      else if (key == "grid_rows") cfg.scenario.grid.rows = to_int(value, key);
      else if (key == "grid_cols") cfg.scenario.grid.cols = to_int(value, key);
      else if (key == "grid_spacing_m") cfg.scenario.grid.spacing_m = to_double(value, key);
      else if (key == "grid_range_m") cfg.scenario.grid.range_m = to_double(value, key);
      else if (key == "grid_ues_per_circle") cfg.scenario.grid.ues_per_circle = to_int(value, key);
      else if (key == "grid_gbr_per_circle") cfg.scenario.grid.gbr_per_circle = to_int(value, key);
      else if (key == "grid_alternate") cfg.scenario.grid.alternate_circles = to_int(value, key) != 0;
      else if (key == "grid_alternate_gbr_mix") cfg.scenario.grid.alternate_gbr_mix = to_int(value, key) != 0;
      else if (key == "gbr_demand_mbps") cfg.scenario.grid.gbr_demand_mbps = to_double(value, key);
      else if (key == "non_gbr_cap_mbps") cfg.scenario.grid.non_gbr_cap_mbps = to_double(value, key);
      else if (key == "algorithms") cfg.algorithms = parse_algorithm_list(value);
      else if (key == "runs") cfg.runs = to_int(value, key);
      else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
      else if (key == "max_iterations") cfg.max_iterations = to_int(value, key);
      else if (key == "selection") {
        if (value == "round_robin") cfg.selection = SelectionOrder::RoundRobin;
        else if (value == "random") cfg.selection = SelectionOrder::Random;
        else fail("unknown selection '" + value + "' (expected round_robin or random)");
      } else if (key == "sa_beta0") cfg.sa.beta0 = to_double(value, key);
      else if (key == "sa_tau") cfg.sa.tau = to_double(value, key);
      else if (key == "sa_window") cfg.sa.window = to_int(value, key);
      else if (key == "omega") cfg.params.power_weight = to_double(value, key);
      else if (key == "omega_sweep") cfg.omega_values = parse_double_list(value);
      else if (key == "full_rate_mbps") cfg.params.full_rate_mbps = to_double(value, key);
      else if (key == "levels") cfg.params.probability_levels = to_int(value, key);
      else if (key == "c1") cfg.params.gbr_utility = to_double(value, key);
      else if (key == "c2") cfg.params.non_gbr_utility = to_double(value, key);
      else if (key == "c3") cfg.params.penalty_slope = to_double(value, key);
      else if (key == "e1") cfg.params.idle_power_w = to_double(value, key);
      else if (key == "e2") cfg.params.active_power_w = to_double(value, key);
      else if (key == "e3") cfg.params.transmit_power_w = to_double(value, key);
      else if (key == "output_dir") cfg.output_dir = value;
      else if (key == "jobs") cfg.jobs = to_int(value, key);
      else fail("unknown key '" + key + "'");
    } catch (const std::invalid_argument& e) {
      const std::string msg = e.what();
      if (msg.rfind(context, 0) == 0) throw;  // already contextualized
      fail(msg);
    }
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string format_config_text(const Config& cfg) {
  std::ostringstream out;
  switch (cfg.scenario.kind) {
    case ScenarioSpec::Kind::Simple: out << "scenario simple\n"; break;
    case ScenarioSpec::Kind::Grid: out << "scenario grid\n"; break;
    case ScenarioSpec::Kind::File: out << "scenario file\nfile " << cfg.scenario.path << "\n"; break;
  }
  const GridSpec& g = cfg.scenario.grid;
  out << "grid_rows " << g.rows << "\n";
  out << "grid_cols " << g.cols << "\n";
  out << "grid_spacing_m " << fmt(g.spacing_m) << "\n";
  out << "grid_range_m " << fmt(g.range_m) << "\n";
  out << "grid_ues_per_circle " << g.ues_per_circle << "\n";
  out << "grid_gbr_per_circle " << g.gbr_per_circle << "\n";
  out << "grid_alternate " << (g.alternate_circles ? 1 : 0) << "\n";
  out << "grid_alternate_gbr_mix " << (g.alternate_gbr_mix ? 1 : 0) << "\n";
  out << "gbr_demand_mbps " << fmt(g.gbr_demand_mbps) << "\n";
  out << "non_gbr_cap_mbps " << fmt(g.non_gbr_cap_mbps) << "\n";
  out << "algorithms ";
  for (std::size_t i = 0; i < cfg.algorithms.size(); ++i)
    out << (i ? "," : "") << algorithm_name(cfg.algorithms[i]);
  out << "\n";
  out << "runs " << cfg.runs << "\n";
  out << "seed " << cfg.seed << "\n";
  out << "max_iterations " << cfg.max_iterations << "\n";
  out << "selection "
      << (cfg.selection == SelectionOrder::RoundRobin ? "round_robin" : "random") << "\n";
  out << "sa_beta0 " << fmt(cfg.sa.beta0) << "\n";
  out << "sa_tau " << fmt(cfg.sa.tau) << "\n";
  out << "sa_window " << cfg.sa.window << "\n";
  out << "omega " << fmt(cfg.params.power_weight) << "\n";
  if (!cfg.omega_values.empty()) {
    out << "omega_sweep ";
    for (std::size_t i = 0; i < cfg.omega_values.size(); ++i)
      out << (i ? "," : "") << fmt(cfg.omega_values[i]);
    out << "\n";
  }
  out << "full_rate_mbps " << fmt(cfg.params.full_rate_mbps) << "\n";
  out << "levels " << cfg.params.probability_levels << "\n";
  out << "c1 " << fmt(cfg.params.gbr_utility) << "\n";
  out << "c2 " << fmt(cfg.params.non_gbr_utility) << "\n";
  out << "c3 " << fmt(cfg.params.penalty_slope) << "\n";
  out << "e1 " << fmt(cfg.params.idle_power_w) << "\n";
  out << "e2 " << fmt(cfg.params.active_power_w) << "\n";
  out << "e3 " << fmt(cfg.params.transmit_power_w) << "\n";
  out << "output_dir " << cfg.output_dir << "\n";
  out << "jobs " << cfg.jobs << "\n";
  return out.str();
}

void save_config(const Config& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file: " + path);
  out << format_config_text(cfg);
}

}  // namespace femto
