#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "femto/experiments.hpp"

namespace femto {

/// Resolved front-end configuration: scenario, model constants, algorithm
/// list and runner knobs. Parsed from line-oriented `key value` text;
/// unknown keys are rejected by name. `format_config_text` round-trips.
struct Config {
  ScenarioSpec scenario;
  ModelParams params;
  std::vector<Algorithm> algorithms{Algorithm::Ig, Algorithm::Fig, Algorithm::Sa, Algorithm::La};
  int runs = 1;
  std::uint64_t seed = 0;
  int max_iterations = 0;
  SelectionOrder selection = SelectionOrder::RoundRobin;
  SaSchedule sa;
  std::vector<double> omega_values;  // empty: single study at params.power_weight
  std::string output_dir = "out";
  int jobs = 0;

  /// Model invariants plus front-end bounds; throws naming the violation.
  void validate() const;

  BatchConfig to_batch_config() const;
};

Config parse_config_text(const std::string& text, const std::string& context = "<string>");
Config load_config(const std::string& path);
std::string format_config_text(const Config& cfg);
void save_config(const Config& cfg, const std::string& path);

std::vector<Algorithm> parse_algorithm_list(const std::string& csv);
std::vector<double> parse_double_list(const std::string& csv);

}  // namespace femto
