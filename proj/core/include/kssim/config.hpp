#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kssim/grid.hpp"
#include "kssim/initial_data.hpp"
#include "kssim/model.hpp"
#include "kssim/solver.hpp"

namespace kssim {

enum class ExperimentKind { Single, MassSweep, RegimeAtlas, EpsilonStudy, RefinementStudy, VariationStability };

std::string_view to_string(ExperimentKind k);

/// One experiment, as read from a config file. Every key has a canonical textual
/// form; see to_text and the key table in README.md.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Single;

  int dim = 1;
  std::vector<double> lengths;
  std::vector<int> cells;

  ModelParams params;
  SolverConfig solver;
  InitSpec init;
  double base = 0.0;  ///< variation-stability: constant floor M under the bump

  double t1 = 0.0;
  double t_floor = 0.0;

  std::vector<double> masses;
  std::vector<double> epsilons;
  std::vector<double> p_values;
  std::vector<double> theta_values;
  int levels = 3;

  std::string output_dir = "out";

  Grid grid() const;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses flat `dotted.key = value` text. Lists are written `[a, b, c]`; `#` starts
/// a comment. Missing optional keys receive their defaults; unknown or duplicate
/// keys and invalid values throw ConfigError naming the key.
ExperimentConfig parse_config(std::string_view text);

/// Canonical text of a config with every key present (defaults included) in a
/// fixed order and shortest round-trip number formatting.
/// parse_config(to_text(c)) == c.
std::string to_text(const ExperimentConfig& cfg);

}  // namespace kssim
