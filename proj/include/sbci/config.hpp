#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sbci/sim.hpp"

namespace sbci::config {

// Flat key=value experiment description. Keys map 1:1 onto
// ExperimentConfig fields; '#' starts a comment. Unknown keys and
// unparsable values are reported by name.
sim::ExperimentConfig parse_config(std::istream& in);
sim::ExperimentConfig parse_config_file(const std::string& path);

// Canonical echo of an effective config (defaults applied); feeding it
// back through parse_config reproduces the same run.
std::string echo_config(const sim::ExperimentConfig& config);

// Sweep description: the same base keys plus list-valued dimensions.
// Cells are the cartesian product models x alphas x fr_fractions x
// policies x seeds. A missing list falls back to the base key's value;
// when no `seeds` list is given each cell runs at seed + cell_index.
struct SweepSpec {
  sim::ExperimentConfig base;
  std::vector<sim::Model> models;
  std::vector<double> alphas;
  std::vector<double> fr_fractions;
  std::vector<sim::Policy> policies;
  std::vector<std::uint64_t> seeds;  // empty = derive from base.seed
};

SweepSpec parse_sweep(std::istream& in);
SweepSpec parse_sweep_file(const std::string& path);

std::vector<sim::ExperimentConfig> expand_sweep(const SweepSpec& spec);

}  // namespace sbci::config
