#include "sbci/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sbci/format.hpp"

namespace sbci::config {

namespace {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  const auto last = text.find_last_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  return std::string(text.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw std::invalid_argument("bad value '" + value + "' for config key '" +
                              key + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(value, &used);
    if (used != value.size()) bad_value(key, value);
    return v;
  } catch (const std::invalid_argument&) {
    bad_value(key, value);
  } catch (const std::out_of_range&) {
    bad_value(key, value);
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) bad_value(key, value);
    return v;
  } catch (const std::invalid_argument&) {
    bad_value(key, value);
  } catch (const std::out_of_range&) {
    bad_value(key, value);
  }
}

double parse_real(const std::string& key, const std::string& value) {
  double v = 0.0;
  if (!parse_double(value, v)) bad_value(key, value);
  return v;
}

sim::Model parse_model(const std::string& key, const std::string& value) {
  if (value == "simple") return sim::Model::simple;
  if (value == "adaptive") return sim::Model::adaptive;
  if (value == "extreme") return sim::Model::extreme;
  bad_value(key, value);
}

sim::Bandwidth parse_bandwidth(const std::string& key, const std::string& value) {
  if (value == "uniform") return sim::Bandwidth::uniform;
  if (value == "type1") return sim::Bandwidth::type1;
  if (value == "type2") return sim::Bandwidth::type2;
  bad_value(key, value);
}

sim::Policy parse_policy(const std::string& key, const std::string& value) {
  if (value == "greedy") return sim::Policy::greedy;
  if (value == "stable-marriage") return sim::Policy::stable_marriage;
  bad_value(key, value);
}

bool apply_base_key(sim::ExperimentConfig& config, const std::string& key,
                    const std::string& value) {
  if (key == "n_peers") config.n_peers = parse_int(key, value);
  else if (key == "alpha") config.alpha = parse_real(key, value);
  else if (key == "total_transactions")
    config.total_transactions = parse_u64(key, value);
  else if (key == "responder_fraction")
    config.responder_fraction = parse_real(key, value);
  else if (key == "resource_min") config.resource_min = parse_int(key, value);
  else if (key == "resource_max") config.resource_max = parse_int(key, value);
  else if (key == "model") config.model = parse_model(key, value);
  else if (key == "fr_fraction") config.fr_fraction = parse_real(key, value);
  else if (key == "bandwidth") config.bandwidth = parse_bandwidth(key, value);
  else if (key == "policy") config.policy = parse_policy(key, value);
  else if (key == "epoch_size") config.epoch_size = parse_u64(key, value);
  else if (key == "seed") config.seed = parse_u64(key, value);
  else return false;
  return true;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <typename Handler>
void for_each_pair(std::istream& in, Handler&& handle) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  " is not a key=value pair");
    handle(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
}

void validate_with_key_names(const sim::ExperimentConfig& config) {
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("config key ") + e.what());
  }
}

}  // namespace

sim::ExperimentConfig parse_config(std::istream& in) {
  sim::ExperimentConfig config;
  for_each_pair(in, [&](const std::string& key, const std::string& value) {
    if (!apply_base_key(config, key, value))
      throw std::invalid_argument("unknown config key '" + key + "'");
  });
  validate_with_key_names(config);
  return config;
}

sim::ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  return parse_config(in);
}

std::string echo_config(const sim::ExperimentConfig& config) {
  std::ostringstream out;
  out << "n_peers=" << config.n_peers << '\n'
      << "alpha=" << format_double(config.alpha) << '\n'
      << "total_transactions=" << config.total_transactions << '\n'
      << "responder_fraction=" << format_double(config.responder_fraction) << '\n'
      << "resource_min=" << config.resource_min << '\n'
      << "resource_max=" << config.resource_max << '\n'
      << "model=" << sim::to_string(config.model) << '\n'
      << "fr_fraction=" << format_double(config.fr_fraction) << '\n'
      << "bandwidth=" << sim::to_string(config.bandwidth) << '\n'
      << "policy=" << sim::to_string(config.policy) << '\n'
      << "epoch_size=" << config.epoch_size << '\n'
      << "seed=" << config.seed << '\n';
  return out.str();
}

SweepSpec parse_sweep(std::istream& in) {
  SweepSpec spec;
  bool saw_models = false, saw_alphas = false, saw_frs = false,
       saw_policies = false, saw_seeds = false;
  for_each_pair(in, [&](const std::string& key, const std::string& value) {
    if (key == "models") {
      saw_models = true;
      for (const auto& item : split_list(value))
        spec.models.push_back(parse_model(key, item));
    } else if (key == "alphas") {
      saw_alphas = true;
      for (const auto& item : split_list(value))
        spec.alphas.push_back(parse_real(key, item));
    } else if (key == "fr_fractions") {
      saw_frs = true;
      for (const auto& item : split_list(value))
        spec.fr_fractions.push_back(parse_real(key, item));
    } else if (key == "policies") {
      saw_policies = true;
      for (const auto& item : split_list(value))
        spec.policies.push_back(parse_policy(key, item));
    } else if (key == "seeds") {
      saw_seeds = true;
      for (const auto& item : split_list(value))
        spec.seeds.push_back(parse_u64(key, item));
    } else if (!apply_base_key(spec.base, key, value)) {
      throw std::invalid_argument("unknown sweep key '" + key + "'");
    }
  });
  if (saw_models && spec.models.empty())
    throw std::invalid_argument("sweep key 'models' lists no values");
  if (saw_alphas && spec.alphas.empty())
    throw std::invalid_argument("sweep key 'alphas' lists no values");
  if (saw_frs && spec.fr_fractions.empty())
    throw std::invalid_argument("sweep key 'fr_fractions' lists no values");
  if (saw_policies && spec.policies.empty())
    throw std::invalid_argument("sweep key 'policies' lists no values");
  if (saw_seeds && spec.seeds.empty())
    throw std::invalid_argument("sweep key 'seeds' lists no values");
  if (spec.models.empty()) spec.models.push_back(spec.base.model);
  if (spec.alphas.empty()) spec.alphas.push_back(spec.base.alpha);
  if (spec.fr_fractions.empty()) spec.fr_fractions.push_back(spec.base.fr_fraction);
  if (spec.policies.empty()) spec.policies.push_back(spec.base.policy);
  return spec;
}

SweepSpec parse_sweep_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open sweep file " + path);
  return parse_sweep(in);
}

std::vector<sim::ExperimentConfig> expand_sweep(const SweepSpec& spec) {
  std::vector<sim::ExperimentConfig> cells;
  std::size_t index = 0;
  for (const auto model : spec.models)
    for (const double alpha : spec.alphas)
      for (const double fr : spec.fr_fractions)
        for (const auto policy : spec.policies) {
          if (spec.seeds.empty()) {
            sim::ExperimentConfig cell = spec.base;
            cell.model = model;
            cell.alpha = alpha;
            cell.fr_fraction = fr;
            cell.policy = policy;
            cell.seed = spec.base.seed + index++;
            cells.push_back(cell);
          } else {
            for (const std::uint64_t seed : spec.seeds) {
              sim::ExperimentConfig cell = spec.base;
              cell.model = model;
              cell.alpha = alpha;
              cell.fr_fraction = fr;
              cell.policy = policy;
              cell.seed = seed;
              cells.push_back(cell);
              ++index;
            }
          }
        }
  for (const auto& cell : cells) cell.validate();
  return cells;
}

}  // namespace sbci::config
