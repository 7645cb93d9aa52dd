#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fmarl/env.hpp"
#include "fmarl/federation.hpp"
#include "fmarl/info_model.hpp"
#include "fmarl/learner.hpp"

#include <json.hpp>

namespace fmarl {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ApproxConfig {
  ApproxKind kind = ApproxKind::linear;
  std::vector<int> hidden = {32, 32};  // mlp only
};

struct ExperimentConfig {
  TopologyConfig topology;
  ChannelConfig channel;
  TrafficConfig traffic;
  ObservationConfig observation;
  LearnerConfig learner{.use_baseline = true};
  ApproxConfig approx;
  FederationConfig federation;

  RewardMode reward_mode = RewardMode::cell_edge_sum_rate;
  double cell_edge_ratio = 0.7;
  double area_margin = 20.0;

  std::uint64_t seed = 42;
  long total_steps = 200000;
  long eval_every = 1000;
  // Critic/average-reward estimates run alone for this many steps before the
  // first actor update, so policies start moving against settled values
  // instead of the initial ramp.
  long actor_warmup = 5000;
  bool episodic = false;  // non-episodic by default; drives the learner mode
  long episodic_horizon = 512;
  bool plateau_stop = false;
  long plateau_window = 20000;
  long plateau_probe = 1000;

  EnvConfig env_config() const;
  void validate() const;  // throws ConfigError
};

nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& cfg, const std::string& path);

// FNV-1a over the canonical (sorted-key) JSON dump; ties checkpoints to the
// configuration that produced them.
std::uint64_t config_hash(const ExperimentConfig& cfg);

// InfoParams live either at the top level of a params file or under an
// "info" section of a full experiment config file.
InfoParams info_params_from_json(const nlohmann::json& j);
InfoParams load_info_params(const std::string& path);
nlohmann::json to_json(const InfoParams& p);

}  // namespace fmarl
