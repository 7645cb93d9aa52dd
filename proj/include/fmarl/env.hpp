#pragma once

#include "fmarl/observe.hpp"
#include "fmarl/radio.hpp"

namespace fmarl {

struct EnvConfig {
  TopologyConfig topology;
  ChannelConfig channel;
  TrafficConfig traffic;
  ObservationConfig observation;
  RewardMode reward_mode = RewardMode::cell_edge_sum_rate;
  double cell_edge_ratio = 0.7;  // of the effective radius
  double area_margin = 20.0;     // m beyond the AP bounding box

  void validate() const;
};

struct StepResult {
  double global_reward = 0.0;
  VectorXd per_ap_reward;
};

// One environment slot, in place:
//   resolve handshake -> draw fading -> rates and rewards -> serve demand ->
//   age users -> replace expired or satisfied users -> advance the clock.
// Never resets; all randomness flows from world.rng.
StepResult step_world(WorldState& world, const JointAction& joint,
                      const NetworkTopology& topo, const TopologyConfig& cfg,
                      const ChannelConfig& ch, const TrafficConfig& traffic,
                      const Area& area, RewardMode mode,
                      double cell_edge_ratio);

// Owns the static pieces (topology, configs, serving area); worlds stay
// separate values so independent rollouts can share one Environment.
class Environment {
 public:
  explicit Environment(EnvConfig cfg);

  const EnvConfig& config() const { return cfg_; }
  const NetworkTopology& topology() const { return topo_; }
  const Area& area() const { return area_; }

  WorldState make_world(std::uint64_t seed) const;
  void reset_users(WorldState& world) const;  // episodic restart, same rng
  StepResult step(WorldState& world, const JointAction& joint) const;
  Observation observe(const WorldState& world, int ap) const;

 private:
  EnvConfig cfg_;
  NetworkTopology topo_;
  Area area_;
};

}  // namespace fmarl
