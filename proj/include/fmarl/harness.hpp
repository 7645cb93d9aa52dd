#pragma once

#include <filesystem>

#include "fmarl/checkpoint.hpp"
#include "fmarl/config.hpp"
#include "fmarl/metrics.hpp"

namespace fmarl {

// In-memory result of a training run.
struct RunSummary {
  std::vector<MetricsRow> rows;
  std::vector<SyncEvent> syncs;
  long steps_run = 0;
  Checkpoint final_checkpoint;

  // Mean global reward over the trailing `fraction` of recorded steps.
  double final_reward_mean(double fraction = 0.1) const;
};

// Executes the federated actor-critic training loop: observe, sample local
// actions, resolve the joint action, step the environment, apply the
// mode-appropriate critic/average-reward/actor updates per agent, and run
// the federation sync on its schedule. Fully determined by (config, seed).
RunSummary run_training(const ExperimentConfig& cfg);

// run_training plus the output directory contract: metrics.csv, sync.csv,
// checkpoint.bin and config.json (resolved) under out_dir.
RunSummary run_experiment(const ExperimentConfig& cfg,
                          const std::filesystem::path& out_dir);

// Mean global reward of the uniform-random policy under the same seed
// derivation as run_training.
double random_policy_mean_reward(const ExperimentConfig& cfg, long steps);

// Learner-facing action layout. Model outputs are indexed by slots whose
// meaning is geometric rather than per-AP: slot 0 is the no-op, the next
// block singleton requests keyed by the neighbour's hex bearing, the block
// after that adjacent-bearing pairs. Each AP realizes the slots it can and
// masks the rest, so federated (shared) parameters mean the same thing on
// every agent.
struct ActionTables {
  int n_slots = 0;
  std::vector<ActionSet> per_ap;               // spec enumeration order
  std::vector<std::vector<int>> slot_request;  // per AP: slot -> action, -1
  std::vector<VectorXd> mask;                  // per AP, length n_slots
};

ActionTables build_action_tables(const NetworkTopology& topo,
                                 const TopologyConfig& cfg);

// Index of the canonical hex bearing (30 + 60k degrees) pointing from `ap`
// toward `neighbor`.
int bearing_slot(const NetworkTopology& topo, int ap, int neighbor);

// Builds the initial agent set for a config (exposed for checkpoints/tests).
std::vector<AgentLearner> make_agents(const ExperimentConfig& cfg,
                                      const Environment& env);
Checkpoint checkpoint_from_agents(const std::vector<AgentLearner>& agents,
                                  std::uint64_t cfg_hash);

}  // namespace fmarl
