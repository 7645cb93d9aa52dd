#pragma once

#include <utility>

#include "fmarl/env.hpp"

namespace fmarl {

enum class BaselineKind { fixed, greedy, random, exhaustive };

// Deterministic tiling: scan APs in id order, group each ungrouped AP with
// up to max_cluster_size - 1 ungrouped neighbours, nearest id first. Always
// a full partition into neighbour-connected clusters.
ClusterAssignment fixed_scheme(const NetworkTopology& topo,
                               const TopologyConfig& cfg);

// Repeatedly commits the cluster merge with the largest positive marginal
// global-reward gain on the current world (unit fading, model-based) until
// no merge helps or the size cap binds. Deterministic scan order.
ClusterAssignment greedy_clustering(const WorldState& world,
                                    const NetworkTopology& topo,
                                    const TopologyConfig& cfg,
                                    const ChannelConfig& ch, RewardMode mode,
                                    double cell_edge_ratio,
                                    double slot_budget);

// Enumerates every partition into neighbour-connected clusters within the
// size cap (each reachable through some handshake joint action) and returns
// the reward maximizer, ties broken lexicographically. Guarded to <= 7 APs.
std::pair<ClusterAssignment, double> exhaustive_oracle(
    const WorldState& world, const NetworkTopology& topo,
    const TopologyConfig& cfg, const ChannelConfig& ch, RewardMode mode,
    double cell_edge_ratio, double slot_budget);

// All connected-cluster partitions the oracle considers, in enumeration
// order (exposed for tests).
std::vector<ClusterAssignment> enumerate_partitions(const NetworkTopology& topo,
                                                    const TopologyConfig& cfg);

// Uniform draw over each AP's enumerated action list.
JointAction random_policy(Rng& rng, const NetworkTopology& topo,
                          const TopologyConfig& cfg);

// A joint action whose handshake resolution reproduces `assignment` exactly:
// every AP requests its cluster mates among its neighbours.
JointAction action_for_assignment(const ClusterAssignment& assignment,
                                  const NetworkTopology& topo,
                                  const TopologyConfig& cfg);

// Global reward of a candidate assignment on a frozen world (unit fading).
double assignment_reward(const WorldState& world,
                         const ClusterAssignment& assignment,
                         const NetworkTopology& topo, const ChannelConfig& ch,
                         RewardMode mode, double cell_edge_ratio,
                         double slot_budget);

struct BaselineStats {
  double mean = 0.0;
  double stddev = 0.0;
  int worlds = 0;
};

// Mean/sigma of the per-world global reward of a baseline policy over
// independently sampled worlds.
BaselineStats evaluate_baseline(BaselineKind kind, const Environment& env,
                                int n_worlds, std::uint64_t seed);

}  // namespace fmarl
