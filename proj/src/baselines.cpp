#include "fmarl/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fmarl {

ClusterAssignment fixed_scheme(const NetworkTopology& topo,
                               const TopologyConfig& cfg) {
  const int n = topo.n_aps();
  ClusterAssignment out = ClusterAssignment::singletons(n);
  std::vector<bool> grouped(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    if (grouped[static_cast<std::size_t>(i)]) continue;
    grouped[static_cast<std::size_t>(i)] = true;
    int taken = 1;
    for (int nb : topo.neighbors[static_cast<std::size_t>(i)]) {
      if (taken >= cfg.max_cluster_size) break;
      if (grouped[static_cast<std::size_t>(nb)]) continue;
      grouped[static_cast<std::size_t>(nb)] = true;
      out.cluster_of[static_cast<std::size_t>(nb)] = i;
      ++taken;
    }
  }
  return out;
}

double assignment_reward(const WorldState& world,
                         const ClusterAssignment& assignment,
                         const NetworkTopology& topo, const ChannelConfig& ch,
                         RewardMode mode, double cell_edge_ratio,
                         double slot_budget) {
  WorldState probe = world;
  probe.assignment = assignment;
  MatrixXd unit = MatrixXd::Ones(topo.n_aps(), probe.n_users());
  return evaluate_service(probe, topo, ch, unit, mode, cell_edge_ratio,
                          slot_budget)
      .global;
}

namespace {

// Merge two clusters when a neighbour edge crosses them and the cap holds.
bool mergeable(const ClusterAssignment& a, const NetworkTopology& topo,
               const TopologyConfig& cfg, int c1, int c2) {
  auto m1 = a.members(c1);
  auto m2 = a.members(c2);
  if (static_cast<int>(m1.size() + m2.size()) > cfg.max_cluster_size)
    return false;
  for (int x : m1)
    for (int y : m2)
      if (topo.are_neighbors(x, y)) return true;
  return false;
}

ClusterAssignment merged(const ClusterAssignment& a, int c1, int c2) {
  ClusterAssignment out = a;
  int keep = std::min(c1, c2), drop = std::max(c1, c2);
  for (int& c : out.cluster_of)
    if (c == drop) c = keep;
  return out;
}

std::vector<int> cluster_ids(const ClusterAssignment& a) {
  std::vector<int> ids;
  for (int i = 0; i < a.n_aps(); ++i)
    if (a.cluster_of[static_cast<std::size_t>(i)] == i) ids.push_back(i);
  return ids;
}

}  // namespace

ClusterAssignment greedy_clustering(const WorldState& world,
                                    const NetworkTopology& topo,
                                    const TopologyConfig& cfg,
                                    const ChannelConfig& ch, RewardMode mode,
                                    double cell_edge_ratio,
                                    double slot_budget) {
  ClusterAssignment current = ClusterAssignment::singletons(topo.n_aps());
  double current_reward = assignment_reward(world, current, topo, ch, mode,
                                            cell_edge_ratio, slot_budget);
  constexpr double kGainTolerance = 1e-12;

  while (true) {
    double best_gain = kGainTolerance;
    ClusterAssignment best = current;
    auto ids = cluster_ids(current);
    for (std::size_t a = 0; a < ids.size(); ++a) {
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        if (!mergeable(current, topo, cfg, ids[a], ids[b])) continue;
        ClusterAssignment candidate = merged(current, ids[a], ids[b]);
        double gain = assignment_reward(world, candidate, topo, ch, mode,
                                        cell_edge_ratio, slot_budget) -
                      current_reward;
        if (gain > best_gain) {
          best_gain = gain;
          best = candidate;
        }
      }
    }
    if (best_gain <= kGainTolerance) break;
    current = best;
    current_reward += best_gain;
  }
  return current;
}

namespace {

bool subset_connected(const NetworkTopology& topo,
                      const std::vector<int>& subset) {
  if (subset.size() <= 1) return true;
  std::vector<int> stack{subset[0]};
  std::vector<bool> seen(subset.size(), false);
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    for (std::size_t k = 0; k < subset.size(); ++k) {
      if (!seen[k] && topo.are_neighbors(cur, subset[k])) {
        seen[k] = true;
        ++reached;
        stack.push_back(subset[k]);
      }
    }
  }
  return reached == subset.size();
}

// Connected subsets (within the size cap) of `pool` that contain pool[0].
// Pool sizes are tiny, so plain bitmask enumeration is fine.
void connected_subsets(const NetworkTopology& topo, const std::vector<int>& pool,
                       int max_size, std::vector<std::vector<int>>& out) {
  const std::size_t rest = pool.size() - 1;
  for (std::size_t mask = 0; mask < (std::size_t{1} << rest); ++mask) {
    std::vector<int> subset{pool[0]};
    for (std::size_t k = 0; k < rest; ++k)
      if (mask & (std::size_t{1} << k)) subset.push_back(pool[k + 1]);
    if (static_cast<int>(subset.size()) > max_size) continue;
    if (subset_connected(topo, subset)) out.push_back(std::move(subset));
  }
}

void enumerate_rec(const NetworkTopology& topo, const TopologyConfig& cfg,
                   std::vector<int>& pool, ClusterAssignment& partial,
                   std::vector<ClusterAssignment>& out) {
  if (pool.empty()) {
    out.push_back(partial);
    return;
  }
  std::vector<std::vector<int>> subsets;
  connected_subsets(topo, pool, cfg.max_cluster_size, subsets);
  int anchor = pool[0];
  for (const auto& subset : subsets) {
    std::vector<int> rest;
    for (int x : pool)
      if (std::find(subset.begin(), subset.end(), x) == subset.end())
        rest.push_back(x);
    for (int x : subset)
      partial.cluster_of[static_cast<std::size_t>(x)] = anchor;
    enumerate_rec(topo, cfg, rest, partial, out);
    for (int x : subset)
      partial.cluster_of[static_cast<std::size_t>(x)] = x;
  }
}

}  // namespace

std::vector<ClusterAssignment> enumerate_partitions(const NetworkTopology& topo,
                                                    const TopologyConfig& cfg) {
  if (topo.n_aps() > 7)
    throw std::invalid_argument("exhaustive enumeration limited to 7 APs");
  std::vector<int> pool(static_cast<std::size_t>(topo.n_aps()));
  for (int i = 0; i < topo.n_aps(); ++i) pool[static_cast<std::size_t>(i)] = i;
  ClusterAssignment partial = ClusterAssignment::singletons(topo.n_aps());
  std::vector<ClusterAssignment> out;
  enumerate_rec(topo, cfg, pool, partial, out);
  return out;
}

std::pair<ClusterAssignment, double> exhaustive_oracle(
    const WorldState& world, const NetworkTopology& topo,
    const TopologyConfig& cfg, const ChannelConfig& ch, RewardMode mode,
    double cell_edge_ratio, double slot_budget) {
  auto partitions = enumerate_partitions(topo, cfg);
  ClusterAssignment best = partitions.front();
  double best_reward = assignment_reward(world, best, topo, ch, mode,
                                         cell_edge_ratio, slot_budget);
  for (std::size_t i = 1; i < partitions.size(); ++i) {
    double r = assignment_reward(world, partitions[i], topo, ch, mode,
                                 cell_edge_ratio, slot_budget);
    if (r > best_reward ||
        (r == best_reward && partitions[i].cluster_of < best.cluster_of)) {
      best_reward = r;
      best = partitions[i];
    }
  }
  return {best, best_reward};
}

JointAction random_policy(Rng& rng, const NetworkTopology& topo,
                          const TopologyConfig& cfg) {
  JointAction joint;
  joint.requests.reserve(static_cast<std::size_t>(topo.n_aps()));
  for (int i = 0; i < topo.n_aps(); ++i) {
    ActionSet actions = enumerate_actions(topo, i, cfg);
    joint.requests.push_back(actions[rng.index(actions.size())]);
  }
  return joint;
}

JointAction action_for_assignment(const ClusterAssignment& assignment,
                                  const NetworkTopology& topo,
                                  const TopologyConfig& cfg) {
  JointAction joint = JointAction::no_op(topo.n_aps());
  for (int i = 0; i < topo.n_aps(); ++i) {
    auto mates =
        assignment.members(assignment.cluster_of[static_cast<std::size_t>(i)]);
    for (int mate : mates) {
      if (mate == i || !topo.are_neighbors(i, mate)) continue;
      auto& req = joint.requests[static_cast<std::size_t>(i)];
      if (static_cast<int>(req.size()) < cfg.max_cluster_size - 1)
        req.push_back(mate);
    }
  }
  return joint;
}

BaselineStats evaluate_baseline(BaselineKind kind, const Environment& env,
                                int n_worlds, std::uint64_t seed) {
  const auto& cfg = env.config();
  const NetworkTopology& topo = env.topology();

  std::vector<double> rewards;
  rewards.reserve(static_cast<std::size_t>(n_worlds));
  for (int w = 0; w < n_worlds; ++w) {
    WorldState world =
        env.make_world(derive_stream(seed, StreamTag::baseline, static_cast<std::uint64_t>(w)));
    Rng policy_rng(derive_stream(seed, StreamTag::agent_policy,
                                 static_cast<std::uint64_t>(w)));
    ClusterAssignment assignment = ClusterAssignment::singletons(topo.n_aps());
    switch (kind) {
      case BaselineKind::fixed:
        assignment = fixed_scheme(topo, cfg.topology);
        break;
      case BaselineKind::greedy:
        assignment = greedy_clustering(world, topo, cfg.topology, cfg.channel,
                                       cfg.reward_mode, cfg.cell_edge_ratio,
                                       cfg.traffic.slot_budget);
        break;
      case BaselineKind::exhaustive:
        assignment = exhaustive_oracle(world, topo, cfg.topology, cfg.channel,
                                       cfg.reward_mode, cfg.cell_edge_ratio,
                                       cfg.traffic.slot_budget)
                         .first;
        break;
      case BaselineKind::random: {
        JointAction joint = random_policy(policy_rng, topo, cfg.topology);
        assignment = resolve_handshake(joint, topo, cfg.topology);
        break;
      }
    }
    rewards.push_back(assignment_reward(world, assignment, topo, cfg.channel,
                                        cfg.reward_mode, cfg.cell_edge_ratio,
                                        cfg.traffic.slot_budget));
  }

  BaselineStats stats;
  stats.worlds = n_worlds;
  if (n_worlds == 0) return stats;
  double sum = 0.0;
  for (double r : rewards) sum += r;
  stats.mean = sum / n_worlds;
  double var = 0.0;
  for (double r : rewards) var += (r - stats.mean) * (r - stats.mean);
  stats.stddev = (n_worlds > 1) ? std::sqrt(var / (n_worlds - 1)) : 0.0;
  return stats;
}

}  // namespace fmarl
