#include "fmarl/env.hpp"

#include <algorithm>

namespace fmarl {

void EnvConfig::validate() const {
  topology.validate();
  channel.validate();
  traffic.validate();
  observation.validate();
  if (cell_edge_ratio < 0.0 || cell_edge_ratio > 1.0)
    throw std::invalid_argument("env: cell_edge_ratio must be in [0, 1]");
  if (area_margin < 0.0)
    throw std::invalid_argument("env: area_margin must be >= 0");
}

StepResult step_world(WorldState& world, const JointAction& joint,
                      const NetworkTopology& topo, const TopologyConfig& cfg,
                      const ChannelConfig& ch, const TrafficConfig& traffic,
                      const Area& area, RewardMode mode,
                      double cell_edge_ratio) {
  joint.validate(topo, cfg);
  world.assignment = resolve_handshake(joint, topo, cfg);

  MatrixXd fading = draw_fading(ch, topo.n_aps(), world.n_users(), world.rng);
  ServiceReport rep = evaluate_service(world, topo, ch, fading, mode,
                                       cell_edge_ratio, traffic.slot_budget);

  for (int u = 0; u < world.n_users(); ++u) {
    UserState& user = world.users[static_cast<std::size_t>(u)];
    user.demand_remaining = std::max(
        0.0, user.demand_remaining - rep.rate(u) * traffic.slot_budget);
    user.age += 1;
  }

  std::erase_if(world.users, [](const UserState& u) {
    return u.age >= kUserLifetime || u.demand_remaining <= 0.0;
  });
  int missing = traffic.n_users - world.n_users();
  if (missing > 0) {
    auto fresh = sample_users(world.rng, area, missing,
                              std::min(traffic.n_clusters, missing),
                              traffic.cluster_radius, traffic.demand);
    world.users.insert(world.users.end(), fresh.begin(), fresh.end());
  }

  world.t += 1;
  return StepResult{rep.global, std::move(rep.per_ap)};
}

Environment::Environment(EnvConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  topo_ = build_topology(cfg_.topology, cfg_.channel);
  area_ = serving_area(topo_, cfg_.area_margin);
}

WorldState Environment::make_world(std::uint64_t seed) const {
  return fmarl::make_world(seed, area_, cfg_.traffic, topo_.n_aps());
}

void Environment::reset_users(WorldState& world) const {
  world.users =
      sample_users(world.rng, area_, cfg_.traffic.n_users,
                   cfg_.traffic.n_clusters, cfg_.traffic.cluster_radius,
                   cfg_.traffic.demand);
  world.assignment = ClusterAssignment::singletons(topo_.n_aps());
}

StepResult Environment::step(WorldState& world, const JointAction& joint) const {
  return step_world(world, joint, topo_, cfg_.topology, cfg_.channel,
                    cfg_.traffic, area_, cfg_.reward_mode,
                    cfg_.cell_edge_ratio);
}

Observation Environment::observe(const WorldState& world, int ap) const {
  return fmarl::observe(world, topo_, ap, cfg_.observation);
}

}  // namespace fmarl
