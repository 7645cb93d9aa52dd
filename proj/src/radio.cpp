#include "fmarl/radio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fmarl {

MatrixXd draw_fading(const ChannelConfig& ch, int n_aps, int n_users,
                     Rng& rng) {
  if (ch.fading == FadingModel::unit)
    return MatrixXd::Ones(n_aps, n_users);
  MatrixXd beta(n_aps, n_users);
  for (int u = 0; u < n_users; ++u)
    for (int i = 0; i < n_aps; ++i) beta(i, u) = rng.exponential();
  return beta;
}

double received_power(const ChannelConfig& ch, double distance) {
  return ch.tx_power *
         std::pow(std::max(distance, kMinDistance), -ch.pathloss_exponent);
}

int strongest_ap(const Vector2d& user_pos, int user_idx,
                 const NetworkTopology& topo, const ChannelConfig& ch,
                 const MatrixXd& fading) {
  int best = 0;
  double best_power = -1.0;
  for (int i = 0; i < topo.n_aps(); ++i) {
    double p = fading(i, user_idx) *
               received_power(ch, (user_pos - topo.position(i)).norm());
    if (p > best_power) {
      best_power = p;
      best = i;
    }
  }
  return best;
}

double compute_sinr(const Vector2d& user_pos, int user_idx,
                    const ClusterAssignment& assignment,
                    const NetworkTopology& topo, const ChannelConfig& ch,
                    const MatrixXd& fading) {
  const int serving_cluster =
      assignment
          .cluster_of[static_cast<std::size_t>(strongest_ap(
              user_pos, user_idx, topo, ch, fading))];
  double signal = 0.0, interference = 0.0;
  for (int i = 0; i < topo.n_aps(); ++i) {
    double p = fading(i, user_idx) *
               received_power(ch, (user_pos - topo.position(i)).norm());
    if (assignment.cluster_of[static_cast<std::size_t>(i)] == serving_cluster)
      signal += p;
    else
      interference += p;
  }
  return signal / (interference + ch.noise_power);
}

ServiceReport evaluate_service(const WorldState& world,
                               const NetworkTopology& topo,
                               const ChannelConfig& ch, const MatrixXd& fading,
                               RewardMode mode, double cell_edge_ratio,
                               double slot_budget) {
  const int n_users = world.n_users();
  const int n_aps = topo.n_aps();
  ServiceReport rep;
  rep.rate = VectorXd::Zero(n_users);
  rep.qos = VectorXd::Zero(n_users);
  rep.per_ap = VectorXd::Zero(n_aps);
  if (n_users == 0) return rep;

  // Received powers and squared distances, one pass; everything below reuses
  // them. This is the per-slot hot path.
  const double half_alpha = ch.pathloss_exponent / 2.0;
  const double min_d2 = kMinDistance * kMinDistance;
  MatrixXd d2(n_aps, n_users), power(n_aps, n_users);
  for (int u = 0; u < n_users; ++u) {
    const Vector2d& pos = world.users[static_cast<std::size_t>(u)].position;
    for (int i = 0; i < n_aps; ++i) {
      double dd = std::max((pos - topo.position(i)).squaredNorm(), min_d2);
      d2(i, u) = dd;
      power(i, u) = ch.tx_power * fading(i, u) * std::pow(dd, -half_alpha);
    }
  }

  const double edge_d2 =
      cell_edge_ratio * cell_edge_ratio * topo.effective_radius *
      topo.effective_radius;
  const double region_d2 = topo.effective_radius * topo.effective_radius;

  for (int u = 0; u < n_users; ++u) {
    int anchor = 0;
    power.col(u).maxCoeff(&anchor);
    const int serving_cluster =
        world.assignment.cluster_of[static_cast<std::size_t>(anchor)];
    double signal = 0.0;
    for (int i = 0; i < n_aps; ++i)
      if (world.assignment.cluster_of[static_cast<std::size_t>(i)] ==
          serving_cluster)
        signal += power(i, u);
    double interference = power.col(u).sum() - signal;
    double sinr = signal / (interference + ch.noise_power);
    rep.rate(u) = std::log2(1.0 + sinr);

    switch (mode) {
      case RewardMode::cell_edge_sum_rate: {
        bool true_d2_anchor = (world.users[static_cast<std::size_t>(u)].position -
                               topo.position(anchor))
                                  .squaredNorm() > edge_d2;
        rep.qos(u) = true_d2_anchor ? rep.rate(u) : 0.0;
        break;
      }
      case RewardMode::served_demand:
        rep.qos(u) = std::min(
            rep.rate(u) * slot_budget,
            world.users[static_cast<std::size_t>(u)].demand_remaining);
        break;
    }
    rep.global += rep.qos(u);

    // Effective-region covering set; nearest AP as fallback keeps the
    // decomposition summing to the global value for uncovered users.
    int cover_count = 0;
    for (int i = 0; i < n_aps; ++i)
      if (d2(i, u) <= region_d2) ++cover_count;
    if (cover_count == 0) {
      int nearest = 0;
      d2.col(u).minCoeff(&nearest);
      rep.per_ap(nearest) += rep.qos(u);
    } else {
      double w = rep.qos(u) / cover_count;
      for (int i = 0; i < n_aps; ++i)
        if (d2(i, u) <= region_d2) rep.per_ap(i) += w;
    }
  }
  return rep;
}

RewardDecomposition decompose_reward(const WorldState& world,
                                     const NetworkTopology& topo,
                                     const ChannelConfig& ch,
                                     const MatrixXd& fading, RewardMode mode,
                                     double cell_edge_ratio,
                                     double slot_budget) {
  ServiceReport rep = evaluate_service(world, topo, ch, fading, mode,
                                       cell_edge_ratio, slot_budget);
  return RewardDecomposition{rep.global, std::move(rep.per_ap)};
}

}  // namespace fmarl
