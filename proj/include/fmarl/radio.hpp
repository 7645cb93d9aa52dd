#pragma once

#include <Eigen/Core>

#include "fmarl/world.hpp"

namespace fmarl {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Small-scale power gains beta, one row per AP and one column per user.
// Unit fading is the all-ones field; Rayleigh draws unit-mean exponential
// power gains, redrawn every slot.
MatrixXd draw_fading(const ChannelConfig& ch, int n_aps, int n_users,
                     Rng& rng);

// tx_power * max(d, kMinDistance)^-alpha
double received_power(const ChannelConfig& ch, double distance);

enum class RewardMode { cell_edge_sum_rate, served_demand };

// The serving cluster of a user is the cluster of the AP with the largest
// received power (fading included) at the user.
int strongest_ap(const Vector2d& user_pos, int user_idx,
                 const NetworkTopology& topo, const ChannelConfig& ch,
                 const MatrixXd& fading);

// Linear SINR per the joint-transmission model: serving-cluster power over
// the power of every other AP plus noise.
double compute_sinr(const Vector2d& user_pos, int user_idx,
                    const ClusterAssignment& assignment,
                    const NetworkTopology& topo, const ChannelConfig& ch,
                    const MatrixXd& fading);

struct ServiceReport {
  VectorXd rate;        // per user, log2(1 + SINR)
  VectorXd qos;         // per user, per the active reward mode
  VectorXd per_ap;      // reward decomposition; per_ap.sum() == global
  double global = 0.0;  // sum of qos over all users
};

// Rates, per-user QoS and the geometric reward decomposition. Each covered
// user's QoS is split equally among the APs whose effective region covers
// it; a user outside every region is accounted to its nearest AP so the
// per-AP rewards always sum to the global reward exactly.
ServiceReport evaluate_service(const WorldState& world,
                               const NetworkTopology& topo,
                               const ChannelConfig& ch, const MatrixXd& fading,
                               RewardMode mode, double cell_edge_ratio,
                               double slot_budget);

struct RewardDecomposition {
  double global = 0.0;
  VectorXd per_ap;
};

RewardDecomposition decompose_reward(const WorldState& world,
                                     const NetworkTopology& topo,
                                     const ChannelConfig& ch,
                                     const MatrixXd& fading, RewardMode mode,
                                     double cell_edge_ratio,
                                     double slot_budget);

}  // namespace fmarl
