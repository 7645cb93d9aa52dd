#pragma once

#include <cstdint>
#include <vector>

#include "fmarl/actions.hpp"
#include "fmarl/rng.hpp"
#include "fmarl/topology.hpp"

namespace fmarl {

struct TrafficConfig {
  int n_users = 160;
  int n_clusters = 10;           // PCP parent count
  double cluster_radius = 40.0;  // m, largest offset from a parent
  // Requested data per user. The default exceeds what the two-slot lifetime
  // can deliver at any achievable rate, so departures are age-driven and the
  // user process does not react to the cooperation policy.
  double demand = 50.0;
  double slot_budget = 1.0;  // delivered data per unit rate per slot

  void validate() const;
};

struct Area {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool contains(const Vector2d& p) const {
    return p.x() >= x0 && p.x() <= x1 && p.y() >= y0 && p.y() <= y1;
  }
  Vector2d clip(Vector2d p) const;
};

// Bounding box of the access-points expanded by `margin` on every side.
Area serving_area(const NetworkTopology& topo, double margin);

// Users live for two slots before the request times out, so age is 0 or 1
// for on-grid users.
inline constexpr int kUserLifetime = 2;

struct UserState {
  Vector2d position;
  double demand_remaining = 0.0;
  int age = 0;
  int parent_cluster = 0;
};

// Poisson-cluster-process draw: parents uniform in the area, each user
// uniform in a disc of radius <= cluster_radius around a uniformly chosen
// parent, clipped to the area. Fresh users carry full demand and age 0.
std::vector<UserState> sample_users(Rng& rng, const Area& area, int n_users,
                                    int n_clusters, double cluster_radius,
                                    double demand);

struct WorldState {
  long t = 0;
  std::vector<UserState> users;
  ClusterAssignment assignment;
  Rng rng;

  int n_users() const { return static_cast<int>(users.size()); }
};

WorldState make_world(std::uint64_t seed, const Area& area,
                      const TrafficConfig& traffic, int n_aps);

}  // namespace fmarl
