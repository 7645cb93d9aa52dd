#include "fmarl/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fmarl {

void TrafficConfig::validate() const {
  if (n_users < 0) throw std::invalid_argument("traffic: n_users must be >= 0");
  if (n_users > 0 && n_clusters < 1)
    throw std::invalid_argument("traffic: n_clusters must be >= 1");
  if (cluster_radius < 0.0)
    throw std::invalid_argument("traffic: cluster_radius must be >= 0");
  if (demand < 0.0) throw std::invalid_argument("traffic: demand must be >= 0");
  if (slot_budget <= 0.0)
    throw std::invalid_argument("traffic: slot_budget must be > 0");
}

Vector2d Area::clip(Vector2d p) const {
  p.x() = std::clamp(p.x(), x0, x1);
  p.y() = std::clamp(p.y(), y0, y1);
  return p;
}

Area serving_area(const NetworkTopology& topo, double margin) {
  Area a;
  a.x0 = topo.positions.row(0).minCoeff() - margin;
  a.x1 = topo.positions.row(0).maxCoeff() + margin;
  a.y0 = topo.positions.row(1).minCoeff() - margin;
  a.y1 = topo.positions.row(1).maxCoeff() + margin;
  return a;
}

std::vector<UserState> sample_users(Rng& rng, const Area& area, int n_users,
                                    int n_clusters, double cluster_radius,
                                    double demand) {
  if (n_users < 0 || (n_users > 0 && n_clusters < 1))
    throw std::invalid_argument("sample_users: bad counts");

  std::vector<Vector2d> parents;
  parents.reserve(static_cast<std::size_t>(n_clusters));
  for (int c = 0; c < n_clusters; ++c)
    parents.emplace_back(rng.uniform(area.x0, area.x1),
                         rng.uniform(area.y0, area.y1));

  std::vector<UserState> users;
  users.reserve(static_cast<std::size_t>(n_users));
  for (int u = 0; u < n_users; ++u) {
    int parent = static_cast<int>(rng.index(static_cast<std::size_t>(n_clusters)));
    double r = cluster_radius * std::sqrt(rng.uniform());
    double phi = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    Vector2d pos = parents[static_cast<std::size_t>(parent)] +
                   r * Vector2d(std::cos(phi), std::sin(phi));
    users.push_back(UserState{area.clip(pos), demand, 0, parent});
  }
  return users;
}

WorldState make_world(std::uint64_t seed, const Area& area,
                      const TrafficConfig& traffic, int n_aps) {
  traffic.validate();
  WorldState w;
  w.rng = Rng(seed);
  w.users = sample_users(w.rng, area, traffic.n_users, traffic.n_clusters,
                         traffic.cluster_radius, traffic.demand);
  w.assignment = ClusterAssignment::singletons(n_aps);
  return w;
}

}  // namespace fmarl
