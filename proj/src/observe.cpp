#include "fmarl/observe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fmarl {

void ObservationConfig::validate() const {
  if (grid_size < 1 || n_sectors < 1 || n_rings < 1)
    throw std::invalid_argument("observation: dimensions must be >= 1");
}

Observation observe(const WorldState& world, const NetworkTopology& topo,
                    int ap, const ObservationConfig& cfg) {
  if (ap < 0 || ap >= topo.n_aps())
    throw std::invalid_argument("observe: no such access-point");
  cfg.validate();

  const Vector2d center = topo.position(ap);
  const double radius = topo.effective_radius;
  const int g = cfg.grid_size;
  const double cell = 2.0 * radius / g;

  Observation obs;
  obs.user_grid = Eigen::MatrixXd::Zero(g, g);
  obs.ap_grid = Eigen::MatrixXd::Zero(g, g);
  obs.compact = Eigen::VectorXd::Zero(cfg.compact_dim());

  auto cell_index = [&](const Vector2d& p, int& row, int& col) {
    Vector2d d = p - center;
    if (std::abs(d.x()) > radius || std::abs(d.y()) > radius) return false;
    col = std::clamp(static_cast<int>((d.x() + radius) / cell), 0, g - 1);
    row = std::clamp(static_cast<int>((d.y() + radius) / cell), 0, g - 1);
    return true;
  };

  for (const UserState& u : world.users) {
    int row, col;
    if (cell_index(u.position, row, col)) obs.user_grid(row, col) += 1.0;

    Vector2d d = u.position - center;
    double dist = d.norm();
    if (dist <= radius) {
      double angle = std::atan2(d.y(), d.x());  // [-pi, pi]
      int sector = std::clamp(
          static_cast<int>((angle + 3.14159265358979323846) /
                           (2.0 * 3.14159265358979323846) * cfg.n_sectors),
          0, cfg.n_sectors - 1);
      int ring = std::clamp(static_cast<int>(dist / (radius / cfg.n_rings)), 0,
                            cfg.n_rings - 1);
      obs.compact(sector * cfg.n_rings + ring) += 1.0;
    }
  }

  double max_count = obs.user_grid.maxCoeff();
  if (max_count > 0.0) obs.user_grid /= max_count;

  for (int nb : topo.neighbors[static_cast<std::size_t>(ap)]) {
    int row, col;
    if (cell_index(topo.position(nb), row, col)) obs.ap_grid(row, col) = 1.0;
  }
  return obs;
}

}  // namespace fmarl
