#pragma once

#include <Eigen/Core>

#include "fmarl/world.hpp"

namespace fmarl {

struct ObservationConfig {
  int grid_size = 16;  // G x G cells
  int n_sectors = 8;
  int n_rings = 2;

  int compact_dim() const { return n_sectors * n_rings; }
  void validate() const;
};

// Egocentric picture of one AP's surroundings. The grids cover the square
// circumscribing the effective region; user intensities are cell counts
// normalized by the maximum cell count, the AP channel marks the cells of
// topological neighbours. The compact vector holds raw user counts per
// angular sector and radial ring inside the effective region, for linear
// approximators.
struct Observation {
  Eigen::MatrixXd user_grid;
  Eigen::MatrixXd ap_grid;
  Eigen::VectorXd compact;
};

Observation observe(const WorldState& world, const NetworkTopology& topo,
                    int ap, const ObservationConfig& cfg);

}  // namespace fmarl
