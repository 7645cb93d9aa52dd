#pragma once

#include <Eigen/Core>
#include <vector>

namespace fmarl {

using Eigen::Vector2d;

enum class PairRestriction { adjacent_pairs_only, all_pairs };
enum class FadingModel { unit, rayleigh };

struct TopologyConfig {
  int rows = 4;
  int cols = 5;
  double spacing_x = 44.3;  // gap between adjacent columns (m)
  double spacing_y = 52.0;  // gap within a column (m)
  int max_cluster_size = 3;
  double effective_threshold = 5.95e-7;  // received-power cutoff (W)
  PairRestriction pair_restriction = PairRestriction::adjacent_pairs_only;

  void validate() const;  // throws std::invalid_argument
};

struct ChannelConfig {
  double tx_power = 1.0;           // W, uniform across access-points
  double pathloss_exponent = 4.0;  // >= 2
  double noise_power = 1e-9;       // W
  FadingModel fading = FadingModel::unit;

  void validate() const;
};

// Path-loss distances are clamped below this to avoid the d -> 0 singularity.
inline constexpr double kMinDistance = 0.5;

// Hex lattice realized as a rectangular grid with alternate columns shifted
// by half the column spacing. Interior access-points end up with exactly six
// neighbours under the 1.2 x min-spacing rule.
struct NetworkTopology {
  Eigen::Matrix2Xd positions;               // one column per access-point
  std::vector<std::vector<int>> neighbors;  // sorted ids, symmetric
  double effective_radius = 0.0;            // m, derived from the threshold

  int n_aps() const { return static_cast<int>(positions.cols()); }
  Vector2d position(int ap) const { return positions.col(ap); }
  bool are_neighbors(int a, int b) const;
};

NetworkTopology build_topology(const TopologyConfig& cfg,
                               const ChannelConfig& ch);

// Radius r solving tx_power * r^-alpha = threshold.
double effective_radius(const ChannelConfig& ch, double threshold);

// Topology restricted to `keep` (ascending ids), densely re-indexed.
NetworkTopology subtopology(const NetworkTopology& topo,
                            const std::vector<int>& keep);

struct EffectiveRegion {
  Vector2d center;
  double radius = 0.0;

  // Unsatisfiable when the radius falls below the path-loss distance clamp.
  bool empty() const { return radius < kMinDistance; }
  bool contains(const Vector2d& p) const {
    return !empty() && (p - center).norm() <= radius;
  }
};

EffectiveRegion effective_region(const NetworkTopology& topo, int ap);

}  // namespace fmarl
