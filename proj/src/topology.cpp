#include "fmarl/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fmarl {

void TopologyConfig::validate() const {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("topology: rows and cols must be >= 1");
  if (spacing_x <= 0.0 || spacing_y <= 0.0)
    throw std::invalid_argument("topology: spacings must be > 0");
  if (max_cluster_size < 1)
    throw std::invalid_argument("topology: max_cluster_size must be >= 1");
  if (effective_threshold <= 0.0)
    throw std::invalid_argument("topology: effective_threshold must be > 0");
}

void ChannelConfig::validate() const {
  if (tx_power <= 0.0)
    throw std::invalid_argument("channel: tx_power must be > 0");
  if (pathloss_exponent < 2.0)
    throw std::invalid_argument("channel: pathloss_exponent must be >= 2");
  if (noise_power <= 0.0)
    throw std::invalid_argument("channel: noise_power must be > 0");
}

double effective_radius(const ChannelConfig& ch, double threshold) {
  return std::pow(ch.tx_power / threshold, 1.0 / ch.pathloss_exponent);
}

bool NetworkTopology::are_neighbors(int a, int b) const {
  const auto& nb = neighbors[static_cast<std::size_t>(a)];
  return std::binary_search(nb.begin(), nb.end(), b);
}

NetworkTopology build_topology(const TopologyConfig& cfg,
                               const ChannelConfig& ch) {
  cfg.validate();
  ch.validate();

  const int n = cfg.rows * cfg.cols;
  NetworkTopology topo;
  topo.positions.resize(2, n);
  for (int r = 0; r < cfg.rows; ++r) {
    for (int c = 0; c < cfg.cols; ++c) {
      const int id = r * cfg.cols + c;
      const double offset = (c % 2 == 1) ? cfg.spacing_y / 2.0 : 0.0;
      topo.positions.col(id) = Vector2d(c * cfg.spacing_x,
                                        r * cfg.spacing_y + offset);
    }
  }

  double min_spacing = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      min_spacing = std::min(
          min_spacing, (topo.positions.col(i) - topo.positions.col(j)).norm());

  topo.neighbors.assign(static_cast<std::size_t>(n), {});
  if (n > 1) {
    const double cutoff = 1.2 * min_spacing;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j &&
            (topo.positions.col(i) - topo.positions.col(j)).norm() <= cutoff)
          topo.neighbors[static_cast<std::size_t>(i)].push_back(j);
  }

  topo.effective_radius = effective_radius(ch, cfg.effective_threshold);
  return topo;
}

NetworkTopology subtopology(const NetworkTopology& topo,
                            const std::vector<int>& keep) {
  NetworkTopology out;
  const int m = static_cast<int>(keep.size());
  out.positions.resize(2, m);
  std::vector<int> new_id(static_cast<std::size_t>(topo.n_aps()), -1);
  for (int i = 0; i < m; ++i) {
    out.positions.col(i) = topo.positions.col(keep[static_cast<std::size_t>(i)]);
    new_id[static_cast<std::size_t>(keep[static_cast<std::size_t>(i)])] = i;
  }
  out.neighbors.assign(static_cast<std::size_t>(m), {});
  for (int i = 0; i < m; ++i) {
    for (int old_nb : topo.neighbors[static_cast<std::size_t>(keep[static_cast<std::size_t>(i)])]) {
      int mapped = new_id[static_cast<std::size_t>(old_nb)];
      if (mapped >= 0) out.neighbors[static_cast<std::size_t>(i)].push_back(mapped);
    }
    std::sort(out.neighbors[static_cast<std::size_t>(i)].begin(),
              out.neighbors[static_cast<std::size_t>(i)].end());
  }
  out.effective_radius = topo.effective_radius;
  return out;
}

EffectiveRegion effective_region(const NetworkTopology& topo, int ap) {
  return EffectiveRegion{topo.position(ap), topo.effective_radius};
}

}  // namespace fmarl
