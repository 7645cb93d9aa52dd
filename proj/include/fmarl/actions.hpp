#pragma once

#include <vector>

#include "fmarl/topology.hpp"

namespace fmarl {

// One cooperation action of a single access-point: the set of neighbour ids
// it requests (empty = no-op). Request sizes never exceed
// max_cluster_size - 1.
using ActionSet = std::vector<std::vector<int>>;

// Ordered local action list: no-op first, then singleton requests in
// neighbour-id order, then pairs (and larger subsets when the cluster cap
// allows them) in lexicographic order. Under adjacent_pairs_only a multi-AP
// request must form a connected patch of mutually neighbouring APs.
ActionSet enumerate_actions(const NetworkTopology& topo, int ap,
                            const TopologyConfig& cfg);

struct JointAction {
  std::vector<std::vector<int>> requests;  // per AP, sorted neighbour ids

  static JointAction no_op(int n_aps) {
    JointAction j;
    j.requests.assign(static_cast<std::size_t>(n_aps), {});
    return j;
  }

  void validate(const NetworkTopology& topo, const TopologyConfig& cfg) const;
};

struct ClusterAssignment {
  // Cluster id of each AP; the id is the smallest member id, so singleton
  // APs have cluster_of[i] == i.
  std::vector<int> cluster_of;

  static ClusterAssignment singletons(int n_aps);

  int n_aps() const { return static_cast<int>(cluster_of.size()); }
  std::vector<int> members(int cluster_id) const;
  std::vector<std::vector<int>> groups() const;  // nonempty clusters, by id
  std::vector<int> sizes_histogram(int max_size) const;

  friend bool operator==(const ClusterAssignment&,
                         const ClusterAssignment&) = default;
};

// Handshake rule: a link (i, j) exists iff i requests j and j requests i.
// Links are committed in ascending (min id, max id) order; a link is kept
// only when the merged component stays within max_cluster_size. Clusters are
// the components of committed links.
ClusterAssignment resolve_handshake(const JointAction& joint,
                                    const NetworkTopology& topo,
                                    const TopologyConfig& cfg);

}  // namespace fmarl
