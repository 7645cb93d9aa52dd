#include "fmarl/actions.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fmarl {

namespace {

// True when `subset` (of this AP's neighbours) is connected in the neighbour
// graph. Singletons are trivially connected.
bool subset_connected(const NetworkTopology& topo,
                      const std::vector<int>& subset) {
  if (subset.size() <= 1) return true;
  std::vector<int> stack{subset[0]};
  std::vector<bool> seen(subset.size(), false);
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    for (std::size_t k = 0; k < subset.size(); ++k) {
      if (!seen[k] && topo.are_neighbors(cur, subset[k])) {
        seen[k] = true;
        ++reached;
        stack.push_back(subset[k]);
      }
    }
  }
  return reached == subset.size();
}

void emit_subsets(const std::vector<int>& nb, std::size_t size,
                  std::size_t start, std::vector<int>& cur,
                  const NetworkTopology& topo, bool require_connected,
                  ActionSet& out) {
  if (cur.size() == size) {
    if (!require_connected || subset_connected(topo, cur)) out.push_back(cur);
    return;
  }
  for (std::size_t k = start; k < nb.size(); ++k) {
    cur.push_back(nb[k]);
    emit_subsets(nb, size, k + 1, cur, topo, require_connected, out);
    cur.pop_back();
  }
}

}  // namespace

ActionSet enumerate_actions(const NetworkTopology& topo, int ap,
                            const TopologyConfig& cfg) {
  if (ap < 0 || ap >= topo.n_aps())
    throw std::invalid_argument("enumerate_actions: no such access-point");
  const auto& nb = topo.neighbors[static_cast<std::size_t>(ap)];
  const std::size_t max_request =
      static_cast<std::size_t>(cfg.max_cluster_size - 1);

  ActionSet actions;
  actions.push_back({});  // no-op
  const bool adjacent_only =
      cfg.pair_restriction == PairRestriction::adjacent_pairs_only;
  for (std::size_t size = 1; size <= std::min(max_request, nb.size()); ++size) {
    std::vector<int> cur;
    // Adjacency restriction only binds multi-AP requests.
    emit_subsets(nb, size, 0, cur, topo, adjacent_only && size >= 2, actions);
  }
  return actions;
}

void JointAction::validate(const NetworkTopology& topo,
                           const TopologyConfig& cfg) const {
  if (static_cast<int>(requests.size()) != topo.n_aps())
    throw std::invalid_argument("joint action: wrong number of access-points");
  for (int i = 0; i < topo.n_aps(); ++i) {
    const auto& req = requests[static_cast<std::size_t>(i)];
    if (static_cast<int>(req.size()) > cfg.max_cluster_size - 1)
      throw std::invalid_argument("joint action: request too large");
    for (int j : req)
      if (!topo.are_neighbors(i, j))
        throw std::invalid_argument(
            "joint action: requested id is not a neighbour");
  }
}

ClusterAssignment ClusterAssignment::singletons(int n_aps) {
  ClusterAssignment a;
  a.cluster_of.resize(static_cast<std::size_t>(n_aps));
  std::iota(a.cluster_of.begin(), a.cluster_of.end(), 0);
  return a;
}

std::vector<int> ClusterAssignment::members(int cluster_id) const {
  std::vector<int> out;
  for (int i = 0; i < n_aps(); ++i)
    if (cluster_of[static_cast<std::size_t>(i)] == cluster_id) out.push_back(i);
  return out;
}

std::vector<std::vector<int>> ClusterAssignment::groups() const {
  std::vector<std::vector<int>> out;
  for (int i = 0; i < n_aps(); ++i)
    if (cluster_of[static_cast<std::size_t>(i)] == i) out.push_back(members(i));
  return out;
}

std::vector<int> ClusterAssignment::sizes_histogram(int max_size) const {
  std::vector<int> hist(static_cast<std::size_t>(max_size), 0);
  for (const auto& g : groups()) {
    int s = std::min<int>(static_cast<int>(g.size()), max_size);
    hist[static_cast<std::size_t>(s - 1)] += 1;
  }
  return hist;
}

ClusterAssignment resolve_handshake(const JointAction& joint,
                                    const NetworkTopology& topo,
                                    const TopologyConfig& cfg) {
  const int n = topo.n_aps();

  std::vector<std::pair<int, int>> links;
  for (int i = 0; i < n; ++i) {
    for (int j : joint.requests[static_cast<std::size_t>(i)]) {
      if (j <= i) continue;  // count each undirected link once
      const auto& back = joint.requests[static_cast<std::size_t>(j)];
      if (std::find(back.begin(), back.end(), i) != back.end())
        links.emplace_back(i, j);
    }
  }
  std::sort(links.begin(), links.end());

  // Greedy union-find with the cluster-size cap.
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::vector<int> size(static_cast<std::size_t>(n), 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (auto [a, b] : links) {
    int ra = find(a), rb = find(b);
    if (ra == rb) continue;
    if (size[static_cast<std::size_t>(ra)] + size[static_cast<std::size_t>(rb)] >
        cfg.max_cluster_size)
      continue;
    int keep = std::min(ra, rb), drop = std::max(ra, rb);
    parent[static_cast<std::size_t>(drop)] = keep;
    size[static_cast<std::size_t>(keep)] +=
        size[static_cast<std::size_t>(drop)];
  }

  ClusterAssignment out;
  out.cluster_of.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out.cluster_of[static_cast<std::size_t>(i)] = find(i);
  return out;
}

}  // namespace fmarl
