// include/bingo/community_graph.hpp
//
// User-user graph built from one chunk of the request log, and a greedy
// conductance-driven seed expansion that recovers overlapping communities.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "bingo/types.hpp"
#include "bingo/workload.hpp"

namespace bingo {

struct LogEntry {
  UserId user = 0;
  FileId file = 0;
};

using RequestLog = std::vector<LogEntry>;

/// Undirected weighted graph over the users that appear in a log.
/// Nodes are stored sorted by user id; adjacency lists are sorted by the
/// neighbour's node index.
class UserGraph {
 public:
  struct Neighbor {
    std::uint32_t node;
    std::uint32_t weight;
  };

  UserGraph() = default;
  /// `edges` holds (u, v, w) with u != v, each unordered pair at most once.
  UserGraph(std::vector<UserId> users,
            const std::vector<std::tuple<UserId, UserId, std::uint32_t>>& edges);

  std::size_t num_nodes() const { return users_.size(); }
  std::size_t num_edges() const { return num_edges_; }
  const std::vector<UserId>& users() const { return users_; }

  /// Node index of a user, or -1 when the user is not a node.
  std::int64_t index_of(UserId user) const;
  UserId user_at(std::uint32_t node) const { return users_[node]; }

  std::span<const Neighbor> neighbors(std::uint32_t node) const { return adj_[node]; }
  std::uint64_t degree(std::uint32_t node) const { return degree_[node]; }
  std::uint64_t total_volume() const { return total_volume_; }

  /// Weight between two users; 0 when absent.
  std::uint32_t weight(UserId u, UserId v) const;

  /// (u, v, w) with u < v, sorted.
  std::vector<std::tuple<UserId, UserId, std::uint32_t>> edges() const;

  /// Debug dump, one `u v w` line per edge.
  void write_edge_list(std::ostream& out) const;

 private:
  std::vector<UserId> users_;
  std::vector<std::vector<Neighbor>> adj_;
  std::vector<std::uint64_t> degree_;
  std::uint64_t total_volume_ = 0;
  std::size_t num_edges_ = 0;
};

/// Edge weight = number of distinct files both users requested; edges with
/// weight below `beta` are dropped.
UserGraph build_graph(std::span<const LogEntry> log, std::uint32_t beta);

/// cut(A) / min(vol(A), vol(V \ A)) for the users in `node_set`.
/// Throws std::invalid_argument for an empty set, the full node set, users
/// that are not nodes, or an edgeless graph.
double conductance(const UserGraph& graph, std::span<const UserId> node_set);

/// Community structure plus a user -> community index.
class EstimatedStructure {
 public:
  EstimatedStructure() = default;
  explicit EstimatedStructure(CommunityStructure structure);

  const CommunityStructure& structure() const { return structure_; }
  std::size_t size() const { return structure_.size(); }
  const std::vector<UserId>& members(CommunityId c) const { return structure_.communities[c]; }
  std::size_t community_size(CommunityId c) const { return structure_.communities[c].size(); }
  bool contains(CommunityId c, UserId user) const;

  /// Sorted ids of the communities containing `user`; empty if none.
  std::span<const CommunityId> membership_of(UserId user) const;

 private:
  CommunityStructure structure_;
  std::vector<std::vector<CommunityId>> membership_;
};

inline std::span<const CommunityId> membership_of(const EstimatedStructure& s, UserId user) {
  return s.membership_of(user);
}

struct DetectionParams {
  std::uint32_t min_size = 3;
  double phi_max = 0.5;
  // Upper bound on the number of nodes a single seed expansion may absorb.
  std::uint32_t max_expansion = 400;
};

/// Greedy seed-set expansion. Seeds are visited in decreasing weighted
/// degree (ties: smaller user id); a seed already inside an accepted
/// community is skipped. Each expansion repeatedly adds the frontier node
/// giving the lowest conductance and keeps the best-conductance prefix.
/// Deterministic.
EstimatedStructure detect_communities(const UserGraph& graph, const DetectionParams& params);

}  // namespace bingo
