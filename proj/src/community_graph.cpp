// src/community_graph.cpp

#include "bingo/community_graph.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace bingo {

UserGraph::UserGraph(std::vector<UserId> users,
                     const std::vector<std::tuple<UserId, UserId, std::uint32_t>>& edges)
    : users_(std::move(users)) {
  std::sort(users_.begin(), users_.end());
  users_.erase(std::unique(users_.begin(), users_.end()), users_.end());
  adj_.resize(users_.size());
  degree_.assign(users_.size(), 0);
  for (const auto& [u, v, w] : edges) {
    if (u == v) throw std::invalid_argument("user graph: self-loop");
    if (w == 0) continue;
    const auto iu = index_of(u);
    const auto iv = index_of(v);
    if (iu < 0 || iv < 0) throw std::invalid_argument("user graph: edge endpoint is not a node");
    adj_[iu].push_back({static_cast<std::uint32_t>(iv), w});
    adj_[iv].push_back({static_cast<std::uint32_t>(iu), w});
    degree_[iu] += w;
    degree_[iv] += w;
    total_volume_ += 2ULL * w;
    ++num_edges_;
  }
  for (auto& list : adj_) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    for (std::size_t i = 1; i < list.size(); ++i) {
      if (list[i - 1].node == list[i].node) {
        throw std::invalid_argument("user graph: duplicate edge");
      }
    }
  }
}

std::int64_t UserGraph::index_of(UserId user) const {
  auto it = std::lower_bound(users_.begin(), users_.end(), user);
  if (it == users_.end() || *it != user) return -1;
  return std::distance(users_.begin(), it);
}

std::uint32_t UserGraph::weight(UserId u, UserId v) const {
  const auto iu = index_of(u);
  const auto iv = index_of(v);
  if (iu < 0 || iv < 0) return 0;
  const auto& list = adj_[iu];
  auto it = std::lower_bound(list.begin(), list.end(), static_cast<std::uint32_t>(iv),
                             [](const Neighbor& n, std::uint32_t node) { return n.node < node; });
  return (it != list.end() && it->node == static_cast<std::uint32_t>(iv)) ? it->weight : 0;
}

std::vector<std::tuple<UserId, UserId, std::uint32_t>> UserGraph::edges() const {
  std::vector<std::tuple<UserId, UserId, std::uint32_t>> out;
  out.reserve(num_edges_);
  for (std::uint32_t i = 0; i < adj_.size(); ++i) {
    for (const auto& n : adj_[i]) {
      if (n.node > i) out.emplace_back(users_[i], users_[n.node], n.weight);
    }
  }
  return out;
}

void UserGraph::write_edge_list(std::ostream& out) const {
  for (const auto& [u, v, w] : edges()) out << u << ' ' << v << ' ' << w << '\n';
}

UserGraph build_graph(std::span<const LogEntry> log, std::uint32_t beta) {
  if (beta < 1) throw std::invalid_argument("beta must be >= 1");

  std::unordered_map<FileId, std::vector<UserId>> requesters;
  std::vector<UserId> users;
  users.reserve(log.size());
  for (const auto& e : log) {
    requesters[e.file].push_back(e.user);
    users.push_back(e.user);
  }

  std::unordered_map<std::uint64_t, std::uint32_t> common;
  for (auto& [file, list] : requesters) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (std::size_t i = 0; i < list.size(); ++i) {
      for (std::size_t j = i + 1; j < list.size(); ++j) {
        ++common[(static_cast<std::uint64_t>(list[i]) << 32) | list[j]];
      }
    }
  }

  std::vector<std::tuple<UserId, UserId, std::uint32_t>> edges;
  for (const auto& [key, w] : common) {
    if (w < beta) continue;
    edges.emplace_back(static_cast<UserId>(key >> 32), static_cast<UserId>(key & 0xffffffffU), w);
  }
  std::sort(edges.begin(), edges.end());
  return UserGraph(std::move(users), edges);
}

namespace {

// Conductance as an exact fraction so that ties compare exactly.
struct Phi {
  std::uint64_t cut;
  std::uint64_t den;

  static Phi of(std::uint64_t cut, std::uint64_t vol, std::uint64_t total) {
    if (cut == 0) return {0, 1};
    return {cut, std::min(vol, total - vol)};
  }
  bool operator<(const Phi& o) const { return cut * o.den < o.cut * den; }
  bool le(double bound) const { return static_cast<double>(cut) <= bound * static_cast<double>(den); }
  double value() const { return static_cast<double>(cut) / static_cast<double>(den); }
};

}  // namespace

double conductance(const UserGraph& graph, std::span<const UserId> node_set) {
  if (node_set.empty()) throw std::invalid_argument("conductance: empty node set");
  if (graph.num_edges() == 0) throw std::invalid_argument("conductance: graph has no edges");

  std::vector<char> in_set(graph.num_nodes(), 0);
  std::size_t distinct = 0;
  for (UserId u : node_set) {
    const auto i = graph.index_of(u);
    if (i < 0) throw std::invalid_argument("conductance: user is not a graph node");
    if (!in_set[i]) ++distinct;
    in_set[i] = 1;
  }
  if (distinct == graph.num_nodes()) throw std::invalid_argument("conductance: full node set");

  std::uint64_t vol = 0;
  std::uint64_t cut = 0;
  for (std::uint32_t i = 0; i < graph.num_nodes(); ++i) {
    if (!in_set[i]) continue;
    vol += graph.degree(i);
    for (const auto& n : graph.neighbors(i)) {
      if (!in_set[n.node]) cut += n.weight;
    }
  }
  return Phi::of(cut, vol, graph.total_volume()).value();
}

EstimatedStructure::EstimatedStructure(CommunityStructure structure)
    : structure_(std::move(structure)) {
  structure_.validate();
  membership_.resize(structure_.num_users);
  for (CommunityId c = 0; c < structure_.size(); ++c) {
    for (UserId u : structure_.communities[c]) membership_[u].push_back(c);
  }
}

bool EstimatedStructure::contains(CommunityId c, UserId user) const {
  const auto& m = structure_.communities[c];
  return std::binary_search(m.begin(), m.end(), user);
}

std::span<const CommunityId> EstimatedStructure::membership_of(UserId user) const {
  if (user >= membership_.size()) return {};
  return membership_[user];
}

EstimatedStructure detect_communities(const UserGraph& graph, const DetectionParams& params) {
  const std::uint32_t n = static_cast<std::uint32_t>(graph.num_nodes());
  const std::uint64_t total = graph.total_volume();

  std::vector<std::uint32_t> seeds;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (graph.degree(i) > 0) seeds.push_back(i);
  }
  std::stable_sort(seeds.begin(), seeds.end(), [&](std::uint32_t a, std::uint32_t b) {
    return graph.degree(a) > graph.degree(b);
  });

  std::vector<char> covered(n, 0);
  std::vector<char> in_set(n, 0);
  std::vector<std::uint64_t> conn(n, 0);
  std::vector<char> in_frontier(n, 0);
  std::set<std::vector<UserId>> seen;

  CommunityStructure found;
  found.num_users = graph.users().empty() ? 0 : graph.users().back() + 1;

  for (std::uint32_t seed : seeds) {
    if (covered[seed]) continue;

    std::vector<std::uint32_t> order{seed};
    std::vector<std::uint32_t> frontier;
    in_set[seed] = 1;
    std::uint64_t vol = graph.degree(seed);
    std::uint64_t cut = graph.degree(seed);
    for (const auto& nb : graph.neighbors(seed)) {
      conn[nb.node] += nb.weight;
      if (!in_frontier[nb.node]) {
        in_frontier[nb.node] = 1;
        frontier.push_back(nb.node);
      }
    }

    Phi best = Phi::of(cut, vol, total);
    std::size_t best_len = 1;

    while (!frontier.empty() && order.size() < params.max_expansion) {
      std::size_t pick = 0;
      Phi pick_phi{0, 0};
      for (std::size_t k = 0; k < frontier.size(); ++k) {
        const std::uint32_t v = frontier[k];
        const Phi phi = Phi::of(cut + graph.degree(v) - 2 * conn[v], vol + graph.degree(v), total);
        if (k == 0 || phi < pick_phi || (!(pick_phi < phi) && v < frontier[pick])) {
          pick = k;
          pick_phi = phi;
        }
      }
      const std::uint32_t v = frontier[pick];
      frontier[pick] = frontier.back();
      frontier.pop_back();
      in_frontier[v] = 0;

      cut = cut + graph.degree(v) - 2 * conn[v];
      vol += graph.degree(v);
      in_set[v] = 1;
      order.push_back(v);
      for (const auto& nb : graph.neighbors(v)) {
        if (in_set[nb.node]) continue;
        conn[nb.node] += nb.weight;
        if (!in_frontier[nb.node]) {
          in_frontier[nb.node] = 1;
          frontier.push_back(nb.node);
        }
      }
      if (pick_phi < best) {
        best = pick_phi;
        best_len = order.size();
      }
    }

    for (std::uint32_t v : order) {
      in_set[v] = 0;
      conn[v] = 0;
      for (const auto& nb : graph.neighbors(v)) conn[nb.node] = 0;
    }
    for (std::uint32_t v : frontier) in_frontier[v] = 0;

    if (best_len < params.min_size || !best.le(params.phi_max)) continue;

    std::vector<UserId> members;
    members.reserve(best_len);
    for (std::size_t k = 0; k < best_len; ++k) {
      covered[order[k]] = 1;
      members.push_back(graph.user_at(order[k]));
    }
    std::sort(members.begin(), members.end());
    if (seen.insert(members).second) found.communities.push_back(std::move(members));
  }
  return EstimatedStructure(std::move(found));
}

}  // namespace bingo
