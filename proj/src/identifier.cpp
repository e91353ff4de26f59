// src/identifier.cpp

#include "bingo/identifier.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>
#include <vector>

namespace bingo {

IdentificationResult identify(std::span<const UserId> requesters,
                              const EstimatedStructure& structure, std::uint32_t rho) {
  if (requesters.empty()) throw std::invalid_argument("identify: no requesters");
  if (rho < 1) throw std::invalid_argument("identify: rho must be >= 1");

  std::vector<UserId> users;
  users.reserve(requesters.size());
  for (UserId u : requesters) {
    if (!structure.membership_of(u).empty()) users.push_back(u);
  }
  if (users.empty()) return std::nullopt;

  std::sort(users.begin(), users.end(), [&](UserId a, UserId b) {
    const auto ma = structure.membership_of(a).size();
    const auto mb = structure.membership_of(b).size();
    return ma != mb ? ma > mb : a < b;
  });
  users.erase(std::unique(users.begin(), users.end()), users.end());

  const auto first = structure.membership_of(users.front());
  std::vector<CommunityId> candidates(first.begin(), first.end());
  std::vector<CommunityId> next;
  for (std::size_t i = 1; i < users.size() && candidates.size() > rho; ++i) {
    const auto theirs = structure.membership_of(users[i]);
    next.clear();
    std::set_intersection(candidates.begin(), candidates.end(), theirs.begin(), theirs.end(),
                          std::back_inserter(next));
    if (next.empty()) break;
    candidates.swap(next);
  }

  CommunityId best = candidates.front();
  for (CommunityId c : candidates) {
    if (structure.community_size(c) > structure.community_size(best)) best = c;
  }
  return Identified{best, static_cast<std::uint32_t>(structure.community_size(best))};
}

}  // namespace bingo
