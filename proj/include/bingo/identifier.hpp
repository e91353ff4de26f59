// include/bingo/identifier.hpp
//
// Picks the community that explains why a set of users requested a file.

#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "bingo/community_graph.hpp"
#include "bingo/types.hpp"

namespace bingo {

struct Identified {
  CommunityId community = 0;
  std::uint32_t size = 0;

  bool operator==(const Identified&) const = default;
};

// std::nullopt means no community could be identified.
using IdentificationResult = std::optional<Identified>;

/// Intersects requester memberships, most-affiliated requester first
/// (ties: smaller user id), and returns the largest surviving community
/// (ties: smaller id).
///
/// Requesters without any membership are ignored. Iteration stops once at
/// most `rho` candidates remain, and an intersection that would leave no
/// candidate is never applied. Throws std::invalid_argument for an empty
/// requester list or rho == 0.
IdentificationResult identify(std::span<const UserId> requesters,
                              const EstimatedStructure& structure, std::uint32_t rho);

}  // namespace bingo
