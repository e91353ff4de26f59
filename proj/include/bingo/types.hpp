// include/bingo/types.hpp
//
// Identifier types shared by every module.

#pragma once

#include <cstdint>
#include <string_view>

namespace bingo {

using UserId = std::uint32_t;
// Files are identified by popularity rank, starting at 1.
using FileId = std::uint32_t;
using CommunityId = std::uint32_t;

enum class Outcome : std::uint8_t { Hit, Miss };

inline constexpr std::string_view to_string(Outcome o) {
  return o == Outcome::Hit ? "hit" : "miss";
}

}  // namespace bingo
