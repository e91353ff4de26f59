// include/bingo/policies.hpp
//
// Common cache-policy interface and the FIFO / LRU / LFU / RND / MPC
// baselines. Every policy stores whole, equally sized files.

#pragma once

#include <cstdint>
#include <memory>
#include <string_view>

#include "bingo/types.hpp"
#include "bingo/workload.hpp"

namespace bingo {

class CachePolicy {
 public:
  virtual ~CachePolicy() = default;

  virtual Outcome on_request(UserId user, FileId file) = 0;
  virtual bool contains(FileId file) const = 0;
  virtual std::size_t occupancy() const = 0;
  virtual std::size_t capacity() const = 0;
  virtual std::string_view name() const = 0;
};

/// Evicts the oldest inserted file.
std::unique_ptr<CachePolicy> make_fifo(std::size_t capacity);
/// Evicts the least recently used file.
std::unique_ptr<CachePolicy> make_lru(std::size_t capacity);
/// Evicts the file with the fewest requests over the whole history; ties go
/// to the least recently used.
std::unique_ptr<CachePolicy> make_lfu(std::size_t capacity);
/// Evicts a uniformly random resident.
std::unique_ptr<CachePolicy> make_rnd(std::size_t capacity, std::uint64_t seed);
/// Statically holds the `capacity` most popular files (ties: lower rank) and
/// never admits anything else.
std::unique_ptr<CachePolicy> make_mpc(std::size_t capacity, const ZipfPopularity& popularity);

}  // namespace bingo
