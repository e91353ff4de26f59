// src/policies.cpp

#include "bingo/policies.hpp"

#include <algorithm>
#include <list>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace bingo {
namespace {

void require_capacity(std::size_t capacity) {
  if (capacity == 0) throw std::invalid_argument("cache capacity must be >= 1");
}

// Shared by FIFO and LRU: a list ordered from next victim to most recent.
class ListCache : public CachePolicy {
 public:
  ListCache(std::size_t capacity, bool refresh_on_hit, std::string_view name)
      : capacity_(capacity), refresh_on_hit_(refresh_on_hit), name_(name) {
    require_capacity(capacity);
  }

  Outcome on_request(UserId, FileId file) override {
    auto it = index_.find(file);
    if (it != index_.end()) {
      if (refresh_on_hit_) order_.splice(order_.end(), order_, it->second);
      return Outcome::Hit;
    }
    if (order_.size() >= capacity_) {
      index_.erase(order_.front());
      order_.pop_front();
    }
    order_.push_back(file);
    index_[file] = std::prev(order_.end());
    return Outcome::Miss;
  }

  bool contains(FileId file) const override { return index_.count(file) != 0; }
  std::size_t occupancy() const override { return order_.size(); }
  std::size_t capacity() const override { return capacity_; }
  std::string_view name() const override { return name_; }

 private:
  std::size_t capacity_;
  bool refresh_on_hit_;
  std::string_view name_;
  std::list<FileId> order_;
  std::unordered_map<FileId, std::list<FileId>::iterator> index_;
};

class LfuCache : public CachePolicy {
 public:
  explicit LfuCache(std::size_t capacity) : capacity_(capacity) { require_capacity(capacity); }

  Outcome on_request(UserId, FileId file) override {
    ++clock_;
    std::uint64_t& count = counts_[file];
    auto it = last_use_.find(file);
    if (it != last_use_.end()) {
      order_.erase({count, it->second, file});
      ++count;
      it->second = clock_;
      order_.insert({count, clock_, file});
      return Outcome::Hit;
    }
    ++count;
    if (last_use_.size() >= capacity_) {
      const auto victim = *order_.begin();
      order_.erase(order_.begin());
      last_use_.erase(std::get<2>(victim));
    }
    last_use_[file] = clock_;
    order_.insert({count, clock_, file});
    return Outcome::Miss;
  }

  bool contains(FileId file) const override { return last_use_.count(file) != 0; }
  std::size_t occupancy() const override { return last_use_.size(); }
  std::size_t capacity() const override { return capacity_; }
  std::string_view name() const override { return "LFU"; }

 private:
  std::size_t capacity_;
  std::uint64_t clock_ = 0;
  // All-time request counts, including files that are not resident.
  std::unordered_map<FileId, std::uint64_t> counts_;
  std::unordered_map<FileId, std::uint64_t> last_use_;
  // (count, last use, file) for residents; begin() is the victim.
  std::set<std::tuple<std::uint64_t, std::uint64_t, FileId>> order_;
};

class RandomCache : public CachePolicy {
 public:
  RandomCache(std::size_t capacity, std::uint64_t seed) : capacity_(capacity), rng_(seed) {
    require_capacity(capacity);
  }

  Outcome on_request(UserId, FileId file) override {
    if (index_.count(file)) return Outcome::Hit;
    if (slots_.size() >= capacity_) {
      std::uniform_int_distribution<std::size_t> pick(0, slots_.size() - 1);
      const std::size_t victim = pick(rng_);
      index_.erase(slots_[victim]);
      if (victim + 1 != slots_.size()) {
        slots_[victim] = slots_.back();
        index_[slots_[victim]] = victim;
      }
      slots_.pop_back();
    }
    index_[file] = slots_.size();
    slots_.push_back(file);
    return Outcome::Miss;
  }

  bool contains(FileId file) const override { return index_.count(file) != 0; }
  std::size_t occupancy() const override { return slots_.size(); }
  std::size_t capacity() const override { return capacity_; }
  std::string_view name() const override { return "RND"; }

 private:
  std::size_t capacity_;
  Rng rng_;
  std::vector<FileId> slots_;
  std::unordered_map<FileId, std::size_t> index_;
};

class MostPopularCache : public CachePolicy {
 public:
  MostPopularCache(std::size_t capacity, const ZipfPopularity& popularity) : capacity_(capacity) {
    require_capacity(capacity);
    const auto& p = popularity.probabilities();
    const std::size_t keep = std::min(capacity, p.size());
    std::vector<std::uint32_t> ranks(p.size());
    std::iota(ranks.begin(), ranks.end(), 0U);
    std::partial_sort(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(keep), ranks.end(),
                      [&](std::uint32_t a, std::uint32_t b) { return p[a] != p[b] ? p[a] > p[b] : a < b; });
    for (std::size_t i = 0; i < keep; ++i) resident_.insert(ranks[i] + 1);
  }

  Outcome on_request(UserId, FileId file) override {
    return resident_.count(file) ? Outcome::Hit : Outcome::Miss;
  }

  bool contains(FileId file) const override { return resident_.count(file) != 0; }
  std::size_t occupancy() const override { return resident_.size(); }
  std::size_t capacity() const override { return capacity_; }
  std::string_view name() const override { return "MPC"; }

 private:
  std::size_t capacity_;
  std::unordered_set<FileId> resident_;
};

}  // namespace

std::unique_ptr<CachePolicy> make_fifo(std::size_t capacity) {
  return std::make_unique<ListCache>(capacity, false, "FIFO");
}

std::unique_ptr<CachePolicy> make_lru(std::size_t capacity) {
  return std::make_unique<ListCache>(capacity, true, "LRU");
}

std::unique_ptr<CachePolicy> make_lfu(std::size_t capacity) {
  return std::make_unique<LfuCache>(capacity);
}

std::unique_ptr<CachePolicy> make_rnd(std::size_t capacity, std::uint64_t seed) {
  return std::make_unique<RandomCache>(capacity, seed);
}

std::unique_ptr<CachePolicy> make_mpc(std::size_t capacity, const ZipfPopularity& popularity) {
  return std::make_unique<MostPopularCache>(capacity, popularity);
}

}  // namespace bingo
