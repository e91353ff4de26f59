// include/bingo/scored_heap_cache.hpp
//
// Fixed-capacity cache kept as an indexed binary min-heap on (score, stamp).
// The stamp is a monotonically increasing counter taken on insert and on
// every key update, so among equal scores the least recently touched file
// sits closest to the root.

#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "bingo/types.hpp"

namespace bingo {

class ScoredHeapCache {
 public:
  using Score = std::int64_t;

  struct Entry {
    FileId file;
    Score score;
    std::uint64_t stamp;
  };

  struct InsertResult {
    bool accepted;
    // Minimum score in the cache when the insert was rejected for capacity.
    Score current_min;
  };

  explicit ScoredHeapCache(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return heap_.size(); }
  bool empty() const { return heap_.empty(); }
  bool full() const { return heap_.size() >= capacity_; }
  bool contains(FileId file) const { return pos_.count(file) != 0; }

  /// Score of a resident file. Throws std::out_of_range otherwise.
  Score score_of(FileId file) const;
  const Entry& peek_min() const;

  /// Inserts when there is room; otherwise leaves the cache unchanged.
  /// Throws std::logic_error if the file is already resident.
  InsertResult insert(FileId file, Score score);

  /// Evicts the minimum entry and inserts `file` in its place. Requires a
  /// full cache and `score` strictly greater than the current minimum.
  FileId replace_min(FileId file, Score score);

  /// Changes a resident file's score and refreshes its stamp.
  void update_key(FileId file, Score score);

  Entry pop_min();
  void remove(FileId file);

  /// Heap-array order; exposed for inspection and tests.
  const std::vector<Entry>& entries() const { return heap_; }

  /// True if the heap property and the position index are consistent.
  bool check_invariants() const;

 private:
  static bool less(const Entry& a, const Entry& b) {
    return a.score != b.score ? a.score < b.score : a.stamp < b.stamp;
  }
  void place(std::size_t i, Entry e);
  void sift_up(std::size_t i);
  void sift_down(std::size_t i);
  void restore(std::size_t i);
  void erase_at(std::size_t i);

  std::size_t capacity_;
  std::uint64_t clock_ = 0;
  std::vector<Entry> heap_;
  std::unordered_map<FileId, std::size_t> pos_;
};

}  // namespace bingo
