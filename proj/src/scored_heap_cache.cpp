// src/scored_heap_cache.cpp

#include "bingo/scored_heap_cache.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace bingo {

ScoredHeapCache::ScoredHeapCache(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("cache capacity must be >= 1");
  heap_.reserve(capacity);
  pos_.reserve(capacity * 2);
}

ScoredHeapCache::Score ScoredHeapCache::score_of(FileId file) const {
  return heap_[pos_.at(file)].score;
}

const ScoredHeapCache::Entry& ScoredHeapCache::peek_min() const {
  if (heap_.empty()) throw std::logic_error("peek_min on empty cache");
  return heap_.front();
}

ScoredHeapCache::InsertResult ScoredHeapCache::insert(FileId file, Score score) {
  if (contains(file)) {
    throw std::logic_error("file " + std::to_string(file) + " is already resident");
  }
  if (full()) return {false, heap_.front().score};
  heap_.push_back({file, score, ++clock_});
  pos_[file] = heap_.size() - 1;
  sift_up(heap_.size() - 1);
  return {true, score};
}

FileId ScoredHeapCache::replace_min(FileId file, Score score) {
  if (!full()) throw std::logic_error("replace_min requires a full cache");
  if (contains(file)) {
    throw std::logic_error("file " + std::to_string(file) + " is already resident");
  }
  if (score <= heap_.front().score) {
    throw std::invalid_argument("replace_min requires a score above the current minimum");
  }
  const FileId evicted = heap_.front().file;
  pos_.erase(evicted);
  place(0, {file, score, ++clock_});
  sift_down(0);
  return evicted;
}

void ScoredHeapCache::update_key(FileId file, Score score) {
  auto it = pos_.find(file);
  if (it == pos_.end()) {
    throw std::out_of_range("file " + std::to_string(file) + " is not resident");
  }
  const std::size_t i = it->second;
  heap_[i].score = score;
  heap_[i].stamp = ++clock_;
  restore(i);
}

ScoredHeapCache::Entry ScoredHeapCache::pop_min() {
  if (heap_.empty()) throw std::logic_error("pop_min on empty cache");
  Entry top = heap_.front();
  erase_at(0);
  return top;
}

void ScoredHeapCache::remove(FileId file) {
  auto it = pos_.find(file);
  if (it == pos_.end()) {
    throw std::out_of_range("file " + std::to_string(file) + " is not resident");
  }
  erase_at(it->second);
}

void ScoredHeapCache::erase_at(std::size_t i) {
  pos_.erase(heap_[i].file);
  if (i + 1 == heap_.size()) {
    heap_.pop_back();
    return;
  }
  Entry last = heap_.back();
  heap_.pop_back();
  place(i, last);
  restore(i);
}

void ScoredHeapCache::place(std::size_t i, Entry e) {
  heap_[i] = e;
  pos_[e.file] = i;
}

void ScoredHeapCache::restore(std::size_t i) {
  if (i > 0 && less(heap_[i], heap_[(i - 1) / 2])) {
    sift_up(i);
  } else {
    sift_down(i);
  }
}

void ScoredHeapCache::sift_up(std::size_t i) {
  Entry e = heap_[i];
  while (i > 0) {
    const std::size_t parent = (i - 1) / 2;
    if (!less(e, heap_[parent])) break;
    place(i, heap_[parent]);
    i = parent;
  }
  place(i, e);
}

void ScoredHeapCache::sift_down(std::size_t i) {
  Entry e = heap_[i];
  const std::size_t n = heap_.size();
  while (true) {
    std::size_t child = 2 * i + 1;
    if (child >= n) break;
    if (child + 1 < n && less(heap_[child + 1], heap_[child])) ++child;
    if (!less(heap_[child], e)) break;
    place(i, heap_[child]);
    i = child;
  }
  place(i, e);
}

bool ScoredHeapCache::check_invariants() const {
  if (heap_.size() > capacity_ || pos_.size() != heap_.size()) return false;
  for (std::size_t i = 0; i < heap_.size(); ++i) {
    auto it = pos_.find(heap_[i].file);
    if (it == pos_.end() || it->second != i) return false;
    if (i > 0 && less(heap_[i], heap_[(i - 1) / 2])) return false;
  }
  return true;
}

}  // namespace bingo
