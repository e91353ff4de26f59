// src/engine.cpp

#include "bingo/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace bingo {

void EngineConfig::validate() const {
  if (cache_capacity < 1) throw std::invalid_argument("cache_capacity must be >= 1");
  if (chunk_length < 1) throw std::invalid_argument("chunk_length must be >= 1");
  if (beta < 1) throw std::invalid_argument("beta must be >= 1");
  if (xi < 1) throw std::invalid_argument("xi must be >= 1");
  if (rho < 1) throw std::invalid_argument("rho must be >= 1");
  if (staleness_window < 1) throw std::invalid_argument("staleness_window must be >= 1");
  if (pending_cap < xi) throw std::invalid_argument("pending_cap must be >= xi");
}

Score score(const IdentificationResult& identification, std::uint32_t xi,
            const RetainedRecord* retained) {
  if (!identification) return 1;
  const Score size = identification->size;
  const Score consumed = retained ? Score{retained->served} : Score{xi};
  return std::max<Score>(1, size - consumed);
}

StructureEstimator conductance_estimator(std::uint32_t beta, DetectionParams params) {
  return [beta, params](std::span<const LogEntry> log) {
    return std::make_shared<const EstimatedStructure>(
        detect_communities(build_graph(log, beta), params));
  };
}

BingoEngine::BingoEngine(EngineConfig config)
    : BingoEngine(config, conductance_estimator(config.beta, config.detection)) {}

BingoEngine::BingoEngine(EngineConfig config, StructureEstimator estimator)
    : config_(config), estimator_(std::move(estimator)), cache_(config.cache_capacity) {
  config_.validate();
  log_.reserve(config_.chunk_length);
}

BingoEngine::BingoEngine(EngineConfig config, std::shared_ptr<const EstimatedStructure> structure)
    : config_(config), structure_(std::move(structure)), cache_(config.cache_capacity) {
  config_.validate();
  log_.reserve(config_.chunk_length);
}

void BingoEngine::note_requester(FileState& st, UserId user) const {
  if (std::find(st.pending.begin(), st.pending.end(), user) != st.pending.end()) return;
  if (st.pending.size() >= config_.pending_cap) st.pending.erase(st.pending.begin());
  st.pending.push_back(user);
}

void BingoEngine::consume_member_hit(FileId file, FileState& st) {
  ++st.served;
  ++st.member_hits;
  cache_.update_key(file, std::max<Score>(0, cache_.score_of(file) - 1));
}

Outcome BingoEngine::on_request(UserId user, FileId file) {
  const std::uint64_t now = ++counters_.requests;
  log_.push_back({user, file});

  FileState& st = files_[file];
  st.last_request = now;

  Outcome outcome;
  if (cache_.contains(file)) {
    outcome = Outcome::Hit;
    ++counters_.hits;
    if (st.chi && st.chi->contains(user)) {
      consume_member_hit(file, st);
    } else {
      // Refresh the stamp so equal scores evict the least recently used.
      cache_.update_key(file, cache_.score_of(file));
    }
  } else {
    outcome = Outcome::Miss;
    ++counters_.misses;

    if (st.chi) {
      if (st.chi->contains(user)) ++st.served;
      if (st.served >= st.chi->size) {
        // Expected demand exhausted: the record goes away and the file
        // starts over as an unattributed file.
        st.chi.reset();
        st.served = 0;
      } else {
        const RetainedRecord record{file, st.chi->id, st.chi->size, st.served};
        admit(file, score(Identified{record.community, record.size}, config_.xi, &record));
      }
    }

    if (!st.chi) {
      note_requester(st, user);
      if (st.pending.size() >= config_.xi) {
        IdentificationResult found;
        if (structure_ && structure_->size() > 0) {
          found = identify(st.pending, *structure_, config_.rho);
        }
        if (found) {
          ++counters_.identifications;
          st.chi = AttributedCommunity{structure_, found->community, found->size};
          st.served = config_.xi;
          st.pending.clear();
          st.pending.shrink_to_fit();
        }
        admit(file, score(found, config_.xi));
      }
    }
  }

  if (now % config_.chunk_length == 0) chunk_boundary();
  return outcome;
}

BingoEngine::Admission BingoEngine::admit(FileId file, Score score) {
  if (cache_.contains(file)) throw std::logic_error("admit: file is already resident");
  const std::uint64_t now = counters_.requests;

  std::vector<FileId> stale;
  for (const auto& e : cache_.entries()) {
    auto it = files_.find(e.file);
    const std::uint64_t last = it == files_.end() ? 0 : it->second.last_request;
    if (now - last > config_.staleness_window) stale.push_back(e.file);
  }
  for (FileId f : stale) {
    cache_.remove(f);
    ++counters_.stale_purges;
    on_leave(f);
  }

  if (!cache_.full()) {
    cache_.insert(file, score);
  } else if (score > cache_.peek_min().score) {
    const FileId evicted = cache_.replace_min(file, score);
    ++counters_.evictions;
    on_leave(evicted);
  } else {
    ++counters_.denials;
    return Admission::Denied;
  }
  FileState& st = files_[file];
  st.admitted_score = score;
  st.member_hits = 0;
  return Admission::Admitted;
}

// A file left the cache. Its attribution survives as a retained record only
// while community demand is outstanding.
void BingoEngine::on_leave(FileId file) {
  auto it = files_.find(file);
  if (it == files_.end()) return;
  FileState& st = it->second;
  if (st.chi && st.served >= st.chi->size) {
    st.chi.reset();
    st.served = 0;
  }
}

void BingoEngine::chunk_boundary() {
  ++counters_.chunk_boundaries;
  if (estimator_) structure_ = estimator_(log_);
  log_.clear();
  prune_metadata();
}

// Drops bookkeeping for files that are neither resident nor retained and
// have not been requested within the staleness window.
void BingoEngine::prune_metadata() {
  const std::uint64_t now = counters_.requests;
  for (auto it = files_.begin(); it != files_.end();) {
    const FileState& st = it->second;
    const bool idle = now - st.last_request > config_.staleness_window;
    if (idle && !st.chi && !cache_.contains(it->first)) {
      it = files_.erase(it);
    } else {
      ++it;
    }
  }
}

const FileState* BingoEngine::state(FileId file) const {
  auto it = files_.find(file);
  return it == files_.end() ? nullptr : &it->second;
}

std::optional<RetainedRecord> BingoEngine::retained(FileId file) const {
  auto it = files_.find(file);
  if (it == files_.end() || cache_.contains(file)) return std::nullopt;
  const FileState& st = it->second;
  if (!st.chi || st.served >= st.chi->size) return std::nullopt;
  return RetainedRecord{file, st.chi->id, st.chi->size, st.served};
}

std::size_t BingoEngine::retained_count() const {
  std::size_t n = 0;
  for (const auto& [file, st] : files_) {
    if (st.chi && st.served < st.chi->size && !cache_.contains(file)) ++n;
  }
  return n;
}

}  // namespace bingo
