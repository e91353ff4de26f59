// include/bingo/engine.hpp
//
// Community-aware caching engine.
//
// Requests are processed one at a time. A file that is not resident collects
// its distinct requesters; once `xi` of them have been seen, the engine asks
// the identifier which community is driving the demand and scores the file
// by that community's expected remaining requests. The cache keeps the
// highest-scoring files in a min-heap, and every further request by a member
// of the identified community consumes one unit of score.
//
// The request stream is cut into chunks of `chunk_length` requests. At each
// chunk boundary the chunk's log is turned into a user graph and the
// estimated community structure is replaced by a fresh detection result.
// In oracle mode a fixed structure is supplied up front and never replaced.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "bingo/community_graph.hpp"
#include "bingo/identifier.hpp"
#include "bingo/policies.hpp"
#include "bingo/scored_heap_cache.hpp"

namespace bingo {

struct EngineConfig {
  std::size_t cache_capacity = 50;
  std::uint64_t chunk_length = 10000;
  std::uint32_t beta = 3;
  std::uint32_t xi = 4;
  std::uint32_t rho = 2;
  // Resident files not requested for more than this many requests are
  // purged before an admission decision.
  std::uint64_t staleness_window = 200;
  DetectionParams detection;
  // Oldest pending requesters are dropped beyond this many per file.
  std::uint32_t pending_cap = 64;

  void validate() const;
};

using Score = ScoredHeapCache::Score;

/// The community a file was attributed to. The structure is pinned so the
/// membership test stays valid after later chunk boundaries replace the
/// engine's current estimate.
struct AttributedCommunity {
  std::shared_ptr<const EstimatedStructure> structure;
  CommunityId id = 0;
  std::uint32_t size = 0;

  bool contains(UserId user) const { return structure->contains(id, user); }
};

struct FileState {
  std::uint64_t last_request = 0;
  // Distinct users, oldest first. Only tracked until a community is found.
  std::vector<UserId> pending;
  std::optional<AttributedCommunity> chi;
  // Community demand consumed so far: the `xi` requests that triggered
  // identification plus every later request by a community member.
  std::uint32_t served = 0;
  Score admitted_score = 0;
  // Community-member hits since the current admission.
  std::uint32_t member_hits = 0;
};

/// Evicted or denied file whose community demand is not yet exhausted.
struct RetainedRecord {
  FileId file = 0;
  CommunityId community = 0;
  std::uint32_t size = 0;
  std::uint32_t served = 0;
};

struct EngineCounters {
  std::uint64_t requests = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t evictions = 0;
  std::uint64_t stale_purges = 0;
  std::uint64_t identifications = 0;
  std::uint64_t denials = 0;
  std::uint64_t chunk_boundaries = 0;
};

/// max(1, |chi| - xi) for a fresh identification, max(1, |chi| - served)
/// when a retained record exists, and 1 when nothing was identified.
Score score(const IdentificationResult& identification, std::uint32_t xi,
            const RetainedRecord* retained = nullptr);

/// Produces the structure for the next chunk from the current chunk's log.
using StructureEstimator =
    std::function<std::shared_ptr<const EstimatedStructure>(std::span<const LogEntry>)>;

/// build_graph followed by detect_communities.
StructureEstimator conductance_estimator(std::uint32_t beta, DetectionParams params);

class BingoEngine final : public CachePolicy {
 public:
  enum class Admission { Admitted, Denied };

  /// Detection-in-the-loop engine: starts without a structure and
  /// re-estimates it at every chunk boundary.
  explicit BingoEngine(EngineConfig config);
  BingoEngine(EngineConfig config, StructureEstimator estimator);
  /// Oracle engine: uses `structure` throughout; chunk boundaries only
  /// rotate the log.
  BingoEngine(EngineConfig config, std::shared_ptr<const EstimatedStructure> structure);

  Outcome on_request(UserId user, FileId file) override;
  bool contains(FileId file) const override { return cache_.contains(file); }
  std::size_t occupancy() const override { return cache_.size(); }
  std::size_t capacity() const override { return cache_.capacity(); }
  std::string_view name() const override { return "BINGO"; }

  /// Stale sweep, then insert / replace-min / deny.
  Admission admit(FileId file, Score score);
  void chunk_boundary();

  const EngineConfig& config() const { return config_; }
  const EngineCounters& counters() const { return counters_; }
  const ScoredHeapCache& cache() const { return cache_; }
  const std::shared_ptr<const EstimatedStructure>& structure() const { return structure_; }
  std::span<const LogEntry> chunk_log() const { return log_; }

  const FileState* state(FileId file) const;
  std::optional<RetainedRecord> retained(FileId file) const;
  std::size_t retained_count() const;

 private:
  void consume_member_hit(FileId file, FileState& st);
  void on_leave(FileId file);
  void note_requester(FileState& st, UserId user) const;
  void prune_metadata();

  EngineConfig config_;
  StructureEstimator estimator_;
  std::shared_ptr<const EstimatedStructure> structure_;
  ScoredHeapCache cache_;
  std::unordered_map<FileId, FileState> files_;
  RequestLog log_;
  EngineCounters counters_;
};

}  // namespace bingo
