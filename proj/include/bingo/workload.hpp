// include/bingo/workload.hpp
//
// Synthetic workload: affiliation-style community memberships, Zipf file
// popularity and the batch/session request arrival process seen by a single
// base station.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "bingo/types.hpp"

namespace bingo {

using Rng = std::mt19937_64;

/// Overlapping user communities. Community ids are dense indices into
/// `communities`; each member list is sorted and duplicate free.
struct CommunityStructure {
  std::vector<std::vector<UserId>> communities;
  std::uint32_t num_users = 0;

  std::size_t size() const { return communities.size(); }

  /// Throws std::invalid_argument on an empty community or an out-of-range
  /// or unsorted member list.
  void validate() const;
};

/// Zipf popularity over files ranked 1..F.
class ZipfPopularity {
 public:
  ZipfPopularity(double alpha, std::uint32_t num_files);

  double alpha() const { return alpha_; }
  std::uint32_t num_files() const { return static_cast<std::uint32_t>(prob_.size()); }

  /// Probability of the file with rank `file` (1-based).
  double probability(FileId file) const { return prob_.at(file - 1); }
  const std::vector<double>& probabilities() const { return prob_; }

  /// Inverse-CDF draw; returns a rank in [1, F].
  FileId sample(Rng& rng) const;

 private:
  double alpha_;
  std::vector<double> prob_;
  std::vector<double> cdf_;
};

/// Builds (or fetches from a process-wide cache) the popularity table.
/// Tables for 10^6 files are large enough that sweeps should share them.
std::shared_ptr<const ZipfPopularity> zipf_popularity(double alpha, std::uint32_t num_files);

inline FileId sample_file(const ZipfPopularity& pop, Rng& rng) { return pop.sample(rng); }

inline constexpr std::int32_t kNoiseOrigin = -1;

struct Request {
  std::uint64_t seq = 0;
  UserId user = 0;
  FileId file = 0;
  // Generating community, or kNoiseOrigin. Evaluation only; policies never
  // see it.
  std::int32_t origin = kNoiseOrigin;

  bool operator==(const Request&) const = default;
};

using Trace = std::vector<Request>;

struct WorkloadConfig {
  std::uint32_t num_users = 2000;
  std::uint32_t num_communities = 50;
  double size_exponent = 2.5;
  std::uint32_t size_min = 10;
  std::uint32_t size_max = 200;
  std::uint32_t batch_size = 80;
  double noise_rate = 0.1;
  std::uint64_t total_requests = 100000;
  // 0 keeps the structure static.
  std::uint64_t churn_interval = 0;
  std::uint64_t seed = 1;
  double alpha = 0.6;
  std::uint32_t num_files = 1000000;
  // Draw members without replacement across communities (zero overlap).
  bool disjoint = false;

  void validate() const;
};

CommunityStructure generate_structure(const WorkloadConfig& config, Rng& rng);

/// Runs the session arrival process for `config.total_requests` events.
/// The structure is copied because churn mutates it; the final (possibly
/// churned) structure is written to `final_structure` when non-null.
Trace simulate_requests(const CommunityStructure& structure, const ZipfPopularity& pop,
                        const WorkloadConfig& config, Rng& rng,
                        CommunityStructure* final_structure = nullptr);

/// FNV-1a over (seq, user, file, origin) of every request.
std::uint64_t trace_hash(const Trace& trace);

void write_trace_csv(std::ostream& out, const Trace& trace);
Trace read_trace_csv(std::istream& in);

}  // namespace bingo
