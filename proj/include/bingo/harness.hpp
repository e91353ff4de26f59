// include/bingo/harness.hpp
//
// Experiment orchestration: single runs, parameter sweeps and the metrics
// CSV format shared with the chart renderer.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bingo/engine.hpp"
#include "bingo/workload.hpp"

namespace bingo {

/// Canonical policy names, in report order.
const std::vector<std::string>& all_policies();

struct ExperimentConfig {
  WorkloadConfig workload;
  EngineConfig engine;
  std::vector<std::string> policies = all_policies();
  // Hand the engine the generating structure and skip re-detection.
  bool oracle_mode = true;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  // When false the seconds column is written as 0 so output is byte-stable.
  bool record_timing = true;

  void validate() const;
};

/// Flat JSON object; every key is optional and overrides the default.
/// Unknown keys are rejected.
ExperimentConfig load_experiment_config(std::istream& in);
ExperimentConfig experiment_config_from_json(const std::string& text);
std::string experiment_config_to_json(const ExperimentConfig& config);

struct MetricsRecord {
  std::string policy;
  std::size_t S = 0;
  std::uint32_t B = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t requests = 0;
  std::uint64_t hits = 0;
  double hit_ratio = 0.0;
  double seconds = 0.0;
  // Empty on success; "empty_trace" for a degenerate 0/0 run; otherwise the
  // failure message.
  std::string error;
};

struct RunInfo {
  std::uint64_t trace_hash = 0;
  std::size_t trace_length = 0;
};

/// Feeds the same trace to a fresh instance of every configured policy.
std::vector<MetricsRecord> run_policies(const ExperimentConfig& config, std::uint64_t seed,
                                        const Trace& trace, const CommunityStructure& truth,
                                        const ZipfPopularity& popularity);

/// Generates the workload for `seed` and runs every configured policy.
std::vector<MetricsRecord> run_experiment(const ExperimentConfig& config, std::uint64_t seed,
                                          RunInfo* info = nullptr);

/// Builds one policy by canonical name.
std::unique_ptr<CachePolicy> make_policy(const std::string& name, const ExperimentConfig& config,
                                         std::uint64_t seed, const CommunityStructure& truth,
                                         const ZipfPopularity& popularity);

struct SweepGrid {
  std::vector<std::size_t> S;
  std::vector<std::uint32_t> B;
  std::vector<double> alpha;

  std::size_t cells() const { return S.size() * B.size() * alpha.size(); }
};

SweepGrid load_sweep_grid(std::istream& in);

/// Cartesian product of the grid with the configured seeds. Rows are ordered
/// by cell (S, then B, then alpha, in grid order), then policy, then seed.
/// A failing (cell, seed) produces rows carrying the error message.
std::vector<MetricsRecord> sweep(const SweepGrid& grid, const ExperimentConfig& base,
                                 unsigned jobs = 1);

inline constexpr const char* kMetricsHeader =
    "policy,S,B,alpha,seed,requests,hits,hit_ratio,seconds,error";

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRecord>& rows);
std::vector<MetricsRecord> read_metrics_csv(std::istream& in);

}  // namespace bingo
