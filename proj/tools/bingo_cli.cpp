// tools/bingo_cli.cpp
//
// Command line front end.
//
//   bingo generate --config cfg.json --seed 7 --out trace.csv
//   bingo run      --config cfg.json [--trace trace.csv] --out metrics.csv
//   bingo sweep    --config cfg.json --grid grid.json --jobs 4 --out sweep.csv
//   bingo chart    --input sweep.csv --axis S --out chart.svg
//
// Flags given on the command line override the config file. For `sweep`,
// --cache-capacity / --batch-size / --alpha take comma separated lists and
// override the matching grid axis.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bingo/chart.hpp"
#include "bingo/harness.hpp"
#include "bingo/workload.hpp"

namespace {

struct Options {
  std::string config_path;
  std::vector<std::uint64_t> seeds;
  std::vector<std::size_t> cache_capacity;
  std::vector<std::uint32_t> batch_size;
  std::vector<double> alpha;
  std::optional<std::uint64_t> chunk_size;
  std::vector<std::string> policies;
  bool oracle = false;
  bool detect = false;
  bool no_timing = false;
  std::string out;
  unsigned jobs = 1;
  std::string trace_path;
  std::string grid_path;
  std::string input;
  std::string axis = "S";
};

bingo::ExperimentConfig build_config(const Options& o) {
  bingo::ExperimentConfig c;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw std::runtime_error("cannot open config " + o.config_path);
    c = bingo::load_experiment_config(in);
  }
  if (!o.seeds.empty()) c.seeds = o.seeds;
  if (!o.cache_capacity.empty()) c.engine.cache_capacity = o.cache_capacity.front();
  if (!o.batch_size.empty()) c.workload.batch_size = o.batch_size.front();
  if (!o.alpha.empty()) c.workload.alpha = o.alpha.front();
  if (o.chunk_size) c.engine.chunk_length = *o.chunk_size;
  if (!o.policies.empty()) c.policies = o.policies;
  if (o.oracle) c.oracle_mode = true;
  if (o.detect) c.oracle_mode = false;
  if (o.no_timing) c.record_timing = false;
  c.validate();
  return c;
}

// Writes to --out, or stdout when no path was given.
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  fn(out);
}

int cmd_generate(const Options& o) {
  const auto c = build_config(o);
  auto wc = c.workload;
  wc.seed = c.seeds.front();
  bingo::Rng rng(wc.seed);
  const auto structure = bingo::generate_structure(wc, rng);
  const auto pop = bingo::zipf_popularity(wc.alpha, wc.num_files);
  const auto trace = bingo::simulate_requests(structure, *pop, wc, rng);
  with_output(o.out, [&](std::ostream& out) { bingo::write_trace_csv(out, trace); });
  std::cerr << "generated " << trace.size() << " requests, trace hash " << std::hex
            << bingo::trace_hash(trace) << std::dec << '\n';
  return 0;
}

int cmd_run(const Options& o) {
  const auto c = build_config(o);
  std::vector<bingo::MetricsRecord> rows;
  for (std::uint64_t seed : c.seeds) {
    if (o.trace_path.empty()) {
      bingo::RunInfo info;
      auto recs = bingo::run_experiment(c, seed, &info);
      std::cerr << "seed " << seed << ": " << info.trace_length << " requests, trace hash "
                << std::hex << info.trace_hash << std::dec << '\n';
      rows.insert(rows.end(), recs.begin(), recs.end());
      continue;
    }
    // A supplied trace replaces the simulated one; the structure is
    // regenerated from the same config and seed that produced the trace.
    std::ifstream in(o.trace_path);
    if (!in) throw std::runtime_error("cannot open trace " + o.trace_path);
    const auto trace = bingo::read_trace_csv(in);
    auto wc = c.workload;
    wc.seed = seed;
    bingo::Rng rng(seed);
    const auto truth = bingo::generate_structure(wc, rng);
    const auto pop = bingo::zipf_popularity(wc.alpha, wc.num_files);
    auto recs = bingo::run_policies(c, seed, trace, truth, *pop);
    rows.insert(rows.end(), recs.begin(), recs.end());
  }
  with_output(o.out, [&](std::ostream& out) { bingo::write_metrics_csv(out, rows); });
  return 0;
}

int cmd_sweep(const Options& o) {
  Options single = o;
  single.cache_capacity.clear();
  single.batch_size.clear();
  single.alpha.clear();
  const auto c = build_config(single);

  bingo::SweepGrid grid;
  if (!o.grid_path.empty()) {
    std::ifstream in(o.grid_path);
    if (!in) throw std::runtime_error("cannot open grid " + o.grid_path);
    grid = bingo::load_sweep_grid(in);
  }
  if (!o.cache_capacity.empty()) grid.S = o.cache_capacity;
  if (!o.batch_size.empty()) grid.B = o.batch_size;
  if (!o.alpha.empty()) grid.alpha = o.alpha;
  if (grid.S.empty()) grid.S = {c.engine.cache_capacity};
  if (grid.B.empty()) grid.B = {c.workload.batch_size};
  if (grid.alpha.empty()) grid.alpha = {c.workload.alpha};

  const auto rows = bingo::sweep(grid, c, o.jobs);
  with_output(o.out, [&](std::ostream& out) { bingo::write_metrics_csv(out, rows); });
  return 0;
}

int cmd_chart(const Options& o) {
  std::ifstream in(o.input);
  if (!in) throw std::runtime_error("cannot open metrics " + o.input);
  const auto rows = bingo::read_metrics_csv(in);
  const auto svg = bingo::emit_chart(rows, bingo::parse_chart_axis(o.axis));
  with_output(o.out, [&](std::ostream& out) { out << svg; });
  return 0;
}

void add_experiment_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seeds, "Seed list")->delimiter(',');
  cmd->add_option("--cache-capacity", o.cache_capacity, "Cache capacity S")->delimiter(',');
  cmd->add_option("--batch-size", o.batch_size, "Active sessions B")->delimiter(',');
  cmd->add_option("--alpha", o.alpha, "Zipf exponent")->delimiter(',');
  cmd->add_option("--chunk-size", o.chunk_size, "Chunk length L in requests");
  cmd->add_option("--policies", o.policies, "Subset of BINGO,FIFO,LRU,LFU,MPC,RND")
      ->delimiter(',');
  cmd->add_flag("--oracle", o.oracle, "Give the engine the generating community structure");
  cmd->add_flag("--detect", o.detect, "Estimate communities from the request log instead");
  cmd->add_flag("--no-timing", o.no_timing, "Write 0 in the seconds column");
  cmd->add_option("--out", o.out, "Output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Community-aware edge caching simulator"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "Write a synthetic request trace as CSV");
  add_experiment_flags(gen, o);

  auto* run = app.add_subcommand("run", "Run the configured policies on one trace per seed");
  add_experiment_flags(run, o);
  run->add_option("--trace", o.trace_path, "Replay this trace CSV")->check(CLI::ExistingFile);

  auto* sw = app.add_subcommand("sweep", "Grid over S, B and alpha");
  add_experiment_flags(sw, o);
  sw->add_option("--grid", o.grid_path, "JSON object with S, B and alpha lists")
      ->check(CLI::ExistingFile);
  sw->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* chart = app.add_subcommand("chart", "Render a metrics CSV as an SVG line chart");
  chart->add_option("--input", o.input, "Metrics CSV")->required()->check(CLI::ExistingFile);
  chart->add_option("--axis", o.axis, "S, B or alpha")->check(CLI::IsMember({"S", "B", "alpha"}));
  chart->add_option("--out", o.out, "Output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_generate(o);
    if (*run) return cmd_run(o);
    if (*sw) return cmd_sweep(o);
    if (*chart) return cmd_chart(o);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 1;
}
