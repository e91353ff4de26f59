// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Tolerances are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "bingo/community_graph.hpp"
#include "bingo/engine.hpp"
#include "bingo/harness.hpp"
#include "bingo/identifier.hpp"
#include "bingo/scored_heap_cache.hpp"
#include "bingo/workload.hpp"
#include "oracles.hpp"

using namespace bingo;

namespace {

constexpr double kTrendTolerance = 0.01;   // 1 percentage point per step
constexpr double kMinMedianGain = 0.10;    // relative, over the best baseline
constexpr double kBandLow = 0.30;
constexpr double kBandHigh = 0.34;
constexpr double kMaxSeconds = 300.0;
constexpr double kZipfL1 = 0.01;
constexpr double kMinF1 = 0.9;
constexpr int kOracleCases = 1000;
constexpr int kHeapSteps = 10000;

constexpr std::size_t kDefaultS = 50;
constexpr std::uint32_t kDefaultB = 80;
constexpr double kDefaultAlpha = 0.6;
const std::vector<std::uint32_t> kBatchAxis = {5, 10, 20, 40, 80};
const std::vector<std::size_t> kCapacityAxis = {20, 50, 100, 200};
const std::vector<double> kAlphaAxis = {0.4, 0.6, 0.8, 1.0};
const std::vector<std::string> kBaselines = {"FIFO", "LRU", "LFU", "MPC", "RND"};

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  if (!ok) ++failures;
  std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
}

void info(const std::string& name, const std::string& detail) {
  std::printf("[INFO] %s: %s\n", name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

unsigned workers() { return std::max(1U, std::thread::hardware_concurrency()); }

ExperimentConfig base_config() {
  ExperimentConfig c;
  c.record_timing = false;
  c.engine.cache_capacity = kDefaultS;
  c.workload.batch_size = kDefaultB;
  c.workload.alpha = kDefaultAlpha;
  return c;
}

using CellKey = std::tuple<std::size_t, std::uint32_t, double>;

struct Table {
  // (cell, policy) -> per-seed hit ratios in seed order
  std::map<std::pair<CellKey, std::string>, std::vector<double>> ratios;
  std::size_t error_rows = 0;

  void add(const std::vector<MetricsRecord>& rows) {
    for (const auto& r : rows) {
      if (!r.error.empty()) {
        ++error_rows;
        continue;
      }
      ratios[{{r.S, r.B, r.alpha}, r.policy}].push_back(r.hit_ratio);
    }
  }
  double mean(const CellKey& cell, const std::string& policy) const {
    const auto& v = ratios.at({cell, policy});
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  }
  const std::vector<double>& seeds(const CellKey& cell, const std::string& policy) const {
    return ratios.at({cell, policy});
  }
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string best_baseline(const Table& t, const CellKey& cell) {
  std::string best = kBaselines.front();
  for (const auto& p : kBaselines) {
    if (t.mean(cell, p) > t.mean(cell, best)) best = p;
  }
  return best;
}

// Checks that every policy's mean is non-increasing (sign=-1) or
// non-decreasing (sign=+1) along `cells`, allowing kTrendTolerance per step.
bool monotone(const Table& t, const std::vector<CellKey>& cells, int sign, std::string& detail) {
  bool ok = true;
  std::ostringstream d;
  for (const auto& p : all_policies()) {
    d << p << "[";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const double m = t.mean(cells[i], p);
      d << (i ? " " : "") << fmt("%.3f", m);
      if (i > 0) {
        const double step = (m - t.mean(cells[i - 1], p)) * sign;
        if (step < -kTrendTolerance) {
          ok = false;
          d << "!";
        }
      }
    }
    d << "] ";
  }
  detail = d.str();
  return ok;
}

// ---------------------------------------------------------------------------

void gain_criterion(const Table& t, double seconds) {
  const CellKey cell{kDefaultS, kDefaultB, kDefaultAlpha};
  const double bingo = t.mean(cell, "BINGO");
  bool beats_all = true;
  std::ostringstream d;
  d << "BINGO " << fmt("%.4f", bingo);
  for (const auto& p : kBaselines) {
    const double m = t.mean(cell, p);
    d << ", " << p << " " << fmt("%.4f", m);
    beats_all = beats_all && bingo > m;
  }
  report(beats_all, "gain: Bingo mean exceeds every baseline on the default cell", d.str());

  const auto best = best_baseline(t, cell);
  const auto& b = t.seeds(cell, "BINGO");
  const auto& o = t.seeds(cell, best);
  std::vector<double> gains;
  for (std::size_t i = 0; i < b.size(); ++i) gains.push_back((b[i] - o[i]) / o[i]);
  const double med = median(gains);
  report(med >= kMinMedianGain, "gain: median per-seed relative gain over best baseline >= 10%",
         "best baseline " + best + ", median gain " + fmt("%.2f%%", 100 * med));

  report(seconds <= kMaxSeconds, "gain: default cell runtime <= 300 s",
         fmt("%.1f s for 10 seeds x 6 policies, single worker", seconds));
}

void band_report(const Table& t) {
  std::set<CellKey> cells;
  for (const auto& [key, v] : t.ratios) cells.insert(key.first);
  double top = -1e9;
  CellKey where{};
  bool in_band = false;
  for (const auto& cell : cells) {
    const double g = (t.mean(cell, "BINGO") - t.mean(cell, best_baseline(t, cell))) /
                     t.mean(cell, best_baseline(t, cell));
    if (g > top) {
      top = g;
      where = cell;
    }
    in_band = in_band || (g >= kBandLow && g <= kBandHigh);
  }
  info("gain: 30-34% band",
       std::string(in_band ? "reached" : "not reached") + " in any evaluated cell; largest gain " +
           fmt("%.2f%%", 100 * top) + " at S=" + std::to_string(std::get<0>(where)) +
           " B=" + std::to_string(std::get<1>(where)) + " alpha=" +
           fmt("%g", std::get<2>(where)));
}

void batch_trend(const Table& t) {
  std::vector<CellKey> cells;
  for (auto B : kBatchAxis) cells.emplace_back(kDefaultS, B, kDefaultAlpha);
  std::string d;
  const bool ok = monotone(t, cells, -1, d);
  report(ok, "traffic trend: mean hit ratio non-increasing in B, 1 pp tolerance", d);
}

void capacity_trend(const Table& t) {
  std::vector<CellKey> cells;
  for (auto S : kCapacityAxis) cells.emplace_back(S, kDefaultB, kDefaultAlpha);
  std::string d;
  const bool ok = monotone(t, cells, +1, d);
  report(ok, "capacity trend: mean hit ratio non-decreasing in S, 1 pp tolerance", d);

  bool widening = true;
  std::ostringstream g;
  double prev = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto best = best_baseline(t, cells[i]);
    const double gap = t.mean(cells[i], "BINGO") - t.mean(cells[i], best);
    g << (i ? ", " : "") << "S=" << std::get<0>(cells[i]) << " " << fmt("%+.3f", gap) << " vs "
      << best;
    if (i > 0 && gap < prev - kTrendTolerance) widening = false;
    prev = gap;
  }
  report(widening, "capacity trend: Bingo minus best baseline gap does not shrink in S", g.str());
}

void alpha_trend(const Table& t) {
  std::vector<CellKey> cells;
  for (double a : kAlphaAxis) {
    if (a <= 0.8) cells.emplace_back(kDefaultS, kDefaultB, a);
  }
  std::string d;
  const bool ok = monotone(t, cells, +1, d);
  report(ok, "popularity trend: mean hit ratio non-decreasing for alpha in {0.4,0.6,0.8}", d);

  const CellKey lo{kDefaultS, kDefaultB, 0.8};
  const CellKey hi{kDefaultS, kDefaultB, 1.0};
  const double bingo_step = t.mean(hi, "BINGO") - t.mean(lo, "BINGO");
  bool larger = true;
  std::ostringstream s;
  s << "BINGO " << fmt("%+.3f", bingo_step);
  for (const char* p : {"MPC", "LFU", "LRU"}) {
    const double step = t.mean(hi, p) - t.mean(lo, p);
    s << ", " << p << " " << fmt("%+.3f", step);
    larger = larger && step > bingo_step;
  }
  report(larger, "popularity trend: 0.8 -> 1.0 step larger for MPC, LFU, LRU than Bingo", s.str());
}

// ---------------------------------------------------------------------------

void graph_oracle() {
  std::mt19937_64 rng(2718);
  int mismatches = 0;
  for (int trial = 0; trial < kOracleCases; ++trial) {
    const UserId users = 2 + rng() % 49;
    const FileId files = 1 + rng() % 40;
    const std::size_t n = rng() % 600;
    const std::uint32_t beta = 1 + rng() % 4;
    RequestLog log;
    for (std::size_t i = 0; i < n; ++i) {
      log.push_back({static_cast<UserId>(rng() % users), static_cast<FileId>(rng() % files)});
    }
    std::map<std::pair<UserId, UserId>, std::uint32_t> got;
    for (const auto& [u, v, w] : build_graph(log, beta).edges()) got[{u, v}] = w;
    mismatches += got != oracle::pairwise_common_files(log, beta);
  }
  report(mismatches == 0, "oracle: build_graph equals brute-force pairwise counting",
         std::to_string(kOracleCases) + " random logs, " + std::to_string(mismatches) +
             " mismatches");
}

void identify_oracle() {
  std::mt19937_64 rng(31415);
  int mismatches = 0;
  for (int trial = 0; trial < kOracleCases; ++trial) {
    const std::uint32_t users = 4 + rng() % 20;
    const std::uint32_t k = 1 + rng() % 10;
    CommunityStructure cs;
    cs.num_users = users;
    oracle::Memberships table;
    table.of_user.resize(users);
    for (std::uint32_t c = 0; c < k; ++c) {
      std::vector<UserId> m;
      for (UserId u = 0; u < users; ++u) {
        if (rng() % 3 == 0) m.push_back(u);
      }
      if (m.empty()) m.push_back(static_cast<UserId>(rng() % users));
      for (UserId u : m) table.of_user[u].push_back(c);
      table.community_size.push_back(m.size());
      cs.communities.push_back(std::move(m));
    }
    const EstimatedStructure s(cs);
    std::vector<UserId> req;
    const std::size_t n = 1 + rng() % 8;
    for (std::size_t i = 0; i < n; ++i) req.push_back(static_cast<UserId>(rng() % (users + 3)));
    const std::uint32_t rho = 1 + rng() % 3;
    const auto got = identify(req, s, rho);
    const auto want = oracle::identify_by_prefixes(req, table, rho);
    const bool same = got.has_value() == want.has_value() && (!got || got->community == *want);
    mismatches += !same;
  }
  report(mismatches == 0, "oracle: identify equals brute-force prefix intersection",
         std::to_string(kOracleCases) + " random cases, " + std::to_string(mismatches) +
             " mismatches");
}

void heap_oracle() {
  std::mt19937_64 rng(1618);
  const std::size_t cap = 32;
  ScoredHeapCache heap(cap);
  oracle::LinearScanCache ref(cap);
  int bad_steps = 0;
  for (int step = 0; step < kHeapSteps; ++step) {
    const FileId f = static_cast<FileId>(rng() % 100);
    const auto s = static_cast<std::int64_t>(rng() % 30);
    switch (rng() % 4) {
      case 0:
      case 1:
        if (heap.contains(f)) break;
        if (!heap.full()) {
          heap.insert(f, s);
          ref.insert(f, s);
        } else if (s > ref.min().score) {
          bad_steps += heap.replace_min(f, s) != ref.replace_min(f, s);
        }
        break;
      case 2:
        if (!heap.contains(f)) break;
        heap.update_key(f, s);
        ref.update_key(f, s);
        break;
      default:
        if (heap.empty()) break;
        bad_steps += heap.pop_min().file != ref.pop_min().file;
        break;
    }
    std::vector<oracle::LinearScanCache::Entry> snap;
    for (const auto& e : heap.entries()) snap.push_back({e.file, e.score, e.stamp});
    std::sort(snap.begin(), snap.end());
    bad_steps += snap != ref.sorted() || !heap.check_invariants();
  }
  report(bad_steps == 0, "oracle: ScoredHeapCache equals linear-scan reference",
         std::to_string(kHeapSteps) + " steps, " + std::to_string(bad_steps) +
             " steps with differing state");
}

// ---------------------------------------------------------------------------

void engine_invariants() {
  std::uint64_t violations[4] = {0, 0, 0, 0};  // conservation, occupancy, score, heap
  std::uint64_t requests = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    WorkloadConfig wc;
    wc.total_requests = 30000;
    Rng rng(seed);
    const auto truth = generate_structure(wc, rng);
    const auto trace = simulate_requests(truth, *zipf_popularity(wc.alpha, wc.num_files), wc, rng);
    for (bool oracle_mode : {true, false}) {
      EngineConfig c;
      c.chunk_length = 5000;
      BingoEngine e = oracle_mode
                          ? BingoEngine(c, std::make_shared<const EstimatedStructure>(truth))
                          : BingoEngine(c);
      for (const auto& r : trace) {
        e.on_request(r.user, r.file);
        ++requests;
        const auto& k = e.counters();
        violations[0] += k.hits + k.misses != k.requests;
        violations[1] += e.occupancy() > c.cache_capacity;
        for (const auto& entry : e.cache().entries()) {
          const FileState* st = e.state(entry.file);
          if (!st || !st->chi) continue;
          violations[2] += entry.score != std::max<Score>(0, st->admitted_score - st->member_hits);
        }
        violations[3] += !e.cache().check_invariants();
      }
    }
  }
  const char* names[4] = {"conservation hits+misses=total", "occupancy <= S",
                          "score accounting identity", "heap property"};
  for (int i = 0; i < 4; ++i) {
    report(violations[i] == 0, std::string("invariant: ") + names[i],
           std::to_string(requests) + " requests checked, " + std::to_string(violations[i]) +
               " violations");
  }
}

void reproducibility() {
  WorkloadConfig wc;
  wc.total_requests = 50000;
  auto trace_bytes = [&] {
    Rng rng(77);
    const auto s = generate_structure(wc, rng);
    std::ostringstream out;
    write_trace_csv(out, simulate_requests(s, *zipf_popularity(wc.alpha, wc.num_files), wc, rng));
    return out.str();
  };
  report(trace_bytes() == trace_bytes(), "invariant: trace byte reproducibility",
         "two generations of seed 77 compared");

  auto c = base_config();
  c.workload.total_requests = 20000;
  c.seeds = {1, 2, 3};
  const SweepGrid g{{20, 50}, {10, 40}, {0.6, 1.0}};
  auto sweep_bytes = [&](unsigned jobs) {
    std::ostringstream out;
    write_metrics_csv(out, sweep(g, c, jobs));
    return out.str();
  };
  const unsigned threads = std::max(4U, workers());
  const auto a = sweep_bytes(1);
  report(a == sweep_bytes(1) && a == sweep_bytes(threads), "invariant: sweep byte reproducibility",
         "8 cells x 3 seeds, serial twice and with " + std::to_string(threads) + " workers");
}

void closed_form() {
  CommunityStructure cs;
  cs.num_users = 50;
  cs.communities.emplace_back();
  for (UserId u = 0; u < 50; ++u) cs.communities[0].push_back(u);
  EngineConfig c;
  c.cache_capacity = 1;
  c.xi = 4;
  BingoEngine e(c, std::make_shared<const EstimatedStructure>(cs));

  // One session through the workload generator: B=1, no noise, 50 requests.
  WorkloadConfig wc;
  wc.num_users = 50;
  wc.num_communities = 1;
  wc.size_min = 50;
  wc.size_max = 50;
  wc.batch_size = 1;
  wc.noise_rate = 0.0;
  wc.total_requests = 50;
  Rng rng(1);
  const auto trace = simulate_requests(cs, *zipf_popularity(0.6, 1000), wc, rng);
  int hits = 0;
  for (const auto& r : trace) hits += e.on_request(r.user, r.file) == Outcome::Hit;
  report(hits == 46, "scenario: one community of 50, S=1, xi=4 gives 46 hits",
         std::to_string(hits) + " hits of " + std::to_string(trace.size()));
}

void zipf_sampler() {
  const ZipfPopularity pop(1.2, 100);
  Rng rng(4242);
  std::vector<double> freq(101, 0.0);
  const int n = 1000000;
  for (int i = 0; i < n; ++i) freq[sample_file(pop, rng)] += 1.0;
  double norm = 0;
  for (int j = 1; j <= 100; ++j) norm += std::pow(j, -1.2);
  double l1 = 0;
  for (int j = 1; j <= 100; ++j) l1 += std::abs(freq[j] / n - std::pow(j, -1.2) / norm);
  report(l1 < kZipfL1, "zipf: L1 distance at F=100, alpha=1.2, 10^6 samples < 0.01",
         fmt("L1 = %.5f", l1));
}

void detection_recovery() {
  std::vector<UserId> users;
  std::vector<std::tuple<UserId, UserId, std::uint32_t>> edges;
  for (UserId base : {0U, 5U}) {
    for (UserId u = base; u < base + 5; ++u) {
      users.push_back(u);
      for (UserId v = u + 1; v < base + 5; ++v) edges.emplace_back(u, v, 1);
    }
  }
  const auto two = detect_communities(UserGraph(users, edges), {});
  const std::set<std::vector<UserId>> got(two.structure().communities.begin(),
                                          two.structure().communities.end());
  report(got == std::set<std::vector<UserId>>{{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}} && two.size() == 2,
         "detection: two disjoint 5-cliques recovered exactly",
         std::to_string(two.size()) + " communities found");

  std::ostringstream d;
  double worst = 1.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    WorkloadConfig wc;
    wc.disjoint = true;
    wc.noise_rate = 0.0;
    wc.total_requests = 10000;
    Rng rng(seed);
    const auto truth = generate_structure(wc, rng);
    const auto trace = simulate_requests(truth, *zipf_popularity(wc.alpha, wc.num_files), wc, rng);
    RequestLog log;
    for (const auto& r : trace) log.push_back({r.user, r.file});
    const EngineConfig ec;
    const auto found = detect_communities(build_graph(log, ec.beta), ec.detection);
    const double f1 = oracle::average_f1(truth.communities, found.structure().communities);
    worst = std::min(worst, f1);
    d << (seed > 1 ? ", " : "") << fmt("%.3f", f1);
  }
  report(worst >= kMinF1, "detection: planted disjoint structure, eta=0, L=10^4, F1 >= 0.9",
         "F1 per seed " + d.str());
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();

  // Default cell alone, single worker, for the runtime budget.
  const auto base = base_config();
  const auto c0 = std::chrono::steady_clock::now();
  const auto default_rows = sweep(SweepGrid{{kDefaultS}, {kDefaultB}, {kDefaultAlpha}}, base, 1);
  const double default_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - c0).count();

  Table t;
  t.add(default_rows);
  t.add(sweep(SweepGrid{{kDefaultS}, {5, 10, 20, 40}, {kDefaultAlpha}}, base, workers()));
  t.add(sweep(SweepGrid{{20, 100, 200}, {kDefaultB}, {kDefaultAlpha}}, base, workers()));
  t.add(sweep(SweepGrid{{kDefaultS}, {kDefaultB}, {0.4, 0.8, 1.0}}, base, workers()));
  report(t.error_rows == 0, "harness: every sweep cell ran without error",
         std::to_string(t.error_rows) + " error rows");

  gain_criterion(t, default_seconds);
  band_report(t);
  batch_trend(t);
  capacity_trend(t);
  alpha_trend(t);

  graph_oracle();
  identify_oracle();
  heap_oracle();
  engine_invariants();
  reproducibility();
  closed_form();
  zipf_sampler();
  detection_recovery();

  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d criteria failed; total %.1f s\n", failures, total);
  return failures == 0 ? 0 : 1;
}
