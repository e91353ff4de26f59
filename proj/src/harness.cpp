// src/harness.cpp

#include "bingo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace bingo {

using nlohmann::json;

const std::vector<std::string>& all_policies() {
  static const std::vector<std::string> names = {"BINGO", "FIFO", "LRU", "LFU", "MPC", "RND"};
  return names;
}

void ExperimentConfig::validate() const {
  workload.validate();
  engine.validate();
  if (policies.empty()) throw std::invalid_argument("at least one policy is required");
  for (const auto& p : policies) {
    const auto& known = all_policies();
    if (std::find(known.begin(), known.end(), p) == known.end()) {
      throw std::invalid_argument("unknown policy '" + p + "'");
    }
  }
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
}

// ---------------------------------------------------------------------------
// JSON config

namespace {

template <typename T>
void take(const json& j, const char* key, T& field, std::vector<std::string>& used) {
  if (j.contains(key)) {
    field = j.at(key).get<T>();
    used.emplace_back(key);
  }
}

}  // namespace

ExperimentConfig experiment_config_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

  ExperimentConfig c;
  std::vector<std::string> used;
  auto& w = c.workload;
  take(j, "num_users", w.num_users, used);
  take(j, "num_communities", w.num_communities, used);
  take(j, "size_exponent", w.size_exponent, used);
  take(j, "size_min", w.size_min, used);
  take(j, "size_max", w.size_max, used);
  take(j, "batch_size", w.batch_size, used);
  take(j, "noise_rate", w.noise_rate, used);
  take(j, "total_requests", w.total_requests, used);
  take(j, "churn_interval", w.churn_interval, used);
  take(j, "seed", w.seed, used);
  take(j, "alpha", w.alpha, used);
  take(j, "num_files", w.num_files, used);
  take(j, "disjoint", w.disjoint, used);

  auto& e = c.engine;
  take(j, "cache_capacity", e.cache_capacity, used);
  take(j, "chunk_length", e.chunk_length, used);
  take(j, "beta", e.beta, used);
  take(j, "xi", e.xi, used);
  take(j, "rho", e.rho, used);
  take(j, "staleness_window", e.staleness_window, used);
  take(j, "pending_cap", e.pending_cap, used);
  take(j, "min_size", e.detection.min_size, used);
  take(j, "phi_max", e.detection.phi_max, used);
  take(j, "max_expansion", e.detection.max_expansion, used);

  take(j, "policies", c.policies, used);
  take(j, "oracle_mode", c.oracle_mode, used);
  take(j, "seeds", c.seeds, used);
  take(j, "record_timing", c.record_timing, used);

  for (const auto& [key, value] : j.items()) {
    if (std::find(used.begin(), used.end(), key) == used.end()) {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  return c;
}

ExperimentConfig load_experiment_config(std::istream& in) {
  std::stringstream buf;
  buf << in.rdbuf();
  return experiment_config_from_json(buf.str());
}

std::string experiment_config_to_json(const ExperimentConfig& c) {
  const auto& w = c.workload;
  const auto& e = c.engine;
  json j = {
      {"num_users", w.num_users},
      {"num_communities", w.num_communities},
      {"size_exponent", w.size_exponent},
      {"size_min", w.size_min},
      {"size_max", w.size_max},
      {"batch_size", w.batch_size},
      {"noise_rate", w.noise_rate},
      {"total_requests", w.total_requests},
      {"churn_interval", w.churn_interval},
      {"seed", w.seed},
      {"alpha", w.alpha},
      {"num_files", w.num_files},
      {"disjoint", w.disjoint},
      {"cache_capacity", e.cache_capacity},
      {"chunk_length", e.chunk_length},
      {"beta", e.beta},
      {"xi", e.xi},
      {"rho", e.rho},
      {"staleness_window", e.staleness_window},
      {"pending_cap", e.pending_cap},
      {"min_size", e.detection.min_size},
      {"phi_max", e.detection.phi_max},
      {"max_expansion", e.detection.max_expansion},
      {"policies", c.policies},
      {"oracle_mode", c.oracle_mode},
      {"seeds", c.seeds},
      {"record_timing", c.record_timing},
  };
  return j.dump(2);
}

SweepGrid load_sweep_grid(std::istream& in) {
  const json j = json::parse(in);
  SweepGrid g;
  if (j.contains("S")) g.S = j.at("S").get<std::vector<std::size_t>>();
  if (j.contains("B")) g.B = j.at("B").get<std::vector<std::uint32_t>>();
  if (j.contains("alpha")) g.alpha = j.at("alpha").get<std::vector<double>>();
  return g;
}

// ---------------------------------------------------------------------------
// Runs

std::unique_ptr<CachePolicy> make_policy(const std::string& name, const ExperimentConfig& config,
                                         std::uint64_t seed, const CommunityStructure& truth,
                                         const ZipfPopularity& popularity) {
  const std::size_t S = config.engine.cache_capacity;
  if (name == "BINGO") {
    if (config.oracle_mode) {
      return std::make_unique<BingoEngine>(config.engine,
                                           std::make_shared<const EstimatedStructure>(truth));
    }
    return std::make_unique<BingoEngine>(config.engine);
  }
  if (name == "FIFO") return make_fifo(S);
  if (name == "LRU") return make_lru(S);
  if (name == "LFU") return make_lfu(S);
  if (name == "MPC") return make_mpc(S, popularity);
  if (name == "RND") return make_rnd(S, seed ^ 0x9e3779b97f4a7c15ULL);
  throw std::invalid_argument("unknown policy '" + name + "'");
}

std::vector<MetricsRecord> run_policies(const ExperimentConfig& config, std::uint64_t seed,
                                        const Trace& trace, const CommunityStructure& truth,
                                        const ZipfPopularity& popularity) {
  std::vector<MetricsRecord> out;
  out.reserve(config.policies.size());
  for (const auto& name : config.policies) {
    MetricsRecord rec;
    rec.policy = name;
    rec.S = config.engine.cache_capacity;
    rec.B = config.workload.batch_size;
    rec.alpha = config.workload.alpha;
    rec.seed = seed;
    rec.requests = trace.size();

    const auto start = std::chrono::steady_clock::now();
    auto policy = make_policy(name, config, seed, truth, popularity);
    for (const auto& r : trace) {
      if (policy->on_request(r.user, r.file) == Outcome::Hit) ++rec.hits;
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    if (config.record_timing) rec.seconds = elapsed.count();
    if (rec.requests == 0) {
      rec.error = "empty_trace";
    } else {
      rec.hit_ratio = static_cast<double>(rec.hits) / static_cast<double>(rec.requests);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<MetricsRecord> run_experiment(const ExperimentConfig& config, std::uint64_t seed,
                                          RunInfo* info) {
  config.validate();
  WorkloadConfig wc = config.workload;
  wc.seed = seed;

  Rng rng(seed);
  const CommunityStructure truth = generate_structure(wc, rng);
  const auto popularity = zipf_popularity(wc.alpha, wc.num_files);
  const Trace trace = simulate_requests(truth, *popularity, wc, rng);
  if (info) {
    info->trace_hash = trace_hash(trace);
    info->trace_length = trace.size();
  }
  return run_policies(config, seed, trace, truth, *popularity);
}

std::vector<MetricsRecord> sweep(const SweepGrid& grid, const ExperimentConfig& base,
                                 unsigned jobs) {
  if (grid.cells() == 0) throw std::invalid_argument("sweep grid is empty");
  base.validate();

  struct Task {
    ExperimentConfig config;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t S : grid.S) {
    for (std::uint32_t B : grid.B) {
      for (double alpha : grid.alpha) {
        ExperimentConfig c = base;
        c.engine.cache_capacity = S;
        c.workload.batch_size = B;
        c.workload.alpha = alpha;
        for (std::uint64_t seed : base.seeds) tasks.push_back({c, seed});
      }
    }
  }

  std::vector<std::vector<MetricsRecord>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      try {
        results[i] = run_experiment(t.config, t.seed);
      } catch (const std::exception& ex) {
        for (const auto& name : t.config.policies) {
          MetricsRecord rec;
          rec.policy = name;
          rec.S = t.config.engine.cache_capacity;
          rec.B = t.config.workload.batch_size;
          rec.alpha = t.config.workload.alpha;
          rec.seed = t.seed;
          rec.error = ex.what();
          results[i].push_back(std::move(rec));
        }
      }
    }
  };
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Tasks are laid out cell-major, seed-minor; emit policy-major within a cell.
  std::vector<MetricsRecord> rows;
  rows.reserve(tasks.size() * base.policies.size());
  const std::size_t per_cell = base.seeds.size();
  for (std::size_t cell = 0; cell < grid.cells(); ++cell) {
    for (std::size_t p = 0; p < base.policies.size(); ++p) {
      for (std::size_t s = 0; s < per_cell; ++s) {
        rows.push_back(results[cell * per_cell + s][p]);
      }
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string format_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch == '\n' ? ' ' : ch;
  }
  return q + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

}  // namespace

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRecord>& rows) {
  out << kMetricsHeader << '\n';
  for (const auto& r : rows) {
    out << csv_field(r.policy) << ',' << r.S << ',' << r.B << ',' << format_double("%g", r.alpha)
        << ',' << r.seed << ',' << r.requests << ',' << r.hits << ','
        << format_double("%.6f", r.hit_ratio) << ',' << format_double("%.6f", r.seconds) << ','
        << csv_field(r.error) << '\n';
  }
}

std::vector<MetricsRecord> read_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind(kMetricsHeader, 0) != 0) {
    throw std::runtime_error(std::string("metrics csv: expected header ") + kMetricsHeader);
  }
  std::vector<MetricsRecord> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != 10) {
      throw std::runtime_error("metrics csv: line " + std::to_string(lineno) +
                               " has " + std::to_string(f.size()) + " fields");
    }
    try {
      MetricsRecord r;
      r.policy = f[0];
      r.S = std::stoull(f[1]);
      r.B = static_cast<std::uint32_t>(std::stoul(f[2]));
      r.alpha = std::stod(f[3]);
      r.seed = std::stoull(f[4]);
      r.requests = std::stoull(f[5]);
      r.hits = std::stoull(f[6]);
      r.hit_ratio = std::stod(f[7]);
      r.seconds = std::stod(f[8]);
      r.error = f[9];
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw std::runtime_error("metrics csv: malformed number on line " + std::to_string(lineno));
    }
  }
  return rows;
}

}  // namespace bingo
