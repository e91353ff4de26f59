// src/workload.cpp

#include "bingo/workload.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace bingo {

void CommunityStructure::validate() const {
  for (std::size_t c = 0; c < communities.size(); ++c) {
    const auto& members = communities[c];
    if (members.empty()) {
      throw std::invalid_argument("community " + std::to_string(c) + " is empty");
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (members[i] >= num_users) {
        throw std::invalid_argument("community " + std::to_string(c) + " has member " +
                                    std::to_string(members[i]) + " >= num_users");
      }
      if (i > 0 && members[i - 1] >= members[i]) {
        throw std::invalid_argument("community " + std::to_string(c) +
                                    " members must be sorted and distinct");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Zipf popularity

ZipfPopularity::ZipfPopularity(double alpha, std::uint32_t num_files) : alpha_(alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("zipf alpha must be >= 0");
  if (num_files == 0) throw std::invalid_argument("zipf needs at least one file");

  prob_.resize(num_files);
  long double norm = 0.0L;
  for (std::uint32_t j = 1; j <= num_files; ++j) {
    const long double w = std::pow(static_cast<long double>(j), -static_cast<long double>(alpha));
    prob_[j - 1] = static_cast<double>(w);
    norm += w;
  }
  cdf_.resize(num_files);
  long double acc = 0.0L;
  for (std::uint32_t j = 0; j < num_files; ++j) {
    const long double p = prob_[j] / norm;
    prob_[j] = static_cast<double>(p);
    acc += p;
    cdf_[j] = static_cast<double>(acc);
  }
  cdf_.back() = 1.0;
}

FileId ZipfPopularity::sample(Rng& rng) const {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<FileId>(std::distance(cdf_.begin(), it) + 1);
}

std::shared_ptr<const ZipfPopularity> zipf_popularity(double alpha, std::uint32_t num_files) {
  static std::mutex mu;
  static std::map<std::pair<double, std::uint32_t>, std::shared_ptr<const ZipfPopularity>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{alpha, num_files}];
  if (!slot) slot = std::make_shared<const ZipfPopularity>(alpha, num_files);
  return slot;
}

// ---------------------------------------------------------------------------
// Structure generation

void WorkloadConfig::validate() const {
  if (num_communities == 0) throw std::invalid_argument("num_communities must be >= 1");
  if (size_min < 2) throw std::invalid_argument("size_min must be >= 2");
  if (size_min > size_max) throw std::invalid_argument("size_min must not exceed size_max");
  if (size_max > num_users) throw std::invalid_argument("size_max must not exceed num_users");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) {
    throw std::invalid_argument("noise_rate must lie in [0, 1]");
  }
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  if (num_files == 0) throw std::invalid_argument("num_files must be >= 1");
}

namespace {

std::discrete_distribution<std::uint32_t> size_distribution(const WorkloadConfig& config) {
  std::vector<double> weights;
  weights.reserve(config.size_max - config.size_min + 1);
  for (std::uint32_t s = config.size_min; s <= config.size_max; ++s) {
    weights.push_back(std::pow(static_cast<double>(s), -config.size_exponent));
  }
  return {weights.begin(), weights.end()};
}

std::vector<UserId> sample_members(std::vector<UserId> pool, std::uint32_t count, Rng& rng) {
  std::vector<UserId> members;
  members.reserve(count);
  std::sample(pool.begin(), pool.end(), std::back_inserter(members), count, rng);
  std::sort(members.begin(), members.end());
  return members;
}

std::vector<UserId> all_users(std::uint32_t n) {
  std::vector<UserId> users(n);
  std::iota(users.begin(), users.end(), UserId{0});
  return users;
}

}  // namespace

CommunityStructure generate_structure(const WorkloadConfig& config, Rng& rng) {
  config.validate();
  auto sizes = size_distribution(config);

  CommunityStructure out;
  out.num_users = config.num_users;
  out.communities.reserve(config.num_communities);

  if (!config.disjoint) {
    const auto users = all_users(config.num_users);
    for (std::uint32_t c = 0; c < config.num_communities; ++c) {
      const std::uint32_t size = config.size_min + sizes(rng);
      out.communities.push_back(sample_members(users, size, rng));
    }
    return out;
  }

  std::vector<UserId> free_users = all_users(config.num_users);
  std::shuffle(free_users.begin(), free_users.end(), rng);
  for (std::uint32_t c = 0; c < config.num_communities; ++c) {
    const std::uint32_t size = config.size_min + sizes(rng);
    if (size > free_users.size()) {
      throw std::invalid_argument("disjoint structure needs more than num_users members");
    }
    std::vector<UserId> members(free_users.end() - size, free_users.end());
    free_users.resize(free_users.size() - size);
    std::sort(members.begin(), members.end());
    out.communities.push_back(std::move(members));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Request arrival

namespace {

struct Session {
  std::int32_t community = 0;
  FileId file = 0;
  std::vector<UserId> order;
  std::size_t next = 0;
};

class SessionProcess {
 public:
  SessionProcess(CommunityStructure structure, const ZipfPopularity& pop,
                 const WorkloadConfig& config, Rng& rng)
      : structure_(std::move(structure)), pop_(pop), config_(config), rng_(rng),
        sizes_(size_distribution(config)) {}

  Trace run() {
    Trace trace;
    trace.reserve(config_.total_requests);
    if (config_.total_requests == 0) return trace;

    sessions_.reserve(config_.batch_size);
    for (std::uint32_t b = 0; b < config_.batch_size; ++b) sessions_.push_back(fresh_session());

    std::bernoulli_distribution is_noise(config_.noise_rate);
    std::uniform_int_distribution<UserId> any_user(0, config_.num_users - 1);
    std::uniform_int_distribution<std::size_t> any_session(0, sessions_.size() - 1);

    for (std::uint64_t seq = 0; seq < config_.total_requests; ++seq) {
      if (config_.churn_interval > 0 && seq > 0 && seq % config_.churn_interval == 0) churn();

      Request req;
      req.seq = seq;
      if (is_noise(rng_)) {
        req.user = any_user(rng_);
        req.file = pop_.sample(rng_);
        req.origin = kNoiseOrigin;
      } else {
        Session& s = sessions_[any_session(rng_)];
        req.user = s.order[s.next++];
        req.file = s.file;
        req.origin = s.community;
        if (s.next == s.order.size()) s = fresh_session();
      }
      trace.push_back(req);
    }
    return trace;
  }

  CommunityStructure take_structure() { return std::move(structure_); }

 private:
  Session fresh_session() {
    std::uniform_int_distribution<std::size_t> pick(0, structure_.size() - 1);
    Session s;
    const std::size_t c = pick(rng_);
    s.community = static_cast<std::int32_t>(c);
    s.file = pop_.sample(rng_);
    s.order = structure_.communities[c];
    std::shuffle(s.order.begin(), s.order.end(), rng_);
    return s;
  }

  // Dissolve one community and regenerate it in place, keeping ids dense.
  void churn() {
    std::uniform_int_distribution<std::size_t> pick(0, structure_.size() - 1);
    const std::size_t c = pick(rng_);
    std::uint32_t size = config_.size_min + sizes_(rng_);
    std::vector<UserId> pool;
    if (config_.disjoint) {
      std::vector<bool> taken(config_.num_users, false);
      for (std::size_t k = 0; k < structure_.size(); ++k) {
        if (k == c) continue;
        for (UserId u : structure_.communities[k]) taken[u] = true;
      }
      for (UserId u = 0; u < config_.num_users; ++u) {
        if (!taken[u]) pool.push_back(u);
      }
      size = std::min<std::uint32_t>(size, static_cast<std::uint32_t>(pool.size()));
      if (size < config_.size_min) return;
    } else {
      pool = all_users(config_.num_users);
    }
    structure_.communities[c] = sample_members(std::move(pool), size, rng_);
  }

  CommunityStructure structure_;
  const ZipfPopularity& pop_;
  const WorkloadConfig& config_;
  Rng& rng_;
  std::discrete_distribution<std::uint32_t> sizes_;
  std::vector<Session> sessions_;
};

}  // namespace

Trace simulate_requests(const CommunityStructure& structure, const ZipfPopularity& pop,
                        const WorkloadConfig& config, Rng& rng,
                        CommunityStructure* final_structure) {
  if (structure.num_users != config.num_users) {
    throw std::invalid_argument("structure and config disagree on num_users");
  }
  if (structure.size() == 0) {
    throw std::invalid_argument("cannot simulate sessions over zero communities");
  }
  if (config.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");

  SessionProcess process(structure, pop, config, rng);
  Trace trace = process.run();
  if (final_structure) *final_structure = process.take_structure();
  return trace;
}

std::uint64_t trace_hash(const Trace& trace) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& r : trace) {
    mix(r.seq);
    mix(r.user);
    mix(r.file);
    mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(r.origin)));
  }
  return h;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "seq,user,file,origin\n";
  for (const auto& r : trace) {
    out << r.seq << ',' << r.user << ',' << r.file << ',' << r.origin << '\n';
  }
}

Trace read_trace_csv(std::istream& in) {
  Trace trace;
  std::string line;
  if (!std::getline(in, line) || line.rfind("seq,user,file,origin", 0) != 0) {
    throw std::runtime_error("trace csv: missing header seq,user,file,origin");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    Request r;
    if (!(fields >> r.seq >> r.user >> r.file >> r.origin)) {
      throw std::runtime_error("trace csv: malformed line " + std::to_string(lineno));
    }
    if (!trace.empty() && r.seq <= trace.back().seq) {
      throw std::runtime_error("trace csv: seq must strictly increase (line " +
                               std::to_string(lineno) + ")");
    }
    trace.push_back(r);
  }
  return trace;
}

}  // namespace bingo
