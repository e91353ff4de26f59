#include <algorithm>
#include <random>

#include "bingo/identifier.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bingo;

namespace {

std::vector<UserId> range(UserId lo, UserId hi) {
  std::vector<UserId> v;
  for (UserId u = lo; u < hi; ++u) v.push_back(u);
  return v;
}

// C0..C6 over 100 users. User 90 is in {C1, C2, C6}, 91 in {C2, C6},
// 92 in {C2}; |C2| = 8 and |C6| = 12.
EstimatedStructure three_requesters() {
  CommunityStructure cs;
  cs.num_users = 100;
  cs.communities = {range(0, 3), range(3, 6), range(10, 15), {20, 21, 22}, range(30, 34),
                    range(40, 44), range(50, 60)};
  cs.communities[1].push_back(90);
  for (UserId u : {90, 91, 92}) cs.communities[2].push_back(u);
  for (UserId u : {90, 91}) cs.communities[6].push_back(u);
  for (auto& m : cs.communities) std::sort(m.begin(), m.end());
  return EstimatedStructure(cs);
}

oracle::Memberships table_of(const EstimatedStructure& s) {
  oracle::Memberships m;
  m.of_user.resize(s.structure().num_users);
  for (CommunityId c = 0; c < s.size(); ++c) {
    m.community_size.push_back(s.community_size(c));
    for (UserId u : s.members(c)) m.of_user[u].push_back(c);
  }
  return m;
}

EstimatedStructure random_structure(std::mt19937_64& rng, std::uint32_t users,
                                    std::uint32_t communities) {
  CommunityStructure cs;
  cs.num_users = users;
  for (std::uint32_t c = 0; c < communities; ++c) {
    std::vector<UserId> m;
    for (UserId u = 0; u < users; ++u) {
      if (rng() % 3 == 0) m.push_back(u);
    }
    if (m.empty()) m.push_back(static_cast<UserId>(rng() % users));
    cs.communities.push_back(std::move(m));
  }
  return EstimatedStructure(cs);
}

}  // namespace

TEST_CASE("identify: stops at two candidates and picks the larger") {
  const auto s = three_requesters();
  REQUIRE(s.community_size(2) == 8);
  REQUIRE(s.community_size(6) == 12);
  const std::vector<UserId> req{92, 91, 90};
  const auto r = identify(req, s, 2);
  REQUIRE(r);
  CHECK(r->community == 6);
  CHECK(r->size == 12);
}

TEST_CASE("identify: nobody has a membership") {
  const auto s = three_requesters();
  const std::vector<UserId> req{95, 96, 97};
  CHECK_FALSE(identify(req, s, 2));
}

TEST_CASE("identify: single requester in one community") {
  const auto s = three_requesters();
  const std::vector<UserId> req{21};
  const auto r = identify(req, s, 2);
  REQUIRE(r);
  CHECK(r->community == 3);
  CHECK(r->size == 3);
}

TEST_CASE("identify: an emptying intersection is not applied") {
  const auto s = three_requesters();
  // 90 -> {1, 2, 6}; 0 -> {0}: empty, so the candidates stay {1, 2, 6}.
  const std::vector<UserId> req{90, 0};
  const auto r = identify(req, s, 1);
  REQUIRE(r);
  CHECK(r->community == 6);
}

TEST_CASE("identify: rejects empty input and rho=0") {
  const auto s = three_requesters();
  CHECK_THROWS_AS(identify(std::vector<UserId>{}, s, 2), std::invalid_argument);
  CHECK_THROWS_AS(identify(std::vector<UserId>{1}, s, 0), std::invalid_argument);
}

TEST_CASE("identify: ties on size go to the smaller community id") {
  CommunityStructure cs;
  cs.num_users = 10;
  cs.communities = {{0, 1, 2}, {3, 4, 5}, {1, 4, 6}};
  const EstimatedStructure s(cs);
  // User 1 -> {0, 2}: two candidates of size 3.
  const auto r = identify(std::vector<UserId>{1}, s, 2);
  REQUIRE(r);
  CHECK(r->community == 0);
}

TEST_CASE("identify: matches the prefix-intersection oracle") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::uint32_t users = 4 + rng() % 20;
    const std::uint32_t k = 1 + rng() % 10;
    const auto s = random_structure(rng, users, k);
    const auto table = table_of(s);
    std::vector<UserId> req;
    const std::size_t n = 1 + rng() % 8;
    for (std::size_t i = 0; i < n; ++i) req.push_back(static_cast<UserId>(rng() % (users + 3)));
    const std::uint32_t rho = 1 + rng() % 3;

    const auto got = identify(req, s, rho);
    const auto want = oracle::identify_by_prefixes(req, table, rho);
    REQUIRE(got.has_value() == want.has_value());
    if (!got) continue;
    CHECK(got->community == *want);
    CHECK(got->size == s.community_size(got->community));
    // The winner contains a requester that has memberships.
    CHECK(std::any_of(req.begin(), req.end(),
                      [&](UserId u) { return u < users && s.contains(got->community, u); }));

    auto shuffled = req;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(identify(shuffled, s, rho) == got);

    // A requester with no memberships never changes the outcome.
    auto noisy = req;
    noisy.push_back(users + 50);
    CHECK(identify(noisy, s, rho) == got);
  }
}
