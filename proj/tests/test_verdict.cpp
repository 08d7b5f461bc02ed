#include <catch_amalgamated.hpp>

#include "ranklab/verdict.hpp"

using namespace ranklab;

TEST_CASE("threshold table", "[verdict]") {
  CHECK(threshold(3, 1) == 6);
  CHECK(threshold(2, 1) == 7);
  CHECK(threshold(2, 2) == 39);
  CHECK(threshold(5, 2) == 24);
  CHECK(threshold(7, 3) == 51);
  CHECK(threshold(2, 3) == 86);
  CHECK_THROWS_AS(threshold(6, 1), Error);
  CHECK_THROWS_AS(threshold(3, 0), Error);
}

TEST_CASE("rank bounds", "[verdict]") {
  CHECK(sl_rank_bound(3, std::nullopt, 1) == 3);
  CHECK(sl_rank_bound(2, std::nullopt, 1) == 4);
  CHECK(sl_rank_bound(3, std::nullopt, 2) == 19);
  CHECK(sl_rank_bound(2, 5, 2) == 34);
  CHECK(galois_rank_bound(3, std::nullopt, 1) == 5);
  CHECK(galois_rank_bound(2, std::nullopt, 1) == 6);
  CHECK(galois_rank_bound(2, std::nullopt, 2) == 38);
  CHECK(sl_bound_branch(1) == SlBoundBranch::ExactGenusOne);
  CHECK(sl_bound_branch(2) == SlBoundBranch::Generic);
}

TEST_CASE("verdict examples", "[verdict]") {
  const auto a = verdict({3, 1, 6, std::nullopt});
  CHECK(a.contradiction);
  CHECK(a.lower_bound == 6);
  CHECK(a.upper_bound == 5);
  CHECK(a.branch == SlBoundBranch::ExactGenusOne);
  CHECK(chain_is_consistent(a));
  CHECK(a.chain.size() == 5);

  const auto b = verdict({2, 1, 6, std::nullopt});
  CHECK_FALSE(b.contradiction);
  CHECK(b.upper_bound == 6);

  const auto c = verdict({3, 2, 24, std::nullopt});
  CHECK(c.contradiction);
  CHECK(c.upper_bound == 23);

  CHECK_THROWS_AS(verdict({4, 1, 1, std::nullopt}), Error);
  CHECK_THROWS_AS(verdict({3, 1, 0, std::nullopt}), Error);
}

TEST_CASE("verdict cross-checks the computed rank when e is given", "[verdict]") {
  const auto v = verdict({3, 1, 6, 2});
  REQUIRE(v.computed_sl_rank.has_value());
  CHECK(*v.computed_sl_rank == 3);
  CHECK(v.chain[1].computed);
  const auto w = verdict({2, 1, 7, 3});
  REQUIRE(w.computed_sl_rank.has_value());
  CHECK(*w.computed_sl_rank == 4);
  // Too large to enumerate under the default cap: falls back to the cited bound.
  const auto big = verdict({7, 1, 6, 3});
  CHECK_FALSE(big.computed_sl_rank.has_value());
  CHECK_FALSE(big.chain[1].computed);
}

TEST_CASE("monotone in r and threshold is minimal", "[verdict][property]") {
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (std::uint32_t g : {1u, 2u, 3u}) {
      const auto t = static_cast<std::uint32_t>(threshold(p, g));
      CHECK_FALSE(verdict({p, g, t - 1, std::nullopt}).contradiction);
      CHECK(verdict({p, g, t, std::nullopt}).contradiction);
      bool seen = false;
      for (std::uint32_t r = 1; r <= t + 10; ++r) {
        const auto v = verdict({p, g, r, std::nullopt});
        REQUIRE(chain_is_consistent(v));
        REQUIRE(v.contradiction == (r >= t));
        if (seen) REQUIRE(v.contradiction);
        seen = seen || v.contradiction;
        for (const auto& s : v.chain) REQUIRE_FALSE(s.anchor.empty());
      }
    }
  }
}

TEST_CASE("inconsistent chains are detected", "[verdict]") {
  auto v = verdict({3, 1, 6, std::nullopt});
  v.chain[3].value += 1;
  CHECK_FALSE(chain_is_consistent(v));
  auto w = verdict({3, 1, 6, std::nullopt});
  w.chain[0].anchor.clear();
  CHECK_FALSE(chain_is_consistent(w));
}
