#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "ranklab/prank.hpp"

using namespace ranklab;

namespace {

// Independent rank oracle: grow every elementary abelian subgroup level by
// level, as sorted index sets, until no level-(k+1) subgroup exists.
std::size_t naive_rank(const GroupTable& g) {
  const auto p = g.ctx().p();
  std::vector<std::size_t> order_p;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g[i].is_identity() && mat_pow(g[i], p).is_identity()) order_p.push_back(i);
  }
  if (order_p.empty()) return 0;
  auto generate = [&](const std::vector<std::size_t>& base, std::size_t x) {
    std::set<std::size_t> out(base.begin(), base.end());
    SquareMatrix power = g[x];
    for (std::uint32_t c = 1; c < p; ++c) {
      for (auto b : base) out.insert(*g.index_of(g[b] * power));
      power = power * g[x];
    }
    return std::vector<std::size_t>(out.begin(), out.end());
  };
  const std::size_t id = *g.index_of(SquareMatrix::identity(g.ctx(), g.n()));
  std::set<std::vector<std::size_t>> level{{id}};
  std::size_t k = 0;
  while (true) {
    std::set<std::vector<std::size_t>> next;
    for (const auto& sub : level) {
      for (auto x : order_p) {
        if (std::binary_search(sub.begin(), sub.end(), x)) continue;
        bool commutes = true;
        for (auto s : sub) {
          if (!commute(g[s], g[x])) {
            commutes = false;
            break;
          }
        }
        if (commutes) next.insert(generate(sub, x));
      }
    }
    if (next.empty()) return k;
    level = std::move(next);
    ++k;
  }
}

SquareMatrix random_invertible(const ModulusContext& ctx, std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> d(0, ctx.q() - 1);
  while (true) {
    std::vector<std::int64_t> v(n * n);
    for (auto& x : v) x = d(rng);
    auto m = SquareMatrix::from_entries(ctx, n, v);
    if (ctx.is_unit(det(m))) return m;
  }
}

}  // namespace

TEST_CASE("rank matches the naive subgroup oracle", "[prank][oracle]") {
  struct Cell {
    GroupKind kind;
    std::size_t n;
    std::uint32_t p, e;
  };
  const std::vector<Cell> cells{
      {GroupKind::SL, 2, 2, 1}, {GroupKind::SL, 2, 3, 1}, {GroupKind::SL, 2, 5, 1}, {GroupKind::SL, 2, 7, 1},
      {GroupKind::SL, 2, 2, 2}, {GroupKind::SL, 2, 2, 3}, {GroupKind::SL, 2, 3, 2}, {GroupKind::GL, 2, 2, 2},
      {GroupKind::GL, 2, 3, 1}, {GroupKind::GL, 2, 5, 1}, {GroupKind::SL, 3, 2, 1}, {GroupKind::GL, 2, 2, 3},
      {GroupKind::SL, 2, 2, 4}, {GroupKind::GL, 3, 2, 1}};
  for (const auto& c : cells) {
    const auto g = enumerate_group(c.kind, c.n, ModulusContext(c.p, c.e));
    REQUIRE(g.size() <= 5000);
    const auto res = p_rank(g);
    INFO(to_string(c.kind) << c.n << " p=" << c.p << " e=" << c.e);
    CHECK(res.rank == naive_rank(g));
    CHECK(res.witness.rank() == res.rank);
    CHECK(is_valid_witness(res.witness));
    for (const auto& b : res.witness.basis) CHECK(g.contains(b));
  }
}

TEST_CASE("rank table for SL_2", "[prank]") {
  for (auto [p, e] : {std::pair{2u, 1u}, {3u, 1u}, {5u, 1u}, {3u, 2u}, {2u, 2u}, {2u, 3u}}) {
    const auto g = enumerate_group(GroupKind::SL, 2, ModulusContext(p, e));
    CHECK(p_rank(g).rank == expected_sl2_rank(p, e));
  }
}

TEST_CASE("rank is conjugation invariant", "[prank][property]") {
  std::mt19937_64 rng(99);
  for (auto [p, e] : {std::pair{2u, 2u}, {3u, 2u}, {2u, 3u}}) {
    const ModulusContext ctx(p, e);
    // Upper unitriangular matrices over Z/p^e form a non-normal subgroup.
    std::vector<SquareMatrix> upper;
    for (std::uint32_t b = 0; b < ctx.q(); ++b) upper.push_back(SquareMatrix::from_rows(ctx, {{1, b}, {0, 1}}));
    const auto u = GroupTable::from_elements(ctx, 2, upper);
    const auto g = enumerate_group(GroupKind::SL, 2, ctx);
    const auto h1 = congruence_kernel(g, 1);
    for (int i = 0; i < 5; ++i) {
      const auto x = random_invertible(ctx, 2, rng);
      CHECK(p_rank(conjugate(u, x)).rank == p_rank(u).rank);
      CHECK(p_rank(conjugate(h1, x)).rank == p_rank(h1).rank);
    }
  }
}

TEST_CASE("search budget", "[prank]") {
  const auto g = enumerate_group(GroupKind::SL, 2, ModulusContext(2, 3));
  RankSearchOptions tiny;
  tiny.budget = 3;
  CHECK_THROWS_MATCHES(p_rank(g, tiny), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::SearchBudgetExceeded && is_infeasible(e.kind());
                       }));
}

TEST_CASE("trivial and p-free groups", "[prank]") {
  const ModulusContext ctx(3, 1);
  const auto trivial = GroupTable::from_elements(ctx, 2, {SquareMatrix::identity(ctx, 2)});
  CHECK(p_rank(trivial).rank == 0);
  const auto minus = GroupTable::from_elements(
      ctx, 2, {SquareMatrix::identity(ctx, 2), SquareMatrix::from_rows(ctx, {{2, 0}, {0, 2}})});
  CHECK(p_rank(minus).rank == 0);
}

TEST_CASE("Sylow-restricted rank", "[prank]") {
  CHECK(sylow_restricted_rank(GroupKind::SL, 4, 2).rank == 4);
  CHECK(sylow_restricted_rank(GroupKind::SL, 4, 3).rank == 4);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) CHECK(sylow_restricted_rank(GroupKind::SL, 2, p).rank == 1);
  // Agrees with the full search where both are feasible.
  CHECK(sylow_restricted_rank(GroupKind::SL, 3, 2).rank == p_rank(enumerate_group(GroupKind::SL, 3, ModulusContext(2, 1))).rank);
  CHECK(sylow_restricted_rank(GroupKind::GL, 3, 3).rank == 2);
  CHECK_THROWS_AS(sylow_restricted_rank(GroupKind::SL, 2, 3, 2), Error);
  CHECK_THROWS_AS(sylow_restricted_rank(GroupKind::SL, 5, 2), Error);
}

TEST_CASE("kernel lemma", "[prank]") {
  for (auto kind : {GroupKind::SL, GroupKind::GL}) {
    CHECK(verify_kernel_lemma(kind, 2, 3, 3, LemmaVariant::OddP).holds());
    CHECK(verify_kernel_lemma(kind, 2, 5, 2, LemmaVariant::OddP).holds());
    CHECK(verify_kernel_lemma(kind, 2, 2, 4, LemmaVariant::Two).holds());
    CHECK(verify_kernel_lemma(kind, 2, 2, 3, LemmaVariant::Two).holds());
  }
  const auto probe = verify_kernel_lemma(GroupKind::SL, 2, 2, 3, LemmaVariant::ProbeH1);
  CHECK_FALSE(probe.holds());
  const auto three = SquareMatrix::from_rows(ModulusContext(2, 3), {{3, 0}, {0, 3}});
  CHECK(std::find(probe.violations.begin(), probe.violations.end(), three) != probe.violations.end());
  CHECK_THROWS_AS(verify_kernel_lemma(GroupKind::SL, 2, 2, 3, LemmaVariant::OddP), Error);
  CHECK_THROWS_AS(verify_kernel_lemma(GroupKind::SL, 2, 3, 3, LemmaVariant::Two), Error);
}

TEST_CASE("Lie kernel basis spans the top congruence kernel", "[prank]") {
  for (auto [p, e] : {std::pair{2u, 3u}, {3u, 2u}, {5u, 2u}}) {
    const ModulusContext ctx(p, e);
    for (auto kind : {GroupKind::SL, GroupKind::GL}) {
      const auto w = lie_kernel_basis(kind, 2, ctx);
      CHECK(w.rank() == (kind == GroupKind::SL ? 3u : 4u));
      auto span = witness_span(w, ctx, 2);
      std::sort(span.begin(), span.end());
      const auto top = congruence_kernel(enumerate_group(kind, 2, ctx), e - 1);
      CHECK(span == top.elements());
      CHECK(rank_upper_bound(w.rank(), 1) >= w.rank());
    }
  }
  CHECK(lie_kernel_basis(GroupKind::SL, 4, ModulusContext(3, 2)).rank() == 15);
  CHECK_THROWS_AS(lie_kernel_basis(GroupKind::SL, 2, ModulusContext(3, 1)), Error);
}

TEST_CASE("involution census", "[prank]") {
  for (std::uint32_t e : {3u, 4u, 5u}) {
    const auto c = involution_census_sl2(e);
    CHECK(c.size() == 16);
    CHECK(c.equals_expected_set);
    CHECK(c.matches_form);
    CHECK(c.elementary_abelian);
    CHECK(c.rank == 4);
  }
  const auto c2 = involution_census_sl2(2);
  CHECK(c2.size() == 8);
  CHECK(c2.equals_expected_set);
  CHECK(c2.rank == 3);
  // Cross-check the e = 3 census against a direct square test on SL_2(Z/8).
  const auto g = enumerate_group(GroupKind::SL, 2, ModulusContext(2, 3));
  std::vector<SquareMatrix> sq;
  for (const auto& m : g.elements()) {
    if ((m * m).is_identity()) sq.push_back(m);
  }
  CHECK(sq == involution_census_sl2(3).elements);
  CHECK_THROWS_AS(involution_census_sl2(1), Error);
  CHECK_THROWS_AS(involution_census_sl2(6, 1u << 20), Error);
}

TEST_CASE("subadditivity across congruence levels", "[prank][property]") {
  for (auto [p, e] : {std::pair{2u, 2u}, {2u, 3u}, {3u, 2u}}) {
    const auto g = enumerate_group(GroupKind::SL, 2, ModulusContext(p, e));
    for (std::uint32_t j = 1; j < e; ++j) {
      const auto r = subadditivity_check(g, j);
      CHECK(r.holds());
      CHECK(r.group_rank == expected_sl2_rank(p, e));
      CHECK(r.image_rank == expected_sl2_rank(p, j));
    }
    CHECK_THROWS_AS(subadditivity_check(g, e), Error);
  }
}

TEST_CASE("witness span and validation", "[prank]") {
  const ModulusContext ctx(3, 1);
  const auto a = SquareMatrix::from_rows(ctx, {{1, 1}, {0, 1}});
  CHECK(is_valid_witness(RankWitness{{a}}));
  CHECK_FALSE(is_valid_witness(RankWitness{{a, mat_pow(a, 2)}}));
  CHECK_FALSE(is_valid_witness(RankWitness{{a, SquareMatrix::from_rows(ctx, {{1, 0}, {1, 1}})}}));
  CHECK(witness_span(RankWitness{{a}}, ctx, 2).size() == 3);
}

TEST_CASE("top-kernel independence agrees with span distinctness", "[prank][property]") {
  std::mt19937_64 rng(4242);
  for (auto [p, e] : {std::pair{3u, 2u}, {2u, 3u}, {5u, 2u}}) {
    const ModulusContext ctx(p, e);
    const auto top = congruence_kernel(enumerate_group(GroupKind::GL, 2, ctx), e - 1);
    std::uniform_int_distribution<std::size_t> pick(0, top.size() - 1);
    for (int i = 0; i < 200; ++i) {
      RankWitness w;
      const std::size_t k = 1 + i % 4;
      for (std::size_t j = 0; j < k; ++j) w.basis.push_back(top[pick(rng)]);
      auto span = witness_span(w, ctx, 2);
      std::sort(span.begin(), span.end());
      const bool distinct = std::adjacent_find(span.begin(), span.end()) == span.end();
      const bool order_ok = std::none_of(w.basis.begin(), w.basis.end(), [](const auto& b) { return b.is_identity(); });
      REQUIRE(is_valid_witness(w) == (distinct && order_ok));
    }
  }
}
