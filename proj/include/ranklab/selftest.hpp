#pragma once

/**
 * @file selftest.hpp
 * @brief Grid-driven self-test that runs every module-level verification and
 * assembles a JSON report.
 *
 * A grid is a JSON object whose keys select check families; see
 * default_grid() for the full layout. Cells inside a family are run in
 * sorted parameter order so the report does not depend on file order.
 * Errors raised inside a cell propagate as ranklab::Error with the cell id
 * prefixed to the message.
 */

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "ranklab/error.hpp"
#include "ranklab/matgroup.hpp"
#include "ranklab/prank.hpp"
#include "ranklab/report.hpp"
#include "ranklab/symbolalg.hpp"
#include "ranklab/symplectic.hpp"
#include "ranklab/verdict.hpp"

namespace ranklab {

inline GroupKind group_kind_from_string(const std::string& s) {
  if (s == "sl" || s == "SL") return GroupKind::SL;
  if (s == "gl" || s == "GL") return GroupKind::GL;
  throw Error(ErrorKind::InvalidArgument, "unknown group '" + s + "' (expected sl or gl)");
}

inline std::string group_label(GroupKind kind, std::size_t n) {
  return std::string(to_string(kind)) + std::to_string(n);
}

/// The grid covering every acceptance criterion.
inline nlohmann::json default_grid() {
  using nlohmann::json;
  json grid;
  grid["rank_table"] = json::array();
  for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {5, 1}, {3, 2}, {3, 3}, {5, 2}, {2, 2}, {2, 3}, {2, 4}}) {
    grid["rank_table"].push_back({{"group", "sl"}, {"n", 2}, {"p", p}, {"e", e}});
  }
  grid["sylow_rank"] = json::array();
  for (auto [n, p] : std::vector<std::pair<int, int>>{{4, 2}, {4, 3}, {2, 2}, {2, 3}, {2, 5}, {2, 7}}) {
    grid["sylow_rank"].push_back({{"group", "sl"}, {"n", n}, {"p", p}});
  }
  grid["kernel_lemma"] = json::array();
  for (const char* group : {"sl", "gl"}) {
    for (auto [p, e] : std::vector<std::pair<int, int>>{{3, 3}, {5, 2}, {2, 4}}) {
      grid["kernel_lemma"].push_back({{"group", group}, {"n", 2}, {"p", p}, {"e", e}});
    }
  }
  grid["h1_probe"] = json::array({json{{"group", "sl"}, {"n", 2}, {"p", 2}, {"e", 3}}});
  grid["involutions"] = json::array({2, 3, 4, 5});
  grid["lagrangians"] = json::array();
  for (auto [p, r] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {5, 1}, {7, 1}}) {
    grid["lagrangians"].push_back({{"p", p}, {"r", r}});
  }
  grid["pairing"] = json::array();
  for (int p : {2, 3, 5}) {
    for (int r : {1, 2, 3}) grid["pairing"].push_back({{"p", p}, {"r", r}});
  }
  grid["valuation"] = {{"pairs", 10000}, {"seed", 20240611}, {"cells", json::array()}};
  for (int p : {2, 3}) {
    for (int r : {1, 2}) grid["valuation"]["cells"].push_back({{"p", p}, {"r", r}});
  }
  grid["index"] = json::array();
  for (int p : {2, 3, 5, 7}) {
    for (int r : {1, 2, 3, 4}) grid["index"].push_back({{"p", p}, {"r", r}});
  }
  grid["theorem"] = {{"primes", {2, 3, 5, 7}}, {"genera", {1, 2, 3}}};
  grid["subadditivity"] = json::array();
  for (auto [p, e] : std::vector<std::pair<int, int>>{{3, 2}, {3, 3}, {5, 2}, {2, 2}, {2, 3}, {2, 4}}) {
    for (int j = 1; j < e; ++j) grid["subadditivity"].push_back({{"p", p}, {"e", e}, {"j", j}});
  }
  return grid;
}

/// Lagrangian cells list the RREF bases in the witness up to this many subspaces.
inline constexpr std::uint64_t kMaxListedSubspaces = 200;

struct SelftestOptions {
  EnumerationOptions enumeration;
  RankSearchOptions search;
  LagrangianOptions lagrangian;
};

namespace detail {

inline std::uint32_t u32(const nlohmann::json& cell, const char* key) { return cell.at(key).get<std::uint32_t>(); }

template <class Fn>
CheckResult run_cell(const std::string& id, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& err) {
    throw Error(err.kind(), id + ": " + err.what());
  } catch (const nlohmann::json::exception& err) {
    throw Error(ErrorKind::InvalidArgument, id + ": malformed grid cell: " + err.what());
  }
}

inline std::vector<nlohmann::json> sorted_cells(const nlohmann::json& arr, std::vector<std::string> keys) {
  std::vector<nlohmann::json> cells(arr.begin(), arr.end());
  std::stable_sort(cells.begin(), cells.end(), [&](const nlohmann::json& a, const nlohmann::json& b) {
    for (const auto& k : keys) {
      const auto va = a.value(k, nlohmann::json());
      const auto vb = b.value(k, nlohmann::json());
      if (va != vb) return va < vb;
    }
    return false;
  });
  return cells;
}

inline CheckStatus pass_if(bool ok) { return ok ? CheckStatus::Pass : CheckStatus::Fail; }

}  // namespace detail

namespace detail {

inline Report run_selftest_unchecked(const nlohmann::json& grid, const SelftestOptions& opts) {
  using nlohmann::json;
  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.params = {{"grid", grid}};
  auto& out = report.results;

  for (const auto& cell : detail::sorted_cells(grid.value("rank_table", json::array()), {"group", "n", "p", "e"})) {
    const auto kind = group_kind_from_string(cell.value("group", std::string("sl")));
    const std::size_t n = cell.value("n", 2);
    const auto p = detail::u32(cell, "p");
    const auto e = detail::u32(cell, "e");
    const std::string id = "rank/" + group_label(kind, n) + "/p=" + std::to_string(p) + "/e=" + std::to_string(e);
    out.push_back(detail::run_cell(id, [&] {
      const auto g = enumerate_group(kind, n, ModulusContext(p, e), opts.enumeration);
      const auto res = p_rank(g, opts.search);
      const auto bound = known_rank_bound(kind, n, p, e);
      bool ok = is_valid_witness(res.witness) && res.witness.rank() == res.rank;
      if (bound) ok = ok && (bound->exact ? res.rank == bound->value : res.rank <= bound->value);
      json value = {{"rank", res.rank}, {"group_order", g.size()}};
      if (bound) value["expected"] = bound->value;
      return CheckResult{id, detail::pass_if(ok), value, witness_to_json(res.witness),
                         "exhaustive p-rank against the known value or bound"};
    }));
  }

  for (const auto& cell : detail::sorted_cells(grid.value("sylow_rank", json::array()), {"group", "n", "p"})) {
    const auto kind = group_kind_from_string(cell.value("group", std::string("sl")));
    const std::size_t n = cell.at("n").get<std::size_t>();
    const auto p = detail::u32(cell, "p");
    const std::uint32_t e = cell.value("e", 1u);
    std::string id = "sylow-rank/" + group_label(kind, n) + "/p=" + std::to_string(p);
    if (e != 1) id += "/e=" + std::to_string(e);
    out.push_back(detail::run_cell(id, [&] {
      const auto res = sylow_restricted_rank(kind, n, p, e, opts.search);
      const auto bound = known_rank_bound(kind, n, p, e);
      bool ok = is_valid_witness(res.witness);
      if (bound) ok = ok && res.rank == bound->value;
      json value = {{"rank", res.rank}};
      if (bound) value["expected"] = bound->value;
      return CheckResult{id, detail::pass_if(ok), value, witness_to_json(res.witness),
                         "rank_p(SL_2g(Z/p)) = g^2"};
    }));
  }

  for (const auto& cell : detail::sorted_cells(grid.value("kernel_lemma", json::array()), {"group", "n", "p", "e"})) {
    const auto kind = group_kind_from_string(cell.value("group", std::string("sl")));
    const std::size_t n = cell.value("n", 2);
    const auto p = detail::u32(cell, "p");
    const auto e = detail::u32(cell, "e");
    const std::string id =
        "kernel-lemma/" + group_label(kind, n) + "/p=" + std::to_string(p) + "/e=" + std::to_string(e);
    out.push_back(detail::run_cell(id, [&] {
      const auto variant = p == 2 ? LemmaVariant::Two : LemmaVariant::OddP;
      const auto rep = verify_kernel_lemma(kind, n, p, e, variant, opts.enumeration);
      CheckResult r{id, detail::pass_if(rep.holds()),
                    {{"variant", to_string(variant)}, {"checked", rep.checked_count}, {"violations", rep.violations.size()}},
                    std::nullopt,
                    "order-p elements of H_1 (H_2 when p = 2) lie in H_{e-1}"};
      if (!rep.holds()) r.witness = witness_to_json(RankWitness{rep.violations});
      return r;
    }));
  }

  for (const auto& cell : detail::sorted_cells(grid.value("h1_probe", json::array()), {"group", "n", "p", "e"})) {
    const auto kind = group_kind_from_string(cell.value("group", std::string("sl")));
    const std::size_t n = cell.value("n", 2);
    const auto p = detail::u32(cell, "p");
    const auto e = detail::u32(cell, "e");
    const std::string id = "h1-probe/" + group_label(kind, n) + "/p=" + std::to_string(p) + "/e=" + std::to_string(e);
    out.push_back(detail::run_cell(id, [&] {
      const auto rep = verify_kernel_lemma(kind, n, p, e, LemmaVariant::ProbeH1, opts.enumeration);
      const auto three = [&] {
        SquareMatrix m(ModulusContext(p, e), n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, Residue{3});
        return m;
      }();
      const bool found_3i = std::find(rep.violations.begin(), rep.violations.end(), three) != rep.violations.end();
      return CheckResult{id, found_3i ? CheckStatus::ExpectedFail : CheckStatus::Fail,
                         {{"checked", rep.checked_count}, {"violations", rep.violations.size()},
                          {"expected_violation_found", found_3i}},
                         witness_to_json(RankWitness{rep.violations}),
                         "expected violation: the H_1 version of the kernel lemma is false for p = 2"};
    }));
  }

  {
    std::vector<std::uint32_t> es;
    for (const auto& v : grid.value("involutions", json::array())) es.push_back(v.get<std::uint32_t>());
    std::sort(es.begin(), es.end());
    for (auto e : es) {
      const std::string id = "involutions/e=" + std::to_string(e);
      out.push_back(detail::run_cell(id, [&] {
        const auto c = involution_census_sl2(e);
        const std::size_t want_size = e >= 3 ? 16 : 8;
        const std::size_t want_rank = e >= 3 ? 4 : 3;
        const bool ok = c.size() == want_size && c.equals_expected_set && c.matches_form && c.elementary_abelian &&
                        c.rank == want_rank;
        return CheckResult{id, detail::pass_if(ok),
                           {{"size", c.size()}, {"rank", c.rank}, {"equals_expected_set", c.equals_expected_set},
                            {"matches_form", c.matches_form}, {"elementary_abelian", c.elementary_abelian}},
                           std::nullopt, "elements of order dividing 2 in SL_2(Z/2^e) form (Z/2)^4"};
      }));
    }
  }

  for (const auto& cell : detail::sorted_cells(grid.value("lagrangians", json::array()), {"p", "r"})) {
    const auto p = detail::u32(cell, "p");
    const auto r = detail::u32(cell, "r");
    const std::string id = "lagrangians/p=" + std::to_string(p) + "/r=" + std::to_string(r);
    out.push_back(detail::run_cell(id, [&] {
      const SymplecticSpace space(p, r);
      const auto rep = lagrangian_order_check(space, opts.lagrangian);
      const auto oracle = lagrangian_count_oracle(p, r);
      const bool ok = rep.holds() && rep.lagrangian_count == oracle;
      CheckResult res{id, detail::pass_if(ok),
                      {{"count", rep.lagrangian_count}, {"oracle", oracle},
                       {"all_dimension_r", rep.all_dimension_r}, {"matches_bruteforce", rep.matches_enumeration}},
                      std::nullopt, "Lagrangians satisfy |H|^2 = |A|"};
      if (rep.lagrangian_count <= kMaxListedSubspaces) {
        json bases = json::array();
        for (const auto& l : enumerate_lagrangians(space, opts.lagrangian)) bases.push_back(l.basis());
        res.witness = bases;
      }
      return res;
    }));
  }

  for (const auto& cell : detail::sorted_cells(grid.value("pairing", json::array()), {"p", "r"})) {
    const auto p = detail::u32(cell, "p");
    const auto r = detail::u32(cell, "r");
    const std::string id = "pairing/p=" + std::to_string(p) + "/r=" + std::to_string(r);
    out.push_back(detail::run_cell(id, [&] {
      const AlgebraPresentation pres(p, r);
      const bool standard = pairing_matches_standard_form(pres, split_permutation(r));
      const bool bilinear = pairing_is_biadditive_alternating(pres);
      return CheckResult{id, detail::pass_if(standard && bilinear),
                         {{"matches_standard_form", standard}, {"biadditive_alternating", bilinear}}, std::nullopt,
                         "canonical pairing is the standard symplectic form"};
    }));
  }

  if (grid.contains("valuation")) {
    const auto& val = grid.at("valuation");
    const std::size_t pairs = val.value("pairs", 10000);
    const std::uint64_t seed = val.value("seed", 1);
    for (const auto& cell : detail::sorted_cells(val.value("cells", json::array()), {"p", "r"})) {
      const auto p = detail::u32(cell, "p");
      const auto r = detail::u32(cell, "r");
      const std::string id = "valuation/p=" + std::to_string(p) + "/r=" + std::to_string(r);
      out.push_back(detail::run_cell(id, [&] {
        const AlgebraPresentation pres(p, r);
        std::mt19937_64 rng(seed ^ (std::uint64_t{p} << 32) ^ r);
        std::size_t failures = 0;
        for (std::size_t i = 0; i < pairs; ++i) {
          const auto x = random_element(pres, rng);
          const auto y = random_element(pres, rng);
          const auto xy = x * y;
          if (xy.is_zero() || !(valuation(xy) == valuation(x) + valuation(y))) ++failures;
        }
        return CheckResult{id, detail::pass_if(failures == 0), {{"pairs", pairs}, {"failures", failures}},
                           std::nullopt, "nu(xy) = nu(x) + nu(y)"};
      }));
    }
  }

  for (const auto& cell : detail::sorted_cells(grid.value("index", json::array()), {"p", "r"})) {
    const auto p = detail::u32(cell, "p");
    const auto r = detail::u32(cell, "r");
    const std::string id = "index/p=" + std::to_string(p) + "/r=" + std::to_string(r);
    out.push_back(detail::run_cell(id, [&] {
      const AlgebraPresentation pres(p, r);
      const auto index = value_group_index(pres);
      const auto dim = algebra_dimension(pres);
      return CheckResult{id, detail::pass_if(index == dim && index == checked_pow(p, 2 * r)),
                         {{"index", index}, {"dimension", dim}}, std::nullopt,
                         "totally ramified: value-group index equals the dimension"};
    }));
  }

  if (grid.contains("theorem")) {
    auto primes = grid.at("theorem").value("primes", std::vector<std::uint32_t>{});
    auto genera = grid.at("theorem").value("genera", std::vector<std::uint32_t>{});
    std::sort(primes.begin(), primes.end());
    std::sort(genera.begin(), genera.end());
    for (auto p : primes) {
      for (auto g : genera) {
        const std::string id = "theorem/p=" + std::to_string(p) + "/g=" + std::to_string(g);
        out.push_back(detail::run_cell(id, [&] {
          const auto t = threshold(p, g);
          const auto at = verdict(TheoremParams{p, g, static_cast<std::uint32_t>(t), std::nullopt});
          const auto below = verdict(TheoremParams{p, g, static_cast<std::uint32_t>(t - 1), std::nullopt});
          bool ok = at.contradiction && !below.contradiction;
          if (g == 1) ok = ok && galois_rank_bound(p, std::nullopt, 1) == (p > 2 ? 5u : 6u);
          return CheckResult{id, detail::pass_if(ok),
                             {{"threshold", t}, {"upper_bound", at.upper_bound},
                              {"contradiction_at_threshold", at.contradiction},
                              {"contradiction_below", below.contradiction}},
                             std::nullopt, "threshold table of the non-splitting theorem"};
        }));
      }
    }
  }

  for (const auto& cell : detail::sorted_cells(grid.value("subadditivity", json::array()), {"p", "e", "j"})) {
    const auto p = detail::u32(cell, "p");
    const auto e = detail::u32(cell, "e");
    const auto j = detail::u32(cell, "j");
    const std::string id =
        "subadditivity/SL2/p=" + std::to_string(p) + "/e=" + std::to_string(e) + "/j=" + std::to_string(j);
    out.push_back(detail::run_cell(id, [&] {
      const auto g = enumerate_group(GroupKind::SL, 2, ModulusContext(p, e), opts.enumeration);
      const auto rep = subadditivity_check(g, j, opts.search);
      return CheckResult{id, detail::pass_if(rep.holds()),
                         {{"rank_group", rep.group_rank}, {"rank_kernel", rep.kernel_rank},
                          {"rank_image", rep.image_rank}},
                         std::nullopt, "subadditivity of the p-rank in short exact sequences"};
    }));
  }

  report.elapsed_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count());
  return report;
}

}  // namespace detail

/// Runs every section present in the grid. Malformed grids raise
/// InvalidArgument; infeasible cells raise the module's error with the cell id.
inline Report run_selftest(const nlohmann::json& grid, const SelftestOptions& opts = {}) {
  try {
    return detail::run_selftest_unchecked(grid, opts);
  } catch (const nlohmann::json::exception& err) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed grid: ") + err.what());
  }
}

/// 0 when every check passed (expected failures count as passing), 1 otherwise.
inline int selftest_exit_code(const Report& r) { return r.all_passed() ? 0 : 1; }

}  // namespace ranklab
