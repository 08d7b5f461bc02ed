// Command-line front end for the ranklab library.
//
// Every subcommand produces a check report; the default output is a
// human-readable table, --json prints the report and --csv prints the
// rank or threshold table where one applies.
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or infeasibility.

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "ranklab/ranklab.hpp"

namespace {

using nlohmann::json;
using namespace ranklab;

enum class Format { Table, Json, Csv };

void print_table(const Report& rep, std::ostream& os) {
  std::size_t width = 8;
  for (const auto& r : rep.results) width = std::max(width, r.check_id.size());
  os << std::left << std::setw(static_cast<int>(width)) << "check" << "  " << std::setw(15) << "status"
     << "value\n";
  for (const auto& r : rep.results) {
    os << std::setw(static_cast<int>(width)) << r.check_id << "  " << std::setw(15) << to_string(r.status)
       << r.value.dump() << '\n';
  }
  std::size_t failed = 0;
  for (const auto& r : rep.results) failed += r.status == CheckStatus::Fail;
  os << rep.results.size() << " checks, " << failed << " failed, " << rep.elapsed_ms << " ms\n";
}

void print_generic_csv(const Report& rep, std::ostream& os) {
  os << "check_id,status,value\n";
  for (const auto& r : rep.results) {
    std::string v = r.value.dump();
    std::string quoted;
    for (char c : v) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    os << r.check_id << ',' << to_string(r.status) << ",\"" << quoted << "\"\n";
  }
}

struct Emitter {
  Format format = Format::Table;

  int emit(const Report& rep, const std::function<void(std::ostream&)>& csv = {}) const {
    switch (format) {
      case Format::Json: std::cout << json(rep).dump(2) << '\n'; break;
      case Format::Csv:
        if (csv) {
          csv(std::cout);
        } else {
          print_generic_csv(rep, std::cout);
        }
        break;
      case Format::Table: print_table(rep, std::cout); break;
    }
    return selftest_exit_code(rep);
  }
};

Report one_section(const std::string& key, json cells, const SelftestOptions& opts = {}) {
  json grid;
  grid[key] = std::move(cells);
  return run_selftest(grid, opts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ranklab: p-ranks of matrix groups, Lagrangians and symbol algebras"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  bool as_csv = false;
  app.add_flag("--json", as_json, "print the JSON report");
  app.add_flag("--csv", as_csv, "print the rank or threshold table as CSV");

  std::string group = "sl";
  std::uint32_t n = 2, p = 2, e = 1, r = 1, g = 1;
  std::optional<std::uint32_t> opt_e;
  bool sylow = false, probe_h1 = false, count_only = false;
  std::uint64_t max_order = EnumerationOptions{}.max_order;
  std::uint64_t budget = RankSearchOptions{}.budget;
  std::string grid_file;

  auto* prank = app.add_subcommand("prank", "p-rank of SL_n or GL_n over Z/p^e");
  prank->add_option("--group", group, "sl or gl")->check(CLI::IsMember({"sl", "gl"}));
  prank->add_option("--n", n)->required();
  prank->add_option("--p", p)->required();
  prank->add_option("--e", e)->required();
  prank->add_flag("--sylow", sylow, "search the unitriangular Sylow subgroup (e = 1)");
  prank->add_option("--max-order", max_order, "enumeration cap");
  prank->add_option("--budget", budget, "search step budget");

  auto* lemma = app.add_subcommand("lemma", "order-p elements of the congruence kernel");
  lemma->add_option("--n", n)->required();
  lemma->add_option("--p", p)->required();
  lemma->add_option("--e", e)->required();
  lemma->add_option("--group", group, "sl or gl (default both)")->check(CLI::IsMember({"sl", "gl"}));
  lemma->add_flag("--probe-h1", probe_h1, "run the H_1 variant, which is false for p = 2");
  lemma->add_option("--max-order", max_order, "enumeration cap");

  auto* involutions = app.add_subcommand("involutions", "census of order-2 elements of SL_2(Z/2^e)");
  involutions->add_option("--e", e)->required();

  auto* lagrangians = app.add_subcommand("lagrangians", "Lagrangian subspaces of F_p^{2r}");
  lagrangians->add_option("--p", p)->required();
  lagrangians->add_option("--r", r)->required();
  lagrangians->add_flag("--count-only", count_only, "enumerate and count without the brute-force cross-check");

  auto* pairing = app.add_subcommand("pairing", "commutator pairing of the twisted monomial algebra");
  pairing->add_option("--p", p)->required();
  pairing->add_option("--r", r)->required();

  auto* index = app.add_subcommand("index", "value-group index of the twisted monomial algebra");
  index->add_option("--p", p)->required();
  index->add_option("--r", r)->required();

  auto* thresh = app.add_subcommand("threshold", "least r with no splitting torsor");
  thresh->add_option("--p", p)->required();
  thresh->add_option("--g", g)->required();

  auto* verd = app.add_subcommand("verdict", "rank inequality chain");
  verd->add_option("--p", p)->required();
  verd->add_option("--g", g)->required();
  verd->add_option("--r", r)->required();
  verd->add_option("--e", opt_e);

  auto* selftest = app.add_subcommand("selftest", "run the verification grid");
  selftest->add_option("--grid", grid_file, "grid JSON file (default: built-in grid)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  Emitter out{as_json ? Format::Json : (as_csv ? Format::Csv : Format::Table)};
  SelftestOptions opts;
  opts.enumeration.max_order = max_order;
  opts.search.budget = budget;

  try {
    if (*prank) {
      const json cell = {{"group", group}, {"n", n}, {"p", p}, {"e", e}};
      const auto rep = one_section(sylow ? "sylow_rank" : "rank_table", json::array({cell}), opts);
      return out.emit(rep, [&](std::ostream& os) {
        write_rank_csv_header(os);
        write_rank_csv_row(os, RankRow{p, e, n, rep.results.at(0).value.at("rank").get<std::uint64_t>(),
                                       known_rank_bound(group_kind_from_string(group), n, p, e)});
      });
    }
    if (*lemma) {
      json cells = json::array();
      for (const char* k : {"sl", "gl"}) {
        if (lemma->count("--group") == 0 || group == k) cells.push_back({{"group", k}, {"n", n}, {"p", p}, {"e", e}});
      }
      return out.emit(one_section(probe_h1 ? "h1_probe" : "kernel_lemma", cells, opts));
    }
    if (*involutions) return out.emit(one_section("involutions", json::array({e})));
    if (*lagrangians) {
      if (!count_only) return out.emit(one_section("lagrangians", json::array({{{"p", p}, {"r", r}}})));
      const auto start = std::chrono::steady_clock::now();
      const auto count = enumerate_lagrangians(SymplecticSpace(p, r)).size();
      const auto oracle = lagrangian_count_oracle(p, r);
      Report rep;
      rep.params = {{"p", p}, {"r", r}};
      rep.results.push_back({"lagrangian-count/p=" + std::to_string(p) + "/r=" + std::to_string(r),
                             count == oracle ? CheckStatus::Pass : CheckStatus::Fail,
                             {{"count", count}, {"oracle", oracle}}, std::nullopt,
                             "number of Lagrangians is prod_{i=1}^{r} (p^i + 1)"});
      rep.elapsed_ms = static_cast<std::uint64_t>(
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count());
      return out.emit(rep);
    }
    if (*pairing) return out.emit(one_section("pairing", json::array({{{"p", p}, {"r", r}}})));
    if (*index) return out.emit(one_section("index", json::array({{{"p", p}, {"r", r}}})));
    if (*thresh) {
      Report rep;
      rep.params = {{"p", p}, {"g", g}};
      const auto t = threshold(p, g);
      rep.results.push_back({"threshold/p=" + std::to_string(p) + "/g=" + std::to_string(g), CheckStatus::Pass,
                             {{"threshold", t},
                              {"sl_rank_bound", sl_rank_bound(p, std::nullopt, g)},
                              {"galois_rank_bound", galois_rank_bound(p, std::nullopt, g)},
                              {"branch", to_string(sl_bound_branch(g))}},
                             std::nullopt, "threshold table of the non-splitting theorem"});
      return out.emit(rep, [&](std::ostream& os) {
        os << "p,g,threshold,sl_rank_bound,galois_rank_bound,branch\n"
           << p << ',' << g << ',' << t << ',' << sl_rank_bound(p, std::nullopt, g) << ','
           << galois_rank_bound(p, std::nullopt, g) << ',' << to_string(sl_bound_branch(g)) << '\n';
      });
    }
    if (*verd) {
      const TheoremParams params{p, g, r, opt_e};
      const auto v = verdict(params);
      Report rep;
      rep.params = params;
      rep.results.push_back({"verdict/p=" + std::to_string(p) + "/g=" + std::to_string(g) + "/r=" + std::to_string(r),
                             chain_is_consistent(v) ? CheckStatus::Pass : CheckStatus::Fail, json(v), std::nullopt,
                             "compare the two rank bounds"});
      if (out.format == Format::Table) {
        for (const auto& s : v.chain) {
          std::cout << std::left << std::setw(24) << s.id << std::setw(8) << s.value << s.statement
                    << (s.computed ? "" : "  (cited)") << '\n';
        }
        std::cout << "contradiction: " << (v.contradiction ? "yes" : "no") << " (r = " << v.lower_bound
                  << ", upper bound = " << v.upper_bound << ", threshold = " << v.threshold << ")\n";
        return selftest_exit_code(rep);
      }
      return out.emit(rep);
    }
    if (*selftest) {
      json grid = default_grid();
      if (!grid_file.empty()) {
        std::ifstream in(grid_file);
        if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open grid file " + grid_file);
        try {
          grid = json::parse(in);
        } catch (const json::exception& err) {
          throw Error(ErrorKind::InvalidArgument, "bad grid file: " + std::string(err.what()));
        }
      }
      return out.emit(run_selftest(grid, opts));
    }
  } catch (const Error& err) {
    std::cerr << "ranklab: " << to_string(err.kind()) << ": " << err.what() << '\n';
    return 2;
  }
  return 2;
}
