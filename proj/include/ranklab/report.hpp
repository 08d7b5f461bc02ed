#pragma once

/**
 * @file report.hpp
 * @brief Machine-readable reports: JSON check reports, witness matrices,
 * verdict reports and CSV rank tables.
 *
 * JSON report layout:
 *   { "tool_version": "...", "params": {...},
 *     "results": [ { "check_id", "status", "value", "witness"?, "anchor" } ],
 *     "elapsed_ms": N }
 * with status one of pass, fail, expected-fail, skipped. A witness matrix is
 * { "p", "e", "n", "entries": [row-major integers] }.
 */

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ranklab/error.hpp"
#include "ranklab/matgroup.hpp"
#include "ranklab/prank.hpp"
#include "ranklab/verdict.hpp"

namespace ranklab {

inline constexpr const char* kToolVersion = "0.3.0";

enum class CheckStatus { Pass, Fail, ExpectedFail, Skipped };

inline std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::ExpectedFail: return "expected-fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "?";
}

inline CheckStatus check_status_from_string(std::string_view s) {
  if (s == "pass") return CheckStatus::Pass;
  if (s == "fail") return CheckStatus::Fail;
  if (s == "expected-fail") return CheckStatus::ExpectedFail;
  if (s == "skipped") return CheckStatus::Skipped;
  throw Error(ErrorKind::InvalidArgument, "unknown check status '" + std::string(s) + "'");
}

struct CheckResult {
  std::string check_id;
  CheckStatus status = CheckStatus::Pass;
  nlohmann::json value;
  std::optional<nlohmann::json> witness;
  std::string anchor;

  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct Report {
  std::string tool_version = kToolVersion;
  nlohmann::json params = nlohmann::json::object();
  std::vector<CheckResult> results;
  std::uint64_t elapsed_ms = 0;

  bool all_passed() const {
    for (const auto& r : results) {
      if (r.status == CheckStatus::Fail) return false;
    }
    return true;
  }

  friend bool operator==(const Report&, const Report&) = default;
};

inline nlohmann::json matrix_to_json(const SquareMatrix& m) {
  std::vector<std::uint32_t> entries(m.entries().begin(), m.entries().end());
  return {{"p", m.ctx().p()}, {"e", m.ctx().e()}, {"n", m.n()}, {"entries", entries}};
}

inline SquareMatrix matrix_from_json(const nlohmann::json& j) {
  const ModulusContext ctx(j.at("p").get<std::uint32_t>(), j.at("e").get<std::uint32_t>());
  const auto entries = j.at("entries").get<std::vector<std::int64_t>>();
  return SquareMatrix::from_entries(ctx, j.at("n").get<std::size_t>(), entries);
}

inline nlohmann::json witness_to_json(const RankWitness& w) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& b : w.basis) arr.push_back(matrix_to_json(b));
  return arr;
}

inline RankWitness witness_from_json(const nlohmann::json& j) {
  RankWitness w;
  for (const auto& m : j) w.basis.push_back(matrix_from_json(m));
  return w;
}

inline void to_json(nlohmann::json& j, const CheckResult& r) {
  j = {{"check_id", r.check_id}, {"status", to_string(r.status)}, {"value", r.value}, {"anchor", r.anchor}};
  if (r.witness) j["witness"] = *r.witness;
}

inline void from_json(const nlohmann::json& j, CheckResult& r) {
  r.check_id = j.at("check_id").get<std::string>();
  r.status = check_status_from_string(j.at("status").get<std::string>());
  r.value = j.at("value");
  r.anchor = j.at("anchor").get<std::string>();
  r.witness = j.contains("witness") ? std::optional<nlohmann::json>(j.at("witness")) : std::nullopt;
}

inline void to_json(nlohmann::json& j, const Report& r) {
  j = {{"tool_version", r.tool_version}, {"params", r.params}, {"results", r.results}, {"elapsed_ms", r.elapsed_ms}};
}

inline void from_json(const nlohmann::json& j, Report& r) {
  r.tool_version = j.at("tool_version").get<std::string>();
  r.params = j.at("params");
  r.results = j.at("results").get<std::vector<CheckResult>>();
  r.elapsed_ms = j.at("elapsed_ms").get<std::uint64_t>();
}

inline void to_json(nlohmann::json& j, const TheoremParams& p) {
  j = {{"p", p.p}, {"g", p.g}, {"r", p.r}};
  j["e"] = p.e ? nlohmann::json(*p.e) : nlohmann::json(nullptr);
}

inline void from_json(const nlohmann::json& j, TheoremParams& p) {
  p.p = j.at("p").get<std::uint32_t>();
  p.g = j.at("g").get<std::uint32_t>();
  p.r = j.at("r").get<std::uint32_t>();
  p.e = (j.contains("e") && !j.at("e").is_null()) ? std::optional<std::uint32_t>(j.at("e").get<std::uint32_t>())
                                                  : std::nullopt;
}

inline void to_json(nlohmann::json& j, const ChainStep& s) {
  j = {{"id", s.id}, {"statement", s.statement}, {"value", s.value}, {"anchor", s.anchor}, {"computed", s.computed}};
}

inline void from_json(const nlohmann::json& j, ChainStep& s) {
  s.id = j.at("id").get<std::string>();
  s.statement = j.at("statement").get<std::string>();
  s.value = j.at("value").get<std::uint64_t>();
  s.anchor = j.at("anchor").get<std::string>();
  s.computed = j.at("computed").get<bool>();
}

inline void to_json(nlohmann::json& j, const VerdictReport& v) {
  j = {{"params", v.params},
       {"lower_bound", v.lower_bound},
       {"upper_bound", v.upper_bound},
       {"threshold", v.threshold},
       {"contradiction", v.contradiction},
       {"branch", to_string(v.branch)},
       {"chain", v.chain}};
  j["computed_sl_rank"] = v.computed_sl_rank ? nlohmann::json(*v.computed_sl_rank) : nlohmann::json(nullptr);
}

inline void from_json(const nlohmann::json& j, VerdictReport& v) {
  v.params = j.at("params").get<TheoremParams>();
  v.lower_bound = j.at("lower_bound").get<std::uint64_t>();
  v.upper_bound = j.at("upper_bound").get<std::uint64_t>();
  v.threshold = j.at("threshold").get<std::uint64_t>();
  v.contradiction = j.at("contradiction").get<bool>();
  const auto branch = j.at("branch").get<std::string>();
  if (branch == to_string(SlBoundBranch::ExactGenusOne)) {
    v.branch = SlBoundBranch::ExactGenusOne;
  } else if (branch == to_string(SlBoundBranch::Generic)) {
    v.branch = SlBoundBranch::Generic;
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown bound branch '" + branch + "'");
  }
  v.chain = j.at("chain").get<std::vector<ChainStep>>();
  v.computed_sl_rank = j.at("computed_sl_rank").is_null()
                           ? std::nullopt
                           : std::optional<std::uint64_t>(j.at("computed_sl_rank").get<std::uint64_t>());
}

/// Known value or bound for rank_p of SL_n / GL_n over Z/p^e, when one applies.
struct RankBound {
  std::uint64_t value = 0;
  bool exact = false;  // equality expected, otherwise an upper bound
};

inline std::optional<RankBound> known_rank_bound(GroupKind kind, std::size_t n, std::uint32_t p, std::uint32_t e) {
  if (kind != GroupKind::SL || n % 2 != 0) return std::nullopt;
  const std::uint64_t g = n / 2;
  if (n == 2) return RankBound{expected_sl2_rank(p, e), true};
  if (e == 1) return RankBound{g * g, true};
  return RankBound{p > 2 ? 5 * g * g - 1 : 9 * g * g - 2, false};
}

struct RankRow {
  std::uint32_t p = 0;
  std::uint32_t e = 0;
  std::size_t n = 0;
  std::uint64_t rank = 0;
  std::optional<RankBound> bound;

  std::string match() const {
    if (!bound) return "n/a";
    const bool ok = bound->exact ? rank == bound->value : rank <= bound->value;
    return ok ? "true" : "false";
  }
};

inline void write_rank_csv_header(std::ostream& os) { os << "p,e,n,rank,known_bound,bound_kind,match\n"; }

inline void write_rank_csv_row(std::ostream& os, const RankRow& row) {
  os << row.p << ',' << row.e << ',' << row.n << ',' << row.rank << ',';
  if (row.bound) {
    os << row.bound->value << ',' << (row.bound->exact ? "exact" : "upper");
  } else {
    os << ',';
  }
  os << ',' << row.match() << '\n';
}

}  // namespace ranklab
