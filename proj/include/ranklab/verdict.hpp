#pragma once

/**
 * @file verdict.hpp
 * @brief Rank-inequality verdict for splitting by torsors under g-dimensional
 * abelian varieties.
 *
 * Lower side: a Galois splitting field of D_r over a prime-to-p extension has
 * p-rank at least r (the rank of a Lagrangian in (Z/p)^{2r}).
 * Upper side: the Galois group of a splitting field of a torsor of period p^e
 * is an extension of a subgroup of SL_2g(Z/p^e) by a subgroup of (Z/p^e)^{2g},
 * so its p-rank is at most rank_p(SL_2g(Z/p^e)) + 2g.
 * The two are incompatible exactly when r exceeds the upper side.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ranklab/error.hpp"
#include "ranklab/matgroup.hpp"
#include "ranklab/modring.hpp"
#include "ranklab/prank.hpp"

namespace ranklab {

struct TheoremParams {
  std::uint32_t p = 2;
  std::uint32_t g = 1;
  std::uint32_t r = 1;
  std::optional<std::uint32_t> e;  // period exponent; absent means uniform in e

  void validate() const {
    if (!is_prime(p)) throw Error(ErrorKind::InvalidArgument, "p must be prime");
    if (g < 1 || r < 1) throw Error(ErrorKind::InvalidArgument, "g and r must be positive");
    if (e && *e < 1) throw Error(ErrorKind::InvalidArgument, "e must be positive");
  }

  friend bool operator==(const TheoremParams&, const TheoremParams&) = default;
};

/// Least r for which no torsor under a g-dimensional abelian variety splits D_r.
inline std::uint64_t threshold(std::uint32_t p, std::uint32_t g) {
  if (!is_prime(p) || g < 1) throw Error(ErrorKind::InvalidArgument, "threshold needs a prime p and g >= 1");
  const std::uint64_t gg = g;
  if (g == 1) return p > 2 ? 6 : 7;
  return p > 2 ? 5 * gg * gg + 2 * gg : 9 * gg * gg + 2 * gg - 1;
}

enum class SlBoundBranch { ExactGenusOne, Generic };

inline std::string_view to_string(SlBoundBranch b) {
  return b == SlBoundBranch::ExactGenusOne ? "genus-one-exact" : "generic";
}

inline SlBoundBranch sl_bound_branch(std::uint32_t g) {
  return g == 1 ? SlBoundBranch::ExactGenusOne : SlBoundBranch::Generic;
}

/// Upper bound on rank_p(SL_2g(Z/p^e)), uniform in e: 3 / 4 for g = 1,
/// 5g^2 - 1 / 9g^2 - 2 for g >= 2 (p odd / p = 2).
inline std::uint64_t sl_rank_bound(std::uint32_t p, std::optional<std::uint32_t> /*e*/, std::uint32_t g) {
  if (!is_prime(p) || g < 1) throw Error(ErrorKind::InvalidArgument, "bound needs a prime p and g >= 1");
  const std::uint64_t gg = g;
  if (g == 1) return p > 2 ? 3 : 4;
  return p > 2 ? 5 * gg * gg - 1 : 9 * gg * gg - 2;
}

/// sl_rank_bound + rank_p((Z/p^e)^{2g}) = sl_rank_bound + 2g.
inline std::uint64_t galois_rank_bound(std::uint32_t p, std::optional<std::uint32_t> e, std::uint32_t g) {
  return sl_rank_bound(p, e, g) + 2ull * g;
}

struct ChainStep {
  std::string id;
  std::string statement;
  std::uint64_t value = 0;
  std::string anchor;
  bool computed = false;  // false: cited fact entering as an axiom

  friend bool operator==(const ChainStep&, const ChainStep&) = default;
};

struct VerdictReport {
  TheoremParams params;
  std::uint64_t lower_bound = 0;
  std::uint64_t upper_bound = 0;
  std::uint64_t threshold = 0;
  bool contradiction = false;
  SlBoundBranch branch = SlBoundBranch::Generic;
  std::optional<std::uint64_t> computed_sl_rank;  // exact search result when e was given and feasible
  std::vector<ChainStep> chain;

  friend bool operator==(const VerdictReport&, const VerdictReport&) = default;
};

/// Chain consistency: the upper step is the sum of the two rank steps, and
/// the verdict step agrees with the comparison of the two sides.
inline bool chain_is_consistent(const VerdictReport& v) {
  if (v.chain.size() != 5) return false;
  for (const auto& s : v.chain) {
    if (s.anchor.empty()) return false;
  }
  const auto& lower = v.chain[0];
  const auto& sl = v.chain[1];
  const auto& tr = v.chain[2];
  const auto& upper = v.chain[3];
  const auto& verdict = v.chain[4];
  return lower.value == v.lower_bound && upper.value == sl.value + tr.value && upper.value == v.upper_bound &&
         verdict.value == (v.contradiction ? 1u : 0u) && v.contradiction == (v.lower_bound > v.upper_bound) &&
         v.contradiction == (v.lower_bound >= v.threshold);
}

struct VerdictOptions {
  /// When params.e is set and g = 1, compute rank_p(SL_2(Z/p^e)) exactly if the
  /// group has at most this many elements, and require it to respect the bound.
  std::uint64_t cross_check_max_order = 20'000;
};

inline VerdictReport verdict(const TheoremParams& params, const VerdictOptions& opts = {}) {
  params.validate();
  VerdictReport v;
  v.params = params;
  v.lower_bound = params.r;
  v.branch = sl_bound_branch(params.g);
  const std::uint64_t sl = sl_rank_bound(params.p, params.e, params.g);
  const std::uint64_t translations = 2ull * params.g;
  v.upper_bound = sl + translations;
  v.threshold = threshold(params.p, params.g);
  v.contradiction = v.lower_bound > v.upper_bound;

  if (params.e && params.g == 1 && opts.cross_check_max_order > 0) {
    std::uint64_t order = UINT64_MAX;
    try {
      order = group_order_oracle(GroupKind::SL, 2, params.p, *params.e);
    } catch (const Error&) {
    }
    if (order <= opts.cross_check_max_order) {
      const auto g = enumerate_group(GroupKind::SL, 2, ModulusContext(params.p, *params.e));
      const auto rank = p_rank(g).rank;
      if (rank > sl) throw Error(ErrorKind::InvalidArgument, "computed SL_2 rank exceeds the bound");
      v.computed_sl_rank = rank;
    }
  }

  const std::string e_text = params.e ? std::to_string(*params.e) : std::string("e");
  const std::string n_text = std::to_string(2 * params.g);
  v.chain.push_back({"lagrangian-lower-bound", "rank_p(Gal(L/F')) >= r", v.lower_bound,
                     "Galois splitting field contains a Lagrangian (Z/p)^r", false});
  v.chain.push_back({"sl-rank-bound",
                     "rank_p(SL_" + n_text + "(Z/p^" + e_text + ")) <= " + std::to_string(sl) + " [" +
                         std::string(to_string(v.branch)) + "]",
                     sl, "p-rank bound for SL_2g over Z/p^e", v.computed_sl_rank.has_value()});
  v.chain.push_back({"translation-rank", "rank_p((Z/p^" + e_text + ")^" + n_text + ") = " + std::to_string(translations),
                     translations, "p-rank of the torsion translations (Z/p^e)^{2g}", true});
  v.chain.push_back({"galois-upper-bound", "rank_p(Gal(L/F')) <= " + std::to_string(v.upper_bound), v.upper_bound,
                     "subadditivity of the p-rank in short exact sequences", true});
  v.chain.push_back({"verdict",
                     v.contradiction ? "r > upper bound: no such torsor splits the class"
                                     : "r <= upper bound: no contradiction",
                     v.contradiction ? 1u : 0u, "compare the two rank bounds", true});

  if (!chain_is_consistent(v)) throw Error(ErrorKind::InvalidArgument, "inconsistent verdict chain");
  return v;
}

}  // namespace ranklab
