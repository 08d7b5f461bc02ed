#pragma once

/**
 * @file prank.hpp
 * @brief p-ranks of finite matrix groups with certifying witnesses.
 *
 * The rank search is a depth-first walk over the order-p elements of a
 * group table, in the table's canonical order. A partial basis b_1 < ... < b_k
 * is extended by x only when
 *   - x comes after b_k,
 *   - x commutes with every b_i and lies outside their span S_k,
 *   - x is the least element of <S_k, x> \ S_k.
 * Every elementary abelian subgroup E is reached through its greedy basis
 * (b_{k+1} = min E \ S_k), which satisfies all three conditions, so the
 * search is exhaustive. Every element of E \ S_k also sits in the current
 * candidate list, giving the bound p^k + |candidates| >= |E| used for pruning.
 */

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ranklab/error.hpp"
#include "ranklab/matgroup.hpp"

namespace ranklab {

/// A basis of pairwise-commuting order-p matrices spanning (Z/p)^rank.
struct RankWitness {
  std::vector<SquareMatrix> basis;

  std::size_t rank() const noexcept { return basis.size(); }
};

/// All products b_1^{c_1} ... b_k^{c_k}, 0 <= c_i < p, in digit order. Throws
/// GroupTooLarge if p^k exceeds max_size.
inline std::vector<SquareMatrix> witness_span(const RankWitness& w, const ModulusContext& ctx, std::size_t n,
                                              std::uint64_t max_size = 1u << 22) {
  std::vector<SquareMatrix> span{SquareMatrix::identity(ctx, n)};
  for (const auto& b : w.basis) {
    if (span.size() * ctx.p() > max_size) throw Error(ErrorKind::GroupTooLarge, "witness span above the cap");
    const std::size_t base = span.size();
    SquareMatrix power = b;
    for (std::uint32_t c = 1; c < ctx.p(); ++c) {
      for (std::size_t i = 0; i < base; ++i) span.push_back(span[i] * power);
      power = power * b;
    }
  }
  return span;
}

namespace detail {

/// Rank over F_p of {(m - I) / p^{e-1} mod p} for matrices in H_{e-1}.
inline std::size_t top_kernel_rank(const std::vector<SquareMatrix>& ms) {
  if (ms.empty()) return 0;
  const auto& ctx = ms.front().ctx();
  const std::uint32_t p = ctx.p();
  const std::uint32_t scale = static_cast<std::uint32_t>(checked_pow(p, ctx.e() - 1));
  const std::size_t n = ms.front().n();
  std::vector<std::vector<std::uint32_t>> rows;
  for (const auto& m : ms) {
    std::vector<std::uint32_t> row(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::uint32_t v = ctx.sub(m.at(i, j), Residue{i == j ? 1u : 0u}).value;
        row[i * n + j] = (v / scale) % p;
      }
    }
    rows.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n * n && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    const std::uint32_t inv = ModulusContext(p, 1).unit_inverse(Residue{rows[rank][col]}).value;
    for (auto& x : rows[rank]) x = static_cast<std::uint32_t>((std::uint64_t{x} * inv) % p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      const std::uint64_t f = rows[r][col];
      for (std::size_t k = 0; k < n * n; ++k) {
        rows[r][k] = static_cast<std::uint32_t>((rows[r][k] + (p - f) * rows[rank][k]) % p);
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

/// Checks the witness invariants directly: order exactly p, pairwise
/// commuting, and p^rank distinct products.
inline bool is_valid_witness(const RankWitness& w) {
  if (w.basis.empty()) return true;
  const auto& ctx = w.basis.front().ctx();
  const std::size_t n = w.basis.front().n();
  for (const auto& b : w.basis) {
    if (!(b.ctx() == ctx) || b.n() != n) return false;
    if (!has_order_p(b)) return false;
  }
  for (std::size_t i = 0; i < w.basis.size(); ++i) {
    for (std::size_t j = i + 1; j < w.basis.size(); ++j) {
      if (!commute(w.basis[i], w.basis[j])) return false;
    }
  }
  // Inside H_{e-1}, I + p^{e-1}A -> A mod p is an injective homomorphism into
  // M_n(F_p), so independence is a rank computation there.
  const bool top_kernel = ctx.e() >= 2 && std::all_of(w.basis.begin(), w.basis.end(), [&](const SquareMatrix& b) {
    return in_congruence_kernel(b, ctx.e() - 1);
  });
  if (top_kernel) return detail::top_kernel_rank(w.basis) == w.basis.size();
  auto span = witness_span(w, ctx, n);
  std::unordered_set<SquareMatrix, SquareMatrixHash> distinct(span.begin(), span.end());
  return distinct.size() == span.size();
}

inline std::vector<SquareMatrix> order_p_elements(const GroupTable& g) {
  std::vector<SquareMatrix> out;
  for (const auto& m : g.elements()) {
    if (has_order_p(m)) out.push_back(m);
  }
  return out;
}

struct RankSearchOptions {
  std::uint64_t budget = 10'000'000;  // basis-extension steps
};

struct RankResult {
  std::size_t rank = 0;
  RankWitness witness;
  std::uint64_t steps = 0;
};

namespace detail {

class RankSearch {
 public:
  RankSearch(const GroupTable& g, const RankSearchOptions& opts)
      : p_(g.ctx().p()), budget_(opts.budget), elems_(order_p_elements(g)) {
    index_.reserve(elems_.size());
    for (std::uint32_t i = 0; i < elems_.size(); ++i) index_.emplace(elems_[i], i);
    in_span_.assign(elems_.size(), 0);
    identity_.emplace(SquareMatrix::identity(g.ctx(), g.n()));
  }

  RankResult run() {
    std::vector<std::uint32_t> all(elems_.size());
    for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
    std::vector<SquareMatrix> span{*identity_};
    std::vector<std::uint32_t> basis;
    extend(span, basis, all);
    RankResult result;
    result.rank = best_rank_;
    for (auto i : best_basis_) result.witness.basis.push_back(elems_[i]);
    result.steps = steps_;
    return result;
  }

 private:
  // |E| for rank k, saturating for the bound comparison.
  std::uint64_t size_of_rank(std::size_t k) const {
    std::uint64_t s = 1;
    for (std::size_t i = 0; i < k; ++i) {
      if (s > (UINT64_MAX / p_)) return UINT64_MAX;
      s *= p_;
    }
    return s;
  }

  void extend(const std::vector<SquareMatrix>& span, std::vector<std::uint32_t>& basis,
              const std::vector<std::uint32_t>& cands) {
    const std::size_t k = basis.size();
    if (k > best_rank_) {
      best_rank_ = k;
      best_basis_ = basis;
    }
    const std::uint64_t target = size_of_rank(best_rank_ + 1);
    for (std::size_t pos = 0; pos < cands.size(); ++pos) {
      // Elements of any larger subgroup beyond the span come from cands[pos..].
      if (span.size() + (cands.size() - pos) < target) return;
      if (++steps_ > budget_) {
        throw Error(ErrorKind::SearchBudgetExceeded,
                    "rank search exceeded " + std::to_string(budget_) + " extension steps");
      }
      const std::uint32_t xi = cands[pos];
      const SquareMatrix& x = elems_[xi];

      std::vector<SquareMatrix> next_span = span;
      next_span.reserve(span.size() * p_);
      std::vector<std::uint32_t> fresh;
      bool canonical = true;
      SquareMatrix power = x;
      for (std::uint32_t c = 1; c < p_ && canonical; ++c) {
        for (const auto& s : span) {
          SquareMatrix y = s * power;
          auto it = index_.find(y);
          // Every nonidentity element of an elementary abelian group has order p.
          if (it == index_.end() || it->second < xi) {
            canonical = false;
            break;
          }
          fresh.push_back(it->second);
          next_span.push_back(std::move(y));
        }
        power = power * x;
      }
      if (!canonical) continue;

      for (auto f : fresh) in_span_[f] = 1;
      std::vector<std::uint32_t> next_cands;
      for (std::size_t q = pos + 1; q < cands.size(); ++q) {
        const std::uint32_t yi = cands[q];
        if (in_span_[yi]) continue;
        if (commute(x, elems_[yi])) next_cands.push_back(yi);
      }
      for (auto f : fresh) in_span_[f] = 0;

      basis.push_back(xi);
      extend(next_span, basis, next_cands);
      basis.pop_back();
    }
  }

  std::uint32_t p_;
  std::uint64_t budget_;
  std::vector<SquareMatrix> elems_;
  std::unordered_map<SquareMatrix, std::uint32_t, SquareMatrixHash> index_;
  std::vector<char> in_span_;
  std::optional<SquareMatrix> identity_;
  std::size_t best_rank_ = 0;
  std::vector<std::uint32_t> best_basis_;
  std::uint64_t steps_ = 0;
};

}  // namespace detail

/// Exact p-rank of g with a witness basis. The witness is the first
/// maximum-rank basis met in canonical order, so it does not depend on
/// anything but the table.
inline RankResult p_rank(const GroupTable& g, const RankSearchOptions& opts = {}) {
  return detail::RankSearch(g, opts).run();
}

/// p-rank computed inside the upper unitriangular subgroup intersected with
/// SL_n or GL_n over F_p. Every elementary abelian p-subgroup is conjugate into
/// that Sylow subgroup, so the value equals the full-group p-rank.
inline RankResult sylow_restricted_rank(GroupKind kind, std::size_t n, std::uint32_t p, std::uint32_t e = 1,
                                        const RankSearchOptions& opts = {}) {
  if (e != 1) throw Error(ErrorKind::Unsupported, "Sylow-restricted search only for e = 1");
  if (n < 1 || n > 4) throw Error(ErrorKind::Unsupported, "Sylow-restricted search only for n <= 4");
  if (kind == GroupKind::Explicit) throw Error(ErrorKind::InvalidArgument, "need SL or GL");
  const ModulusContext ctx(p, 1);
  GroupTable u = unitriangular_group(n, ctx);
  if (kind == GroupKind::SL) {
    std::vector<SquareMatrix> members;
    for (const auto& m : u.elements()) {
      if (det(m).value == 1) members.push_back(m);
    }
    u = GroupTable::from_elements(ctx, n, std::move(members));
  }
  return p_rank(u, opts);
}

enum class LemmaVariant {
  OddP,     // order p in H_1 implies H_{e-1}, p odd
  Two,      // order 2 in H_2 implies H_{e-1}, p = 2
  ProbeH1,  // the false statement order 2 in H_1 implies H_{e-1}, p = 2
};

inline std::string_view to_string(LemmaVariant v) {
  switch (v) {
    case LemmaVariant::OddP: return "odd-p";
    case LemmaVariant::Two: return "p=2";
    case LemmaVariant::ProbeH1: return "p=2-probe-h1";
  }
  return "?";
}

struct KernelLemmaReport {
  GroupKind kind;
  std::size_t n;
  std::uint32_t p;
  std::uint32_t e;
  LemmaVariant variant;
  std::uint64_t checked_count = 0;
  std::vector<SquareMatrix> violations;

  bool holds() const noexcept { return violations.empty(); }
};

/// Examines every element of order p in H_1 (H_2 for the p = 2 variant) of
/// SL_n or GL_n over Z/p^e and reports those outside H_{e-1}.
inline KernelLemmaReport verify_kernel_lemma(GroupKind kind, std::size_t n, std::uint32_t p, std::uint32_t e,
                                             LemmaVariant variant, const EnumerationOptions& opts = {}) {
  std::uint32_t start = 1;
  switch (variant) {
    case LemmaVariant::OddP:
      if (p == 2 || e < 2) throw Error(ErrorKind::InvalidArgument, "odd-p variant needs p odd and e >= 2");
      break;
    case LemmaVariant::Two:
      if (p != 2 || e < 3) throw Error(ErrorKind::InvalidArgument, "p=2 variant needs p = 2 and e >= 3");
      start = 2;
      break;
    case LemmaVariant::ProbeH1:
      if (p != 2 || e < 3) throw Error(ErrorKind::InvalidArgument, "H_1 probe needs p = 2 and e >= 3");
      break;
  }
  const ModulusContext ctx(p, e);
  const GroupTable g = enumerate_group(kind, n, ctx, opts);
  KernelLemmaReport report{kind, n, p, e, variant, 0, {}};
  for (const auto& m : g.elements()) {
    if (!in_congruence_kernel(m, start) || !has_order_p(m)) continue;
    ++report.checked_count;
    if (!in_congruence_kernel(m, e - 1)) report.violations.push_back(m);
  }
  return report;
}

/// {I + p^{e-1} E} for E running over a basis of the Lie algebra mod p:
/// off-diagonal units E_ij (row-major), then E_ii - E_nn for SL or all E_ii for GL.
inline RankWitness lie_kernel_basis(GroupKind kind, std::size_t n, const ModulusContext& ctx) {
  if (ctx.e() < 2) throw Error(ErrorKind::BadLevel, "the top congruence kernel needs e >= 2");
  if (kind == GroupKind::Explicit) throw Error(ErrorKind::InvalidArgument, "need SL or GL");
  const Residue step = ctx.pow(Residue{ctx.p()}, ctx.e() - 1);
  RankWitness w;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      SquareMatrix m = SquareMatrix::identity(ctx, n);
      m.set(i, j, step);
      w.basis.push_back(std::move(m));
    }
  }
  const std::size_t diag_count = kind == GroupKind::SL ? n - 1 : n;
  for (std::size_t i = 0; i < diag_count; ++i) {
    SquareMatrix m = SquareMatrix::identity(ctx, n);
    m.set(i, i, ctx.add(m.at(i, i), step));
    if (kind == GroupKind::SL) m.set(n - 1, n - 1, ctx.sub(m.at(n - 1, n - 1), step));
    w.basis.push_back(std::move(m));
  }
  if (!is_valid_witness(w)) throw Error(ErrorKind::InvalidArgument, "Lie kernel basis failed validation");
  return w;
}

/// d + rank_p(G(Z/p)) (or d + rank_2(G(Z/4)) for p = 2).
constexpr std::size_t rank_upper_bound(std::size_t d, std::size_t base_rank) { return d + base_rank; }

struct InvolutionCensus {
  std::uint32_t e = 0;
  std::vector<SquareMatrix> elements;  // all M in SL_2(Z/2^e) with M^2 = I, sorted
  bool equals_expected_set = false;    // pi_{e-1}^{-1}({+-I}) for e >= 3, H_1 for e = 2
  bool matches_form = false;           // equal diagonal entries, off-diagonal divisible by 2^{e-1}
  bool elementary_abelian = false;
  std::size_t rank = 0;

  std::size_t size() const noexcept { return elements.size(); }
};

/// Exhaustive list of the solutions of M^2 = I in SL_2(Z/2^e), with the
/// structural checks: for e >= 3 the set is the preimage of {I, -I} under
/// reduction mod 2^{e-1}; for e = 2 it is H_1.
inline InvolutionCensus involution_census_sl2(std::uint32_t e, std::uint64_t max_matrices = std::uint64_t{1} << 24) {
  if (e < 2) throw Error(ErrorKind::InvalidArgument, "involution census needs e >= 2");
  const ModulusContext ctx(2, e);
  const std::uint64_t q = ctx.q();
  if (q > 0xFFFF || q * q * q * q > max_matrices) {
    throw Error(ErrorKind::GroupTooLarge, "M_2(Z/2^" + std::to_string(e) + ") above the census cap");
  }
  InvolutionCensus census;
  census.e = e;
  const SquareMatrix id = SquareMatrix::identity(ctx, 2);
  for (std::uint32_t a = 0; a < q; ++a) {
    for (std::uint32_t b = 0; b < q; ++b) {
      for (std::uint32_t c = 0; c < q; ++c) {
        for (std::uint32_t d = 0; d < q; ++d) {
          // det = ad - bc = 1
          if ((std::uint64_t{a} * d + q * q - std::uint64_t{b} * c) % q != 1) continue;
          // M^2 = [[a^2+bc, b(a+d)], [c(a+d), d^2+bc]]
          if ((std::uint64_t{a} * a + std::uint64_t{b} * c) % q != 1) continue;
          if ((std::uint64_t{b} * (a + d)) % q != 0 || (std::uint64_t{c} * (a + d)) % q != 0) continue;
          if ((std::uint64_t{d} * d + std::uint64_t{b} * c) % q != 1) continue;
          census.elements.push_back(SquareMatrix::from_entries(ctx, 2, std::vector<std::int64_t>{a, b, c, d}));
        }
      }
    }
  }
  std::sort(census.elements.begin(), census.elements.end());

  // Independent description of the expected set.
  std::vector<SquareMatrix> expected;
  if (e >= 3) {
    const std::int64_t half = std::int64_t{1} << (e - 1);
    for (std::int64_t u : {1, -1}) {
      for (int bits = 0; bits < 16; ++bits) {
        auto m = SquareMatrix::from_entries(
            ctx, 2,
            std::vector<std::int64_t>{u + half * (bits & 1), half * ((bits >> 1) & 1), half * ((bits >> 2) & 1),
                                      u + half * ((bits >> 3) & 1)});
        if (det(m).value == 1) expected.push_back(m);
      }
    }
  } else {
    for (int bits = 0; bits < 16; ++bits) {
      auto m = SquareMatrix::from_entries(
          ctx, 2,
          std::vector<std::int64_t>{1 + 2 * (bits & 1), 2 * ((bits >> 1) & 1), 2 * ((bits >> 2) & 1),
                                    1 + 2 * ((bits >> 3) & 1)});
      if (det(m).value == 1) expected.push_back(m);
    }
  }
  std::sort(expected.begin(), expected.end());
  expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
  census.equals_expected_set = expected == census.elements;

  const std::uint32_t half = e >= 3 ? (1u << (e - 1)) : 2u;
  census.matches_form = std::all_of(census.elements.begin(), census.elements.end(), [&](const SquareMatrix& m) {
    const auto a = m.at(0, 0).value;
    const auto d = m.at(1, 1).value;
    const bool diag_ok = e >= 3 ? (a == d && (a % half == 1 || a % half == half - 1)) : (a % 2 == 1 && d % 2 == 1);
    return diag_ok && m.at(0, 1).value % half == 0 && m.at(1, 0).value % half == 0;
  });

  // Closed, commutative, and every element squares to I.
  std::unordered_set<SquareMatrix, SquareMatrixHash> members(census.elements.begin(), census.elements.end());
  bool abelian = members.count(id) == 1;
  for (const auto& x : census.elements) {
    if (!abelian) break;
    if (!(x * x).is_identity()) abelian = false;
    for (const auto& y : census.elements) {
      if (!members.count(x * y) || !commute(x, y)) {
        abelian = false;
        break;
      }
    }
  }
  std::size_t rank = 0;
  for (std::size_t s = census.size(); s > 1; s /= 2) {
    if (s % 2 != 0) abelian = false;
    ++rank;
  }
  census.elementary_abelian = abelian;
  census.rank = abelian ? rank : 0;
  return census;
}

struct SubadditivityReport {
  std::uint32_t level = 0;
  std::size_t group_rank = 0;
  std::size_t kernel_rank = 0;
  std::size_t image_rank = 0;

  bool holds() const noexcept { return group_rank <= kernel_rank + image_rank; }
};

/// rank_p(G) <= rank_p(H_j) + rank_p(pi_j(G)), all three computed exactly.
inline SubadditivityReport subadditivity_check(const GroupTable& g, std::uint32_t j, const RankSearchOptions& opts = {}) {
  if (j < 1 || j >= g.ctx().e()) throw Error(ErrorKind::BadLevel, "subadditivity level outside [1, e)");
  SubadditivityReport r;
  r.level = j;
  r.group_rank = p_rank(g, opts).rank;
  r.kernel_rank = p_rank(congruence_kernel(g, j), opts).rank;
  r.image_rank = p_rank(reduction_image(g, j), opts).rank;
  return r;
}

/// Known p-rank of SL_2(Z/p^e): 1 for e = 1, 3 for
/// (p > 2, e >= 2) and (p = 2, e = 2), 4 for (p = 2, e >= 3).
constexpr std::size_t expected_sl2_rank(std::uint32_t p, std::uint32_t e) {
  if (e == 1) return 1;
  if (p == 2 && e >= 3) return 4;
  return 3;
}

}  // namespace ranklab
