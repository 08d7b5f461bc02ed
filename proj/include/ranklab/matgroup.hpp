#pragma once

/**
 * @file matgroup.hpp
 * @brief Square matrices over Z/p^e, the groups SL_n and GL_n, reduction maps
 * and congruence kernels.
 *
 * Group tables are produced by breadth-first closure from generators
 * (elementary transvections, plus diagonal unit scalings for GL) and are
 * stored sorted lexicographically by entry tuple. That order is the
 * canonical order used by every search built on top of a table.
 */

#include <boost/functional/hash.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <deque>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ranklab/error.hpp"
#include "ranklab/modring.hpp"

namespace ranklab {

class SquareMatrix {
 public:
  SquareMatrix(ModulusContext ctx, std::size_t n) : ctx_(ctx), n_(n), entries_(n * n, 0) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "matrix dimension must be at least 1");
  }

  static SquareMatrix identity(ModulusContext ctx, std::size_t n) {
    SquareMatrix m(ctx, n);
    for (std::size_t i = 0; i < n; ++i) m.entries_[i * n + i] = 1 % ctx.q();
    return m;
  }

  /// Row-major entries, each normalized into [0, q).
  static SquareMatrix from_entries(ModulusContext ctx, std::size_t n, std::span<const std::int64_t> values) {
    if (values.size() != n * n) {
      throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(n * n) + " entries");
    }
    SquareMatrix m(ctx, n);
    for (std::size_t i = 0; i < values.size(); ++i) m.entries_[i] = ctx.normalize(values[i]).value;
    return m;
  }

  static SquareMatrix from_rows(ModulusContext ctx, std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    const std::size_t n = rows.size();
    std::vector<std::int64_t> flat;
    for (const auto& row : rows) {
      if (row.size() != n) throw Error(ErrorKind::DimensionMismatch, "matrix rows must be square");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return from_entries(ctx, n, flat);
  }

  const ModulusContext& ctx() const noexcept { return ctx_; }
  std::size_t n() const noexcept { return n_; }
  std::span<const std::uint32_t> entries() const noexcept { return entries_; }

  Residue at(std::size_t i, std::size_t j) const { return Residue{entries_[i * n_ + j]}; }
  void set(std::size_t i, std::size_t j, Residue r) { entries_[i * n_ + j] = r.value; }

  bool is_identity() const {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (entries_[i * n_ + j] != (i == j ? 1 % ctx_.q() : 0)) return false;
      }
    }
    return true;
  }

  friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) {
    return a.n_ == b.n_ && a.ctx_ == b.ctx_ && a.entries_ == b.entries_;
  }

  /// Lexicographic on the entry tuple; only meaningful within one ring and dimension.
  friend bool operator<(const SquareMatrix& a, const SquareMatrix& b) { return a.entries_ < b.entries_; }

  std::size_t hash() const noexcept { return boost::hash_range(entries_.begin(), entries_.end()); }

 private:
  ModulusContext ctx_;
  std::size_t n_;
  std::vector<std::uint32_t> entries_;
};

struct SquareMatrixHash {
  std::size_t operator()(const SquareMatrix& m) const noexcept { return m.hash(); }
};

inline std::ostream& operator<<(std::ostream& os, const SquareMatrix& m) {
  os << "[";
  for (std::size_t i = 0; i < m.n(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < m.n(); ++j) os << (j ? "," : "") << m.at(i, j).value;
    os << "]";
  }
  return os << "] mod " << m.ctx().q();
}

namespace detail {

inline void require_compatible(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.n() != b.n()) throw Error(ErrorKind::DimensionMismatch, "matrix dimensions differ");
  if (!(a.ctx() == b.ctx())) throw Error(ErrorKind::ModulusMismatch, "matrices over different rings");
}

}  // namespace detail

inline SquareMatrix mat_mul(const SquareMatrix& a, const SquareMatrix& b) {
  detail::require_compatible(a, b);
  const std::size_t n = a.n();
  const std::uint64_t q = a.ctx().q();
  const auto ae = a.entries();
  const auto be = b.entries();
  SquareMatrix c(a.ctx(), n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::uint64_t acc = 0;
      for (std::size_t k = 0; k < n; ++k) {
        acc = (acc + std::uint64_t{ae[i * n + k]} * be[k * n + j]) % q;
      }
      c.set(i, j, Residue{static_cast<std::uint32_t>(acc)});
    }
  }
  return c;
}

inline SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) { return mat_mul(a, b); }

inline SquareMatrix mat_pow(SquareMatrix base, std::uint64_t k) {
  SquareMatrix result = SquareMatrix::identity(base.ctx(), base.n());
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

inline Residue trace(const SquareMatrix& m) {
  Residue t{0};
  for (std::size_t i = 0; i < m.n(); ++i) t = m.ctx().add(t, m.at(i, i));
  return t;
}

inline bool commute(const SquareMatrix& a, const SquareMatrix& b) { return a * b == b * a; }

namespace detail {

inline Residue det_cofactor(const ModulusContext& ctx, const std::vector<Residue>& m, std::size_t n) {
  if (n == 1) return m[0];
  if (n == 2) return ctx.sub(ctx.mul(m[0], m[3]), ctx.mul(m[1], m[2]));
  Residue acc{0};
  std::vector<Residue> minor((n - 1) * (n - 1));
  for (std::size_t col = 0; col < n; ++col) {
    if (m[col].value == 0) continue;
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t cc = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == col) continue;
        minor[(i - 1) * (n - 1) + cc++] = m[i * n + j];
      }
    }
    Residue term = ctx.mul(m[col], det_cofactor(ctx, minor, n - 1));
    acc = (col % 2 == 0) ? ctx.add(acc, term) : ctx.sub(acc, term);
  }
  return acc;
}

/// Fraction-free (Bareiss) elimination over the integers on the lifted entries.
inline Residue det_bareiss(const SquareMatrix& a) {
  using boost::multiprecision::cpp_int;
  const std::size_t n = a.n();
  std::vector<cpp_int> m(n * n);
  for (std::size_t i = 0; i < n * n; ++i) m[i] = a.entries()[i];
  cpp_int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k * n + k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row * n + k] == 0) ++swap_row;
      if (swap_row == n) return Residue{0};
      for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[swap_row * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i * n + j] = (m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j]) / prev;
      }
    }
    prev = m[k * n + k];
  }
  cpp_int d = m[n * n - 1] * sign;
  cpp_int r = d % a.ctx().q();
  if (r < 0) r += a.ctx().q();
  return Residue{r.convert_to<std::uint32_t>()};
}

}  // namespace detail

/// Exact determinant: cofactor expansion for n <= 4, integer Bareiss elimination above.
inline Residue det(const SquareMatrix& m) {
  if (m.n() <= 4) {
    std::vector<Residue> flat;
    flat.reserve(m.n() * m.n());
    for (auto v : m.entries()) flat.push_back(Residue{v});
    return detail::det_cofactor(m.ctx(), flat, m.n());
  }
  return detail::det_bareiss(m);
}

/// Gauss-Jordan elimination pivoting only on unit entries. Over the local ring
/// Z/p^e a column of an invertible matrix always has a unit below the diagonal
/// once earlier columns are cleared.
inline SquareMatrix mat_inverse(const SquareMatrix& m) {
  const auto& ctx = m.ctx();
  const std::size_t n = m.n();
  SquareMatrix a = m;
  SquareMatrix inv = SquareMatrix::identity(ctx, n);
  auto swap_rows = [n](SquareMatrix& x, std::size_t r1, std::size_t r2) {
    for (std::size_t j = 0; j < n; ++j) {
      Residue t = x.at(r1, j);
      x.set(r1, j, x.at(r2, j));
      x.set(r2, j, t);
    }
  };
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && !ctx.is_unit(a.at(pivot, col))) ++pivot;
    if (pivot == n) {
      throw Error(ErrorKind::NotInvertible, "determinant is divisible by " + std::to_string(ctx.p()));
    }
    if (pivot != col) {
      swap_rows(a, pivot, col);
      swap_rows(inv, pivot, col);
    }
    const Residue scale = ctx.unit_inverse(a.at(col, col));
    for (std::size_t j = 0; j < n; ++j) {
      a.set(col, j, ctx.mul(a.at(col, j), scale));
      inv.set(col, j, ctx.mul(inv.at(col, j), scale));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col) continue;
      const Residue f = a.at(i, col);
      if (f.value == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a.set(i, j, ctx.sub(a.at(i, j), ctx.mul(f, a.at(col, j))));
        inv.set(i, j, ctx.sub(inv.at(i, j), ctx.mul(f, inv.at(col, j))));
      }
    }
  }
  return inv;
}

/// Entrywise reduction mod p^j.
inline SquareMatrix reduce(const SquareMatrix& m, std::uint32_t j) {
  if (j < 1 || j > m.ctx().e()) {
    throw Error(ErrorKind::BadLevel, "reduction level " + std::to_string(j) + " outside [1, " +
                                         std::to_string(m.ctx().e()) + "]");
  }
  const ModulusContext target = m.ctx().at_level(j);
  SquareMatrix r(target, m.n());
  for (std::size_t i = 0; i < m.n(); ++i) {
    for (std::size_t k = 0; k < m.n(); ++k) r.set(i, k, Residue{m.at(i, k).value % target.q()});
  }
  return r;
}

/// Membership in H_j, the kernel of reduction mod p^j, for 1 <= j < e.
inline bool in_congruence_kernel(const SquareMatrix& m, std::uint32_t j) {
  if (j < 1 || j >= m.ctx().e()) {
    throw Error(ErrorKind::BadLevel, "kernel level " + std::to_string(j) + " outside [1, " +
                                         std::to_string(m.ctx().e()) + ")");
  }
  return reduce(m, j).is_identity();
}

inline std::uint64_t element_order(const SquareMatrix& m, std::uint64_t bound) {
  if (!m.ctx().is_unit(det(m))) throw Error(ErrorKind::NotInvertible, "element order of a singular matrix");
  SquareMatrix power = m;
  for (std::uint64_t k = 1; k <= bound; ++k) {
    if (power.is_identity()) return k;
    power = power * m;
  }
  throw Error(ErrorKind::OrderExceedsBound, "order exceeds " + std::to_string(bound));
}

/// True iff m^p = I and m != I.
inline bool has_order_p(const SquareMatrix& m) {
  return !m.is_identity() && mat_pow(m, m.ctx().p()).is_identity();
}

enum class GroupKind { SL, GL, Explicit };

inline std::string_view to_string(GroupKind k) {
  switch (k) {
    case GroupKind::SL: return "SL";
    case GroupKind::GL: return "GL";
    case GroupKind::Explicit: return "explicit";
  }
  return "?";
}

/// |SL_n(Z/p^e)| or |GL_n(Z/p^e)|. Throws InvalidArgument if the order overflows 64 bits.
inline std::uint64_t group_order_oracle(GroupKind kind, std::size_t n, std::uint32_t p, std::uint32_t e) {
  if (kind == GroupKind::Explicit) throw Error(ErrorKind::InvalidArgument, "no order formula for explicit subgroups");
  if (n == 0 || e == 0) throw Error(ErrorKind::InvalidArgument, "n and e must be positive");
  using u128 = unsigned __int128;
  const auto nn = static_cast<std::uint32_t>(n);
  const u128 pn = checked_pow(p, nn);
  u128 gl = 1;
  for (std::uint32_t i = 0; i < nn; ++i) {
    gl *= pn - checked_pow(p, i);
    if (gl > UINT64_MAX) throw Error(ErrorKind::InvalidArgument, "group order overflows 64 bits");
  }
  u128 order = kind == GroupKind::GL ? gl : gl / (p - 1);
  const std::uint32_t lift_dim = kind == GroupKind::GL ? nn * nn : nn * nn - 1;
  for (std::uint32_t i = 0; i < lift_dim * (e - 1); ++i) {
    order *= p;
    if (order > UINT64_MAX) throw Error(ErrorKind::InvalidArgument, "group order overflows 64 bits");
  }
  return static_cast<std::uint64_t>(order);
}

/// A finite matrix group with its complete, sorted element list.
class GroupTable {
 public:
  /// Builds a table from an element list (sorted and deduplicated here). The
  /// list must contain the identity; closure is spot-checked.
  static GroupTable from_elements(ModulusContext ctx, std::size_t n, std::vector<SquareMatrix> elements,
                                  GroupKind kind = GroupKind::Explicit) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    GroupTable g(kind, ctx, n, std::move(elements));
    if (!g.contains(SquareMatrix::identity(ctx, n))) {
      throw Error(ErrorKind::InvalidArgument, "group table lacks the identity");
    }
    g.spot_check_closure();
    return g;
  }

  GroupKind kind() const noexcept { return kind_; }
  const ModulusContext& ctx() const noexcept { return ctx_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return elements_.size(); }
  const std::vector<SquareMatrix>& elements() const noexcept { return elements_; }
  const SquareMatrix& operator[](std::size_t i) const { return elements_[i]; }

  std::optional<std::size_t> index_of(const SquareMatrix& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const SquareMatrix& m) const { return index_.count(m) != 0; }

 private:
  GroupTable(GroupKind kind, ModulusContext ctx, std::size_t n, std::vector<SquareMatrix> elements)
      : kind_(kind), ctx_(ctx), n_(n), elements_(std::move(elements)) {
    index_.reserve(elements_.size());
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (elements_[i].n() != n_ || !(elements_[i].ctx() == ctx_)) {
        throw Error(ErrorKind::DimensionMismatch, "group element does not match the table's ring or dimension");
      }
      index_.emplace(elements_[i], i);
    }
  }

  void spot_check_closure() const {
    // Deterministic stride sample of products and inverses.
    const std::size_t m = elements_.size();
    const std::size_t samples = std::min<std::size_t>(m, 64);
    for (std::size_t s = 0; s < samples; ++s) {
      const auto& a = elements_[(s * 7919) % m];
      const auto& b = elements_[(s * 104729 + 13) % m];
      if (!contains(a * b) || !contains(mat_inverse(a))) {
        throw Error(ErrorKind::InvalidArgument, "element list is not closed under products and inverses");
      }
    }
  }

  GroupKind kind_;
  ModulusContext ctx_;
  std::size_t n_;
  std::vector<SquareMatrix> elements_;
  std::unordered_map<SquareMatrix, std::size_t, SquareMatrixHash> index_;
};

struct EnumerationOptions {
  static constexpr std::uint64_t kHardCap = 100'000'000;
  std::uint64_t max_order = 10'000'000;
};

/// A minimal generating set of the unit group (Z/p^e)^x, built greedily from
/// the smallest units. The unit group is not cyclic for p = 2, e >= 3.
inline std::vector<Residue> unit_group_generators(const ModulusContext& ctx) {
  std::vector<Residue> gens;
  std::unordered_set<std::uint32_t> generated{1 % ctx.q()};
  const std::uint64_t unit_count = ctx.q() / ctx.p() * (ctx.p() - 1);
  for (std::uint32_t u = 2; u < ctx.q() && generated.size() < unit_count; ++u) {
    if (u % ctx.p() == 0 || generated.count(u)) continue;
    gens.push_back(Residue{u});
    std::vector<std::uint32_t> frontier(generated.begin(), generated.end());
    while (!frontier.empty()) {
      std::vector<std::uint32_t> next;
      for (auto x : frontier) {
        for (auto g : gens) {
          auto y = ctx.mul(Residue{x}, g).value;
          if (generated.insert(y).second) next.push_back(y);
        }
      }
      frontier = std::move(next);
    }
  }
  return gens;
}

/// Generators used for closure: transvections I + E_ij (i != j), plus
/// diag(u, 1, ..., 1) for unit-group generators u when kind is GL.
inline std::vector<SquareMatrix> standard_generators(GroupKind kind, std::size_t n, const ModulusContext& ctx) {
  std::vector<SquareMatrix> gens;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      SquareMatrix t = SquareMatrix::identity(ctx, n);
      t.set(i, j, Residue{1});
      gens.push_back(std::move(t));
    }
  }
  if (kind == GroupKind::GL) {
    for (auto u : unit_group_generators(ctx)) {
      SquareMatrix d = SquareMatrix::identity(ctx, n);
      d.set(0, 0, u);
      gens.push_back(std::move(d));
    }
  }
  return gens;
}

/// Complete enumeration of SL_n(Z/p^e) or GL_n(Z/p^e) by breadth-first closure.
inline GroupTable enumerate_group(GroupKind kind, std::size_t n, const ModulusContext& ctx,
                                  const EnumerationOptions& opts = {}) {
  if (kind == GroupKind::Explicit) {
    throw Error(ErrorKind::InvalidArgument, "enumerate_group needs SL or GL");
  }
  const std::uint64_t cap = std::min(opts.max_order, EnumerationOptions::kHardCap);
  std::uint64_t predicted = 0;
  try {
    predicted = group_order_oracle(kind, n, ctx.p(), ctx.e());
  } catch (const Error&) {
    predicted = UINT64_MAX;
  }
  if (predicted > cap) {
    throw Error(ErrorKind::GroupTooLarge, std::string(to_string(kind)) + "_" + std::to_string(n) + "(Z/" +
                                              std::to_string(ctx.q()) + ") has order above the cap of " +
                                              std::to_string(cap));
  }
  const auto gens = standard_generators(kind, n, ctx);
  std::unordered_set<SquareMatrix, SquareMatrixHash> seen;
  seen.reserve(static_cast<std::size_t>(predicted));
  std::vector<SquareMatrix> order;
  order.reserve(static_cast<std::size_t>(predicted));
  std::deque<std::size_t> queue;
  auto identity = SquareMatrix::identity(ctx, n);
  seen.insert(identity);
  order.push_back(identity);
  queue.push_back(0);
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      SquareMatrix next = order[cur] * g;
      if (seen.insert(next).second) {
        order.push_back(std::move(next));
        queue.push_back(order.size() - 1);
        if (order.size() > cap) throw Error(ErrorKind::GroupTooLarge, "closure exceeded the enumeration cap");
      }
    }
  }
  return GroupTable::from_elements(ctx, n, std::move(order), kind);
}

/// H_j intersected with g: elements congruent to I mod p^j.
inline GroupTable congruence_kernel(const GroupTable& g, std::uint32_t j) {
  std::vector<SquareMatrix> members;
  for (const auto& m : g.elements()) {
    if (in_congruence_kernel(m, j)) members.push_back(m);
  }
  return GroupTable::from_elements(g.ctx(), g.n(), std::move(members));
}

/// The image of g under reduction mod p^j, as a table over Z/p^j.
inline GroupTable reduction_image(const GroupTable& g, std::uint32_t j) {
  std::unordered_set<SquareMatrix, SquareMatrixHash> image;
  for (const auto& m : g.elements()) image.insert(reduce(m, j));
  return GroupTable::from_elements(g.ctx().at_level(j), g.n(),
                                   std::vector<SquareMatrix>(image.begin(), image.end()));
}

/// The table of x h x^{-1} for h in g.
inline GroupTable conjugate(const GroupTable& g, const SquareMatrix& x) {
  const SquareMatrix x_inv = mat_inverse(x);
  std::vector<SquareMatrix> members;
  members.reserve(g.size());
  for (const auto& h : g.elements()) members.push_back(x * h * x_inv);
  return GroupTable::from_elements(g.ctx(), g.n(), std::move(members));
}

/// Upper unitriangular matrices over Z/p^e (a Sylow p-subgroup of GL_n(F_p) when e = 1).
inline GroupTable unitriangular_group(std::size_t n, const ModulusContext& ctx, const EnumerationOptions& opts = {}) {
  const std::size_t free_entries = n * (n - 1) / 2;
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < free_entries; ++i) {
    count *= ctx.q();
    if (count > opts.max_order) throw Error(ErrorKind::GroupTooLarge, "unitriangular group above the cap");
  }
  std::vector<SquareMatrix> members;
  members.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t rest = idx;
    SquareMatrix m = SquareMatrix::identity(ctx, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        m.set(i, j, Residue{static_cast<std::uint32_t>(rest % ctx.q())});
        rest /= ctx.q();
      }
    }
    members.push_back(std::move(m));
  }
  return GroupTable::from_elements(ctx, n, std::move(members));
}

}  // namespace ranklab
