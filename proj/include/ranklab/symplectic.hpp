#pragma once

/**
 * @file symplectic.hpp
 * @brief The standard symplectic space F_p^{2r} and its isotropic subspaces.
 *
 * Coordinates use the split convention: index i pairs with index i + r, and
 *   gamma(a, b) = sum_{i<r} (a_i b_{i+r} - a_{i+r} b_i).
 * Subspaces are stored by their reduced row-echelon basis, which is their
 * unique canonical representative.
 */

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "ranklab/error.hpp"
#include "ranklab/modring.hpp"

namespace ranklab {

using FpVector = std::vector<std::uint32_t>;

class SymplecticSpace {
 public:
  SymplecticSpace(std::uint32_t p, std::uint32_t r) : p_(p), r_(r) {
    if (!is_prime(p)) throw Error(ErrorKind::InvalidArgument, "symplectic space needs a prime field");
    if (r < 1) throw Error(ErrorKind::InvalidArgument, "symplectic rank must be at least 1");
  }

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t r() const noexcept { return r_; }
  std::uint32_t dimension() const noexcept { return 2 * r_; }

  /// Gram matrix of gamma on the standard basis, row-major.
  std::vector<std::uint32_t> gram() const {
    const std::uint32_t d = dimension();
    std::vector<std::uint32_t> g(d * d, 0);
    for (std::uint32_t i = 0; i < r_; ++i) {
      g[i * d + (i + r_)] = 1 % p_;
      g[(i + r_) * d + i] = (p_ - 1) % p_;
    }
    return g;
  }

  std::uint32_t pairing(const FpVector& a, const FpVector& b) const {
    if (a.size() != dimension() || b.size() != dimension()) {
      throw Error(ErrorKind::DimensionMismatch, "vectors must have length " + std::to_string(dimension()));
    }
    std::uint64_t acc = 0;
    for (std::uint32_t i = 0; i < r_; ++i) {
      acc += std::uint64_t{a[i] % p_} * (b[i + r_] % p_);
      acc += std::uint64_t{p_ - a[i + r_] % p_} * (b[i] % p_);
    }
    return static_cast<std::uint32_t>(acc % p_);
  }

  /// The i-th standard basis vector (0-based).
  FpVector basis_vector(std::uint32_t i) const {
    FpVector v(dimension(), 0);
    v.at(i) = 1 % p_;
    return v;
  }

  /// Vector with base-p digits of code (coordinate 0 least significant).
  FpVector vector_from_code(std::uint64_t code) const {
    FpVector v(dimension());
    for (auto& x : v) {
      x = static_cast<std::uint32_t>(code % p_);
      code /= p_;
    }
    return v;
  }

  std::uint64_t vector_count() const { return checked_pow(p_, dimension()); }

  friend bool operator==(const SymplecticSpace& a, const SymplecticSpace& b) { return a.p_ == b.p_ && a.r_ == b.r_; }

 private:
  std::uint32_t p_;
  std::uint32_t r_;
};

inline std::uint32_t pairing(const FpVector& a, const FpVector& b, const SymplecticSpace& space) {
  return space.pairing(a, b);
}

/// Reduced row-echelon form over F_p; zero rows are dropped.
inline std::vector<FpVector> rref(std::uint32_t p, std::vector<FpVector> rows) {
  if (rows.empty()) return rows;
  const std::size_t cols = rows.front().size();
  const ModulusContext field(p, 1);
  std::size_t lead = 0;
  for (std::size_t col = 0; col < cols && lead < rows.size(); ++col) {
    std::size_t pivot = lead;
    while (pivot < rows.size() && rows[pivot][col] % p == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[lead], rows[pivot]);
    const Residue inv = field.unit_inverse(Residue{rows[lead][col] % p});
    for (auto& x : rows[lead]) x = field.mul(Residue{x % p}, inv).value;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == lead || rows[i][col] % p == 0) continue;
      const Residue f{rows[i][col] % p};
      for (std::size_t j = 0; j < cols; ++j) {
        rows[i][j] = field.sub(Residue{rows[i][j] % p}, field.mul(f, Residue{rows[lead][j]})).value;
      }
    }
    ++lead;
  }
  rows.resize(lead);
  return rows;
}

class SymplecticSubspace {
 public:
  /// The span of the given vectors.
  SymplecticSubspace(const SymplecticSpace& space, std::vector<FpVector> spanning) : space_(space) {
    for (const auto& v : spanning) {
      if (v.size() != space.dimension()) throw Error(ErrorKind::DimensionMismatch, "vector length mismatch");
    }
    basis_ = rref(space.p(), std::move(spanning));
  }

  static SymplecticSubspace zero(const SymplecticSpace& space) { return SymplecticSubspace(space, {}); }

  const SymplecticSpace& space() const noexcept { return space_; }
  const std::vector<FpVector>& basis() const noexcept { return basis_; }
  std::size_t dimension() const noexcept { return basis_.size(); }

  bool contains(const FpVector& v) const {
    auto rows = basis_;
    rows.push_back(v);
    return rref(space_.p(), std::move(rows)).size() == basis_.size();
  }

  SymplecticSubspace with(const FpVector& v) const {
    auto rows = basis_;
    rows.push_back(v);
    return SymplecticSubspace(space_, std::move(rows));
  }

  friend bool operator==(const SymplecticSubspace& a, const SymplecticSubspace& b) {
    return a.space_ == b.space_ && a.basis_ == b.basis_;
  }
  friend bool operator<(const SymplecticSubspace& a, const SymplecticSubspace& b) { return a.basis_ < b.basis_; }

 private:
  SymplecticSpace space_;
  std::vector<FpVector> basis_;
};

inline bool is_totally_isotropic(const SymplecticSubspace& s) {
  const auto& b = s.basis();
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = i + 1; j < b.size(); ++j) {
      if (s.space().pairing(b[i], b[j]) != 0) return false;
    }
  }
  return true;
}

struct LagrangianOptions {
  std::uint64_t max_search = 20'000;  // cap on p^{r^2}
};

namespace detail {

inline void require_enumerable(const SymplecticSpace& space, const LagrangianOptions& opts) {
  std::uint64_t size = 0;
  try {
    size = checked_pow(space.p(), space.r() * space.r());
  } catch (const Error&) {
    size = UINT64_MAX;
  }
  if (size > opts.max_search) {
    throw Error(ErrorKind::SpaceTooLarge, "p^{r^2} = " + std::to_string(size) + " above the cap of " +
                                              std::to_string(opts.max_search));
  }
}

/// Grows isotropic subspaces by prepending reduced rows with strictly smaller
/// pivots, so each subspace is produced once, already in reduced echelon form.
class IsotropicGrower {
 public:
  explicit IsotropicGrower(const SymplecticSpace& space) : space_(space) {}

  std::vector<SymplecticSubspace> run() {
    std::vector<FpVector> rows;
    std::vector<std::uint32_t> pivots;
    grow(rows, pivots, space_.dimension());
    std::sort(found_.begin(), found_.end());
    return std::move(found_);
  }

 private:
  void grow(std::vector<FpVector>& rows, std::vector<std::uint32_t>& pivots, std::uint32_t min_pivot) {
    if (rows.size() == space_.r()) {
      SymplecticSubspace s(space_, rows);
      if (s.basis() != rows) throw Error(ErrorKind::InvalidArgument, "isotropic growth lost echelon form");
      found_.push_back(std::move(s));
      return;
    }
    const std::uint32_t d = space_.dimension();
    const std::uint32_t p = space_.p();
    for (std::uint32_t c = 0; c < min_pivot; ++c) {
      // Free coordinates: after the pivot and not an existing pivot column.
      std::vector<std::uint32_t> free_cols;
      for (std::uint32_t j = c + 1; j < d; ++j) {
        if (std::find(pivots.begin(), pivots.end(), j) == pivots.end()) free_cols.push_back(j);
      }
      const std::uint64_t combos = checked_pow(p, static_cast<std::uint32_t>(free_cols.size()));
      for (std::uint64_t code = 0; code < combos; ++code) {
        FpVector v(d, 0);
        v[c] = 1;
        std::uint64_t rest = code;
        for (auto j : free_cols) {
          v[j] = static_cast<std::uint32_t>(rest % p);
          rest /= p;
        }
        bool isotropic = true;
        for (const auto& row : rows) {
          if (space_.pairing(v, row) != 0) {
            isotropic = false;
            break;
          }
        }
        if (!isotropic) continue;
        rows.insert(rows.begin(), v);
        pivots.push_back(c);
        grow(rows, pivots, c);
        pivots.pop_back();
        rows.erase(rows.begin());
      }
    }
  }

  SymplecticSpace space_;
  std::vector<SymplecticSubspace> found_;
};

}  // namespace detail

/// Every Lagrangian of the space, sorted by echelon key.
inline std::vector<SymplecticSubspace> enumerate_lagrangians(const SymplecticSpace& space,
                                                             const LagrangianOptions& opts = {}) {
  detail::require_enumerable(space, opts);
  auto out = detail::IsotropicGrower(space).run();
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i] == out[i - 1]) throw Error(ErrorKind::InvalidArgument, "duplicate Lagrangian in enumeration");
  }
  return out;
}

/// prod_{i=1}^{r} (p^i + 1).
inline std::uint64_t lagrangian_count_oracle(std::uint32_t p, std::uint32_t r) {
  std::uint64_t count = 1;
  for (std::uint32_t i = 1; i <= r; ++i) count *= checked_pow(p, i) + 1;
  return count;
}

/// All totally isotropic subspaces, found by closing {0} under one-vector
/// isotropic extensions over every vector of the space.
inline std::vector<SymplecticSubspace> all_isotropic_subspaces(const SymplecticSpace& space,
                                                               const LagrangianOptions& opts = {}) {
  detail::require_enumerable(space, opts);
  const std::uint64_t nvec = space.vector_count();
  std::vector<FpVector> vectors;
  vectors.reserve(nvec);
  for (std::uint64_t code = 1; code < nvec; ++code) vectors.push_back(space.vector_from_code(code));

  std::set<SymplecticSubspace> seen{SymplecticSubspace::zero(space)};
  std::vector<SymplecticSubspace> frontier{SymplecticSubspace::zero(space)};
  while (!frontier.empty()) {
    std::vector<SymplecticSubspace> next;
    for (const auto& w : frontier) {
      for (const auto& v : vectors) {
        bool orthogonal = true;
        for (const auto& b : w.basis()) {
          if (space.pairing(v, b) != 0) {
            orthogonal = false;
            break;
          }
        }
        if (!orthogonal || w.contains(v)) continue;
        auto bigger = w.with(v);
        if (seen.insert(bigger).second) next.push_back(std::move(bigger));
      }
    }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

/// Whether no vector outside s extends it to a larger isotropic subspace.
inline bool is_maximal_isotropic(const SymplecticSubspace& s) {
  const auto& space = s.space();
  const std::uint64_t nvec = space.vector_count();
  for (std::uint64_t code = 1; code < nvec; ++code) {
    const FpVector v = space.vector_from_code(code);
    if (s.contains(v)) continue;
    bool orthogonal = true;
    for (const auto& b : s.basis()) {
      if (space.pairing(v, b) != 0) {
        orthogonal = false;
        break;
      }
    }
    if (orthogonal) return false;
  }
  return true;
}

struct LagrangianOrderReport {
  std::size_t lagrangian_count = 0;
  std::size_t maximal_isotropic_count = 0;
  bool all_dimension_r = false;           // every maximal isotropic subspace has dimension r
  bool matches_enumeration = false;       // maximal isotropic subspaces == enumerate_lagrangians
  bool all_dim_r_isotropic_listed = false;

  bool holds() const noexcept { return all_dimension_r && matches_enumeration && all_dim_r_isotropic_listed; }
};

/// Cross-checks the enumeration against a brute-force closure: every maximal
/// totally isotropic subspace has order p^r (so |H|^2 = |A|), and the two
/// routes agree.
inline LagrangianOrderReport lagrangian_order_check(const SymplecticSpace& space, const LagrangianOptions& opts = {}) {
  const auto lagrangians = enumerate_lagrangians(space, opts);
  const auto isotropic = all_isotropic_subspaces(space, opts);
  std::vector<SymplecticSubspace> maximal;
  std::vector<SymplecticSubspace> dim_r;
  for (const auto& s : isotropic) {
    if (is_maximal_isotropic(s)) maximal.push_back(s);
    if (s.dimension() == space.r()) dim_r.push_back(s);
  }
  LagrangianOrderReport rep;
  rep.lagrangian_count = lagrangians.size();
  rep.maximal_isotropic_count = maximal.size();
  rep.all_dimension_r = std::all_of(maximal.begin(), maximal.end(),
                                    [&](const SymplecticSubspace& s) { return s.dimension() == space.r(); });
  rep.matches_enumeration = maximal == lagrangians;
  rep.all_dim_r_isotropic_listed = dim_r == lagrangians;
  return rep;
}

}  // namespace ranklab
