#pragma once

/**
 * @file symbolalg.hpp
 * @brief The twisted monomial algebra behind a tensor product of r symbol
 * algebras of degree p.
 *
 * Generators z_1, ..., z_{2r} satisfy z_{2i-1} z_{2i} = zeta z_{2i} z_{2i-1};
 * generators from different pairs commute, and z_j^p is central (it stands
 * for t_j). Monomials are written in the normal order z_1^{a_1} ... z_{2r}^{a_{2r}},
 * and
 *
 *     z^a z^b = zeta^{sigma(a,b)} z^{a+b},   sigma(a,b) = -sum_i a_{2i} b_{2i-1}.
 *
 * Worked example for r = 1: z_2 z_1 has a = (0,1), b = (1,0), so
 * sigma = -1 and z_2 z_1 = zeta^{-1} z_1 z_2, which is the defining relation
 * read backwards. sigma is bilinear, hence a 2-cocycle, hence multiplication
 * is associative.
 *
 * Elements are finite sums of monomials with coefficients in Q(zeta). The
 * value-group order on exponents is lexicographic with the last coordinate
 * most significant, and the valuation of an element is the smallest exponent
 * in its support.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ranklab/error.hpp"
#include "ranklab/modring.hpp"
#include "ranklab/symplectic.hpp"

namespace ranklab {

struct AlgebraPresentation {
  std::uint32_t p;
  std::uint32_t r;

  AlgebraPresentation(std::uint32_t p_, std::uint32_t r_) : p(p_), r(r_) {
    if (!is_prime(p)) throw Error(ErrorKind::InvalidArgument, "symbol algebra degree must be prime");
    if (r < 1) throw Error(ErrorKind::InvalidArgument, "need at least one symbol factor");
  }

  std::uint32_t generator_count() const noexcept { return 2 * r; }
  CyclotomicScalar zeta() const { return zeta_power(1, p); }

  friend bool operator==(const AlgebraPresentation&, const AlgebraPresentation&) = default;
};

/// Exponent vector in Z^{2r}; index j-1 holds the exponent of z_j.
struct ExponentVector {
  std::vector<std::int64_t> a;

  static ExponentVector zero(std::size_t len) { return {std::vector<std::int64_t>(len, 0)}; }
  static ExponentVector unit(std::size_t len, std::size_t j) {
    auto v = zero(len);
    v.a.at(j) = 1;
    return v;
  }

  std::size_t size() const noexcept { return a.size(); }
  bool is_zero() const {
    for (auto x : a) {
      if (x != 0) return false;
    }
    return true;
  }

  ExponentVector operator+(const ExponentVector& o) const {
    check(o);
    ExponentVector s = *this;
    for (std::size_t i = 0; i < a.size(); ++i) s.a[i] += o.a[i];
    return s;
  }
  ExponentVector operator-() const {
    ExponentVector s = *this;
    for (auto& x : s.a) x = -x;
    return s;
  }
  ExponentVector operator*(std::int64_t k) const {
    ExponentVector s = *this;
    for (auto& x : s.a) x *= k;
    return s;
  }

  friend bool operator==(const ExponentVector&, const ExponentVector&) = default;

  void check(const ExponentVector& o) const {
    if (o.a.size() != a.size()) throw Error(ErrorKind::DimensionMismatch, "exponent vectors of different length");
  }
};

/// Lexicographic with the last coordinate most significant.
struct ValueOrder {
  bool operator()(const ExponentVector& x, const ExponentVector& y) const {
    for (std::size_t i = x.a.size(); i-- > 0;) {
      if (x.a[i] != y.a[i]) return x.a[i] < y.a[i];
    }
    return false;
  }
};

inline std::ostream& operator<<(std::ostream& os, const ExponentVector& v) {
  os << "(";
  for (std::size_t i = 0; i < v.a.size(); ++i) os << (i ? "," : "") << v.a[i];
  return os << ")";
}

namespace detail {

inline std::uint32_t mod_p(std::int64_t x, std::uint32_t p) {
  std::int64_t r = x % static_cast<std::int64_t>(p);
  return static_cast<std::uint32_t>(r < 0 ? r + p : r);
}

inline void require_length(const AlgebraPresentation& pres, const ExponentVector& v) {
  if (v.size() != pres.generator_count()) {
    throw Error(ErrorKind::DimensionMismatch,
                "exponent vector has length " + std::to_string(v.size()) + ", expected " +
                    std::to_string(pres.generator_count()));
  }
}

}  // namespace detail

/// sigma(a, b) mod p: the zeta-exponent picked up when z^a z^b is put in normal order.
inline std::uint32_t cocycle(const ExponentVector& a, const ExponentVector& b, const AlgebraPresentation& pres) {
  detail::require_length(pres, a);
  detail::require_length(pres, b);
  std::int64_t acc = 0;
  for (std::uint32_t i = 0; i < pres.r; ++i) {
    const std::int64_t term = detail::mod_p(a.a[2 * i + 1], pres.p) * std::int64_t{detail::mod_p(b.a[2 * i], pres.p)};
    acc = (acc + term) % pres.p;
  }
  return detail::mod_p(-acc, pres.p);
}

class AlgebraElement {
 public:
  using TermMap = std::map<ExponentVector, CyclotomicScalar, ValueOrder>;

  explicit AlgebraElement(AlgebraPresentation pres) : pres_(pres) {}

  static AlgebraElement monomial(const AlgebraPresentation& pres, ExponentVector a, CyclotomicScalar c) {
    detail::require_length(pres, a);
    AlgebraElement x(pres);
    x.add_term(std::move(a), std::move(c));
    return x;
  }
  static AlgebraElement monomial(const AlgebraPresentation& pres, ExponentVector a) {
    return monomial(pres, std::move(a), CyclotomicScalar::one(pres.p));
  }
  static AlgebraElement generator(const AlgebraPresentation& pres, std::size_t j) {
    return monomial(pres, ExponentVector::unit(pres.generator_count(), j));
  }
  static AlgebraElement scalar(const AlgebraPresentation& pres, CyclotomicScalar c) {
    return monomial(pres, ExponentVector::zero(pres.generator_count()), std::move(c));
  }
  static AlgebraElement one(const AlgebraPresentation& pres) { return scalar(pres, CyclotomicScalar::one(pres.p)); }

  /// The two-sided inverse of z^a, namely zeta^{sigma(a,a)} z^{-a}.
  static AlgebraElement monomial_inverse(const AlgebraPresentation& pres, const ExponentVector& a) {
    return monomial(pres, -a, zeta_power(cocycle(a, a, pres), pres.p));
  }

  const AlgebraPresentation& presentation() const noexcept { return pres_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t term_count() const noexcept { return terms_.size(); }

  /// Adds c z^a, dropping the term if it cancels.
  void add_term(ExponentVector a, CyclotomicScalar c) {
    detail::require_length(pres_, a);
    if (c.p() != pres_.p) throw Error(ErrorKind::PresentationMismatch, "coefficient over the wrong cyclotomic field");
    auto it = terms_.find(a);
    if (it == terms_.end()) {
      if (!c.is_zero()) terms_.emplace(std::move(a), std::move(c));
      return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  AlgebraElement operator+(const AlgebraElement& o) const {
    check(o);
    AlgebraElement s = *this;
    for (const auto& [a, c] : o.terms_) s.add_term(a, c);
    return s;
  }
  AlgebraElement operator-() const {
    AlgebraElement s(pres_);
    for (const auto& [a, c] : terms_) s.terms_.emplace(a, -c);
    return s;
  }
  AlgebraElement operator-(const AlgebraElement& o) const { return *this + (-o); }

  friend bool operator==(const AlgebraElement& x, const AlgebraElement& y) {
    return x.pres_ == y.pres_ && x.terms_ == y.terms_;
  }

  void check(const AlgebraElement& o) const {
    if (!(o.pres_ == pres_)) throw Error(ErrorKind::PresentationMismatch, "elements of different algebras");
  }

 private:
  AlgebraPresentation pres_;
  TermMap terms_;
};

/// Bilinear extension of z^a z^b = zeta^{sigma(a,b)} z^{a+b}.
inline AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y) {
  x.check(y);
  const auto& pres = x.presentation();
  AlgebraElement out(pres);
  for (const auto& [a, ca] : x.terms()) {
    for (const auto& [b, cb] : y.terms()) {
      out.add_term(a + b, ca * cb * zeta_power(cocycle(a, b, pres), pres.p));
    }
  }
  return out;
}

inline AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y) { return multiply(x, y); }

/// The exponent k in z^a z^b (z^a)^{-1} (z^b)^{-1} = zeta^k, computed by
/// actual multiplication and cross-checked against sigma(a,b) - sigma(b,a).
inline std::uint32_t commutator_pairing(const ExponentVector& a, const ExponentVector& b,
                                        const AlgebraPresentation& pres) {
  const auto x = AlgebraElement::monomial(pres, a);
  const auto y = AlgebraElement::monomial(pres, b);
  const auto comm = x * y * AlgebraElement::monomial_inverse(pres, a) * AlgebraElement::monomial_inverse(pres, b);
  if (comm.term_count() != 1 || !comm.terms().begin()->first.is_zero()) {
    throw Error(ErrorKind::NonScalarCommutator, "commutator of monomials is not a scalar");
  }
  const auto k = comm.terms().begin()->second.as_zeta_power();
  if (!k) throw Error(ErrorKind::NonScalarCommutator, "commutator scalar is not a power of zeta");
  const std::uint32_t expected = (cocycle(a, b, pres) + pres.p - cocycle(b, a, pres)) % pres.p;
  if (*k != expected) throw Error(ErrorKind::NonScalarCommutator, "commutator disagrees with the cocycle");
  return *k;
}

/// Generator-adjacent index (z_{2i-1}, z_{2i}) to split index (i, i+r), 0-based.
inline std::vector<std::uint32_t> split_permutation(std::uint32_t r) {
  std::vector<std::uint32_t> perm(2 * r);
  for (std::uint32_t i = 0; i < r; ++i) {
    perm[2 * i] = i;
    perm[2 * i + 1] = i + r;
  }
  return perm;
}

/// Whether the commutator pairing, transported along perm, equals the
/// standard symplectic form on every pair of basis exponents.
inline bool pairing_matches_standard_form(const AlgebraPresentation& pres, const std::vector<std::uint32_t>& perm) {
  const std::uint32_t d = pres.generator_count();
  if (perm.size() != d) return false;
  const SymplecticSpace space(pres.p, pres.r);
  for (std::uint32_t j = 0; j < d; ++j) {
    for (std::uint32_t k = 0; k < d; ++k) {
      const auto lhs = commutator_pairing(ExponentVector::unit(d, j), ExponentVector::unit(d, k), pres);
      const auto rhs = space.pairing(space.basis_vector(perm[j]), space.basis_vector(perm[k]));
      if (lhs != rhs) return false;
    }
  }
  return true;
}

/// Exhaustive check over basis exponents and their pairwise sums that the
/// commutator pairing is additive in each slot and vanishes on the diagonal.
inline bool pairing_is_biadditive_alternating(const AlgebraPresentation& pres) {
  const std::uint32_t d = pres.generator_count();
  const std::uint32_t p = pres.p;
  auto e = [d](std::uint32_t j) { return ExponentVector::unit(d, j); };
  for (std::uint32_t i = 0; i < d; ++i) {
    for (std::uint32_t j = 0; j < d; ++j) {
      if (commutator_pairing(e(i) + e(j), e(i) + e(j), pres) != 0) return false;
      for (std::uint32_t k = 0; k < d; ++k) {
        const auto left = commutator_pairing(e(i) + e(j), e(k), pres);
        const auto right = commutator_pairing(e(k), e(i) + e(j), pres);
        const auto ik = commutator_pairing(e(i), e(k), pres);
        const auto jk = commutator_pairing(e(j), e(k), pres);
        const auto ki = commutator_pairing(e(k), e(i), pres);
        const auto kj = commutator_pairing(e(k), e(j), pres);
        if (left != (ik + jk) % p || right != (ki + kj) % p) return false;
      }
    }
  }
  return true;
}

inline std::pair<ExponentVector, CyclotomicScalar> leading_term(const AlgebraElement& x) {
  if (x.is_zero()) throw Error(ErrorKind::ZeroElement, "leading term of zero");
  const auto& [a, c] = *x.terms().begin();
  return {a, c};
}

inline ExponentVector valuation(const AlgebraElement& x) { return leading_term(x).first; }

/// p^{2r}, the dimension of the algebra over its center.
inline std::uint64_t algebra_dimension(const AlgebraPresentation& pres) { return checked_pow(pres.p, 2 * pres.r); }

/// Index of the center's exponent lattice in Z^{2r}: |det| of the lattice
/// basis {p e_j}, after confirming each basis vector is central.
inline std::uint64_t value_group_index(const AlgebraPresentation& pres) {
  using boost::multiprecision::cpp_int;
  const std::uint32_t d = pres.generator_count();
  std::vector<ExponentVector> lattice;
  for (std::uint32_t j = 0; j < d; ++j) lattice.push_back(ExponentVector::unit(d, j) * pres.p);
  for (const auto& v : lattice) {
    for (std::uint32_t k = 0; k < d; ++k) {
      if (commutator_pairing(v, ExponentVector::unit(d, k), pres) != 0) {
        throw Error(ErrorKind::InvalidArgument, "center lattice vector is not central");
      }
    }
  }
  // Bareiss elimination on the integer lattice basis.
  std::vector<cpp_int> m(d * d);
  for (std::uint32_t i = 0; i < d; ++i) {
    for (std::uint32_t j = 0; j < d; ++j) m[i * d + j] = lattice[i].a[j];
  }
  cpp_int prev = 1;
  int sign = 1;
  for (std::uint32_t k = 0; k + 1 < d; ++k) {
    if (m[k * d + k] == 0) {
      std::uint32_t s = k + 1;
      while (s < d && m[s * d + k] == 0) ++s;
      if (s == d) return 0;
      for (std::uint32_t j = 0; j < d; ++j) std::swap(m[k * d + j], m[s * d + j]);
      sign = -sign;
    }
    for (std::uint32_t i = k + 1; i < d; ++i) {
      for (std::uint32_t j = k + 1; j < d; ++j) {
        m[i * d + j] = (m[i * d + j] * m[k * d + k] - m[i * d + k] * m[k * d + j]) / prev;
      }
    }
    prev = m[k * d + k];
  }
  cpp_int det = m[d * d - 1] * sign;
  if (det < 0) det = -det;
  return det.convert_to<std::uint64_t>();
}

/// A random element with 1..max_terms terms, exponents in [-exp_range, exp_range]
/// and nonzero coefficients built from small integers.
template <class URBG>
AlgebraElement random_element(const AlgebraPresentation& pres, URBG& rng, std::size_t max_terms = 5,
                              std::int64_t exp_range = 3, std::int64_t coeff_range = 4) {
  std::uniform_int_distribution<std::size_t> nterms(1, max_terms);
  std::uniform_int_distribution<std::int64_t> expo(-exp_range, exp_range);
  std::uniform_int_distribution<std::int64_t> coef(-coeff_range, coeff_range);
  AlgebraElement x(pres);
  while (x.is_zero()) {
    const std::size_t count = nterms(rng);
    for (std::size_t t = 0; t < count; ++t) {
      ExponentVector a = ExponentVector::zero(pres.generator_count());
      for (auto& v : a.a) v = expo(rng);
      std::vector<Rational> c(pres.p - 1);
      for (auto& v : c) v = Rational(coef(rng), 1 + (rng() % 3));
      x.add_term(std::move(a), CyclotomicScalar(pres.p, std::move(c)));
    }
  }
  return x;
}

}  // namespace ranklab
