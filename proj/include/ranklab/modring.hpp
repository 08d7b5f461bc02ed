#pragma once

/**
 * @file modring.hpp
 * @brief Scalar domains: the local ring Z/p^e and the cyclotomic field Q(zeta_p).
 *
 * Residues are canonical representatives in [0, p^e). The modulus is capped
 * at 2^31 so that any product of two residues fits in 64 bits and can be
 * reduced immediately.
 *
 * Cyclotomic scalars are polynomials in zeta of degree < p-1 with exact
 * rational coefficients, reduced modulo 1 + x + ... + x^{p-1}.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ranklab/error.hpp"

namespace ranklab {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Integer power with overflow detection; throws InvalidArgument on overflow.
inline std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exp) {
  std::uint64_t result = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    if (base != 0 && result > UINT64_MAX / base) {
      throw Error(ErrorKind::InvalidArgument, "integer power overflows 64 bits");
    }
    result *= base;
  }
  return result;
}

struct Residue {
  std::uint32_t value = 0;

  friend constexpr bool operator==(Residue, Residue) = default;
  friend constexpr auto operator<=>(Residue, Residue) = default;
};

inline std::ostream& operator<<(std::ostream& os, Residue r) { return os << r.value; }

/// The ring Z/p^e, identified by its prime and exponent.
class ModulusContext {
 public:
  static constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 31;

  ModulusContext(std::uint32_t p, std::uint32_t e) : p_(p), e_(e) {
    if (!is_prime(p)) {
      throw Error(ErrorKind::InvalidArgument, "modulus base " + std::to_string(p) + " is not prime");
    }
    if (e < 1) throw Error(ErrorKind::InvalidArgument, "exponent must be at least 1");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
      q *= p;
      if (q > kMaxModulus) {
        throw Error(ErrorKind::InvalidArgument,
                    std::to_string(p) + "^" + std::to_string(e) + " exceeds the 2^31 modulus cap");
      }
    }
    q_ = static_cast<std::uint32_t>(q);
  }

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t e() const noexcept { return e_; }
  std::uint32_t q() const noexcept { return q_; }

  /// The same prime at a different exponent (used by reduction maps).
  ModulusContext at_level(std::uint32_t j) const { return ModulusContext(p_, j); }

  Residue normalize(std::int64_t n) const {
    std::int64_t r = n % static_cast<std::int64_t>(q_);
    if (r < 0) r += q_;
    return Residue{static_cast<std::uint32_t>(r)};
  }

  Residue add(Residue a, Residue b) const {
    std::uint64_t s = std::uint64_t{a.value} + b.value;
    return Residue{static_cast<std::uint32_t>(s >= q_ ? s - q_ : s)};
  }
  Residue sub(Residue a, Residue b) const {
    return Residue{a.value >= b.value ? a.value - b.value : a.value + (q_ - b.value)};
  }
  Residue neg(Residue a) const { return Residue{a.value == 0 ? 0 : q_ - a.value}; }
  Residue mul(Residue a, Residue b) const {
    return Residue{static_cast<std::uint32_t>((std::uint64_t{a.value} * b.value) % q_)};
  }
  Residue pow(Residue a, std::uint64_t k) const {
    Residue result{1 % q_};
    while (k > 0) {
      if (k & 1) result = mul(result, a);
      a = mul(a, a);
      k >>= 1;
    }
    return result;
  }

  bool is_unit(Residue x) const { return x.value % p_ != 0; }

  Residue unit_inverse(Residue x) const {
    if (!is_unit(x)) {
      throw Error(ErrorKind::NotAUnit, std::to_string(x.value) + " is not invertible mod " + std::to_string(q_));
    }
    // Extended Euclid on (x, q).
    std::int64_t old_r = x.value, r = q_;
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
      std::int64_t quot = old_r / r;
      std::int64_t tmp = old_r - quot * r;
      old_r = r;
      r = tmp;
      tmp = old_s - quot * s;
      old_s = s;
      s = tmp;
    }
    return normalize(old_s);
  }

  /// Largest j <= e with p^j | x; zero has valuation e.
  std::uint32_t p_valuation(Residue x) const {
    if (x.value == 0) return e_;
    std::uint32_t j = 0;
    std::uint32_t v = x.value;
    while (v % p_ == 0) {
      v /= p_;
      ++j;
    }
    return j;
  }

  friend bool operator==(const ModulusContext& a, const ModulusContext& b) {
    return a.p_ == b.p_ && a.e_ == b.e_;
  }

 private:
  std::uint32_t p_;
  std::uint32_t e_;
  std::uint32_t q_ = 1;
};

inline Residue normalize(std::int64_t n, const ModulusContext& ctx) { return ctx.normalize(n); }
inline Residue unit_inverse(Residue x, const ModulusContext& ctx) { return ctx.unit_inverse(x); }
inline std::uint32_t p_valuation(Residue x, const ModulusContext& ctx) { return ctx.p_valuation(x); }

using Rational = boost::multiprecision::cpp_rational;

/// An element of Q(zeta_p), stored as p-1 rational coefficients of 1, zeta, ..., zeta^{p-2}.
class CyclotomicScalar {
 public:
  explicit CyclotomicScalar(std::uint32_t p) : p_(p), coeffs_(p - 1) {
    if (!is_prime(p)) throw Error(ErrorKind::InvalidArgument, "cyclotomic order must be prime");
  }

  CyclotomicScalar(std::uint32_t p, std::vector<Rational> coeffs) : CyclotomicScalar(p) {
    if (coeffs.size() > p - 1) {
      throw Error(ErrorKind::DimensionMismatch, "too many cyclotomic coefficients");
    }
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs_[i] = std::move(coeffs[i]);
  }

  static CyclotomicScalar zero(std::uint32_t p) { return CyclotomicScalar(p); }
  static CyclotomicScalar from_rational(std::uint32_t p, Rational c) {
    CyclotomicScalar s(p);
    s.coeffs_[0] = std::move(c);
    return s;
  }
  static CyclotomicScalar one(std::uint32_t p) { return from_rational(p, 1); }

  std::uint32_t p() const noexcept { return p_; }
  const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }

  bool is_zero() const {
    for (const auto& c : coeffs_) {
      if (c != 0) return false;
    }
    return true;
  }

  CyclotomicScalar operator+(const CyclotomicScalar& o) const {
    check(o);
    CyclotomicScalar r(*this);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] += o.coeffs_[i];
    return r;
  }
  CyclotomicScalar operator-(const CyclotomicScalar& o) const {
    check(o);
    CyclotomicScalar r(*this);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] -= o.coeffs_[i];
    return r;
  }
  CyclotomicScalar operator-() const {
    CyclotomicScalar r(*this);
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  CyclotomicScalar operator*(const CyclotomicScalar& o) const {
    check(o);
    // Multiply in Q[x]/(x^p - 1), then fold x^{p-1} = -(1 + ... + x^{p-2}).
    std::vector<Rational> full(p_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < o.coeffs_.size(); ++j) {
        if (o.coeffs_[j] == 0) continue;
        full[(i + j) % p_] += coeffs_[i] * o.coeffs_[j];
      }
    }
    CyclotomicScalar r(p_);
    const Rational& top = full[p_ - 1];
    for (std::size_t i = 0; i + 1 < p_; ++i) r.coeffs_[i] = full[i] - top;
    return r;
  }

  CyclotomicScalar& operator+=(const CyclotomicScalar& o) { return *this = *this + o; }
  CyclotomicScalar& operator*=(const CyclotomicScalar& o) { return *this = *this * o; }

  friend bool operator==(const CyclotomicScalar& a, const CyclotomicScalar& b) {
    return a.p_ == b.p_ && a.coeffs_ == b.coeffs_;
  }

  /// Returns k in [0, p) if this scalar equals zeta^k exactly.
  std::optional<std::uint32_t> as_zeta_power() const;

 private:
  void check(const CyclotomicScalar& o) const {
    if (o.p_ != p_) throw Error(ErrorKind::ModulusMismatch, "cyclotomic scalars over different primes");
  }

  std::uint32_t p_;
  std::vector<Rational> coeffs_;
};

/// zeta^{k mod p}. For k = p-1 mod p this is -(1 + zeta + ... + zeta^{p-2}).
inline CyclotomicScalar zeta_power(std::int64_t k, std::uint32_t p) {
  CyclotomicScalar s(p);
  std::int64_t m = k % static_cast<std::int64_t>(p);
  if (m < 0) m += p;
  std::vector<Rational> c(p - 1);
  if (static_cast<std::uint32_t>(m) == p - 1) {
    for (auto& x : c) x = -1;
  } else {
    c[static_cast<std::size_t>(m)] = 1;
  }
  return CyclotomicScalar(p, std::move(c));
}

inline std::optional<std::uint32_t> CyclotomicScalar::as_zeta_power() const {
  for (std::uint32_t k = 0; k < p_; ++k) {
    if (*this == zeta_power(k, p_)) return k;
  }
  return std::nullopt;
}

inline std::ostream& operator<<(std::ostream& os, const CyclotomicScalar& s) {
  bool first = true;
  for (std::size_t i = 0; i < s.coefficients().size(); ++i) {
    const auto& c = s.coefficients()[i];
    if (c == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << c;
    if (i > 0) os << "*z^" << i;
  }
  if (first) os << "0";
  return os;
}

}  // namespace ranklab
