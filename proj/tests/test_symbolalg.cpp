#include <catch_amalgamated.hpp>

#include <cstdint>
#include <random>

#include "ranklab/symbolalg.hpp"

using namespace ranklab;

namespace {

// Split-convention standard form on basis indices, computed directly.
std::uint32_t standard_form(std::uint32_t i, std::uint32_t j, std::uint32_t p, std::uint32_t r) {
  if (j == i + r) return 1;
  if (i == j + r) return p - 1;
  return 0;
}

}  // namespace

TEST_CASE("symbol relations xy = zeta yx", "[symbolalg]") {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const AlgebraPresentation pres(p, 2);
    for (std::size_t i = 0; i < 2; ++i) {
      const auto x = AlgebraElement::generator(pres, 2 * i);
      const auto y = AlgebraElement::generator(pres, 2 * i + 1);
      CHECK(x * y == AlgebraElement::scalar(pres, pres.zeta()) * y * x);
    }
    // Generators of different factors commute.
    CHECK(AlgebraElement::generator(pres, 0) * AlgebraElement::generator(pres, 3) ==
          AlgebraElement::generator(pres, 3) * AlgebraElement::generator(pres, 0));
  }
}

TEST_CASE("monomial inverses are two-sided", "[symbolalg][property]") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::int64_t> d(-4, 4);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const AlgebraPresentation pres(p, 2);
    for (int i = 0; i < 100; ++i) {
      ExponentVector a = ExponentVector::zero(4);
      for (auto& x : a.a) x = d(rng);
      const auto m = AlgebraElement::monomial(pres, a);
      const auto inv = AlgebraElement::monomial_inverse(pres, a);
      REQUIRE(m * inv == AlgebraElement::one(pres));
      REQUIRE(inv * m == AlgebraElement::one(pres));
    }
  }
}

TEST_CASE("multiplication is associative and distributive", "[symbolalg][property]") {
  std::mt19937_64 rng(1234);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (std::uint32_t r : {1u, 2u}) {
      const AlgebraPresentation pres(p, r);
      for (int i = 0; i < 60; ++i) {
        const auto x = random_element(pres, rng, 3);
        const auto y = random_element(pres, rng, 3);
        const auto z = random_element(pres, rng, 3);
        REQUIRE((x * y) * z == x * (y * z));
        REQUIRE(x * (y + z) == x * y + x * z);
        REQUIRE((x - x).is_zero());
      }
    }
  }
}

TEST_CASE("p-th powers of generators are central", "[symbolalg][property]") {
  std::mt19937_64 rng(8);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const AlgebraPresentation pres(p, 2);
    for (std::uint32_t j = 0; j < 4; ++j) {
      const auto c = AlgebraElement::monomial(pres, ExponentVector::unit(4, j) * p);
      for (int i = 0; i < 30; ++i) {
        const auto x = random_element(pres, rng, 4);
        REQUIRE(c * x == x * c);
      }
    }
  }
}

TEST_CASE("commutator pairing is the standard form", "[symbolalg][oracle]") {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (std::uint32_t r : {1u, 2u, 3u}) {
      const AlgebraPresentation pres(p, r);
      const auto perm = split_permutation(r);
      const auto d = pres.generator_count();
      for (std::uint32_t j = 0; j < d; ++j) {
        for (std::uint32_t k = 0; k < d; ++k) {
          REQUIRE(commutator_pairing(ExponentVector::unit(d, j), ExponentVector::unit(d, k), pres) ==
                  standard_form(perm[j], perm[k], p, r));
        }
      }
      CHECK(pairing_matches_standard_form(pres, perm));
      CHECK(pairing_is_biadditive_alternating(pres));
    }
  }
  // The identity permutation is wrong once r >= 2.
  const AlgebraPresentation pres(3, 2);
  CHECK_FALSE(pairing_matches_standard_form(pres, {0, 1, 2, 3}));
  CHECK_FALSE(pairing_matches_standard_form(pres, {0, 1}));
}

TEST_CASE("valuation is additive", "[symbolalg][property]") {
  std::mt19937_64 rng(77);
  for (std::uint32_t p : {2u, 3u}) {
    for (std::uint32_t r : {1u, 2u}) {
      const AlgebraPresentation pres(p, r);
      for (int i = 0; i < 500; ++i) {
        const auto x = random_element(pres, rng);
        const auto y = random_element(pres, rng);
        const auto xy = x * y;
        REQUIRE_FALSE(xy.is_zero());
        REQUIRE(valuation(xy) == valuation(x) + valuation(y));
        // Leading coefficient is the product of leading coefficients up to the cocycle twist.
        const auto [a, ca] = leading_term(x);
        const auto [b, cb] = leading_term(y);
        REQUIRE(leading_term(xy).second == ca * cb * zeta_power(cocycle(a, b, pres), p));
      }
    }
  }
}

TEST_CASE("value order and leading terms", "[symbolalg]") {
  const AlgebraPresentation pres(3, 1);
  auto x = AlgebraElement::generator(pres, 0) + AlgebraElement::generator(pres, 1);
  // Last coordinate most significant: (1,0) precedes (0,1).
  CHECK(valuation(x) == ExponentVector{{1, 0}});
  CHECK(ValueOrder{}(ExponentVector{{5, -1}}, ExponentVector{{0, 0}}));
  CHECK_THROWS_MATCHES(leading_term(AlgebraElement(pres)), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.kind() == ErrorKind::ZeroElement; }));
}

TEST_CASE("value-group index equals the dimension", "[symbolalg]") {
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (std::uint32_t r = 1; r <= 4; ++r) {
      const AlgebraPresentation pres(p, r);
      CHECK(value_group_index(pres) == checked_pow(p, 2 * r));
      CHECK(algebra_dimension(pres) == checked_pow(p, 2 * r));
    }
  }
  CHECK(algebra_dimension(AlgebraPresentation(3, 1)) == 9);
}

TEST_CASE("presentation errors", "[symbolalg]") {
  CHECK_THROWS_AS(AlgebraPresentation(4, 1), Error);
  CHECK_THROWS_AS(AlgebraPresentation(3, 0), Error);
  const AlgebraPresentation a(3, 1), b(5, 1);
  CHECK_THROWS_MATCHES(AlgebraElement::one(a) * AlgebraElement::one(b), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::PresentationMismatch;
                       }));
  CHECK_THROWS_AS(AlgebraElement::monomial(a, ExponentVector::zero(3)), Error);
}
