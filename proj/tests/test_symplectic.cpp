#include <catch_amalgamated.hpp>

#include <cstdint>
#include <functional>
#include <random>
#include <set>

#include "ranklab/symplectic.hpp"

using namespace ranklab;

namespace {

FpVector random_vector(const SymplecticSpace& s, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> d(0, s.p() - 1);
  FpVector v(s.dimension());
  for (auto& x : v) x = d(rng);
  return v;
}

// Independent count: ordered isotropic bases of length r divided by |GL_r(F_p)|.
std::uint64_t count_by_ordered_bases(const SymplecticSpace& s) {
  const std::uint32_t p = s.p();
  const std::uint32_t r = s.r();
  std::uint64_t bases = 0;
  std::vector<FpVector> chosen;
  std::function<void()> rec = [&] {
    if (chosen.size() == r) {
      ++bases;
      return;
    }
    for (std::uint64_t code = 1; code < s.vector_count(); ++code) {
      const auto v = s.vector_from_code(code);
      bool ok = true;
      for (const auto& b : chosen) ok = ok && s.pairing(v, b) == 0;
      if (!ok) continue;
      auto rows = chosen;
      rows.push_back(v);
      if (rref(p, rows).size() != rows.size()) continue;
      chosen.push_back(v);
      rec();
      chosen.pop_back();
    }
  };
  rec();
  std::uint64_t gl = 1;
  for (std::uint32_t i = 0; i < r; ++i) gl *= checked_pow(p, r) - checked_pow(p, i);
  return bases / gl;
}

}  // namespace

TEST_CASE("pairing in the split convention", "[symplectic]") {
  const SymplecticSpace s(3, 2);
  CHECK(s.dimension() == 4);
  CHECK(s.pairing(s.basis_vector(0), s.basis_vector(2)) == 1);
  CHECK(s.pairing(s.basis_vector(2), s.basis_vector(0)) == 2);
  CHECK(s.pairing(s.basis_vector(0), s.basis_vector(1)) == 0);
  CHECK(s.pairing(s.basis_vector(1), s.basis_vector(3)) == 1);
  CHECK_THROWS_AS(s.pairing({1, 0}, {0, 1, 0, 0}), Error);
  CHECK_THROWS_AS(SymplecticSpace(4, 1), Error);
}

TEST_CASE("form is bilinear, alternating and nondegenerate", "[symplectic][property]") {
  std::mt19937_64 rng(3);
  for (auto [p, r] : {std::pair{2u, 1u}, {2u, 3u}, {3u, 2u}, {5u, 2u}, {7u, 1u}}) {
    const SymplecticSpace s(p, r);
    for (int i = 0; i < 300; ++i) {
      const auto a = random_vector(s, rng), b = random_vector(s, rng), c = random_vector(s, rng);
      FpVector bc(b.size());
      for (std::size_t k = 0; k < b.size(); ++k) bc[k] = (b[k] + c[k]) % p;
      REQUIRE(s.pairing(a, bc) == (s.pairing(a, b) + s.pairing(a, c)) % p);
      REQUIRE(s.pairing(a, a) == 0);
      REQUIRE((s.pairing(a, b) + s.pairing(b, a)) % p == 0);
    }
    // Zero radical: every nonzero vector pairs nontrivially with some basis vector.
    for (std::uint64_t code = 1; code < s.vector_count(); ++code) {
      const auto v = s.vector_from_code(code);
      bool hit = false;
      for (std::uint32_t i = 0; i < s.dimension(); ++i) hit |= s.pairing(v, s.basis_vector(i)) != 0;
      REQUIRE(hit);
    }
  }
}

TEST_CASE("Lagrangian counts", "[symplectic][oracle]") {
  const std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint64_t>> table{
      {2, 1, 3}, {2, 2, 15}, {2, 3, 135}, {3, 1, 4}, {3, 2, 40}, {5, 1, 6}, {7, 1, 8}};
  for (auto [p, r, expected] : table) {
    const SymplecticSpace s(p, r);
    INFO("p=" << p << " r=" << r);
    // The product oracle is first confirmed by an unrelated count.
    REQUIRE(count_by_ordered_bases(s) == expected);
    REQUIRE(lagrangian_count_oracle(p, r) == expected);
    const auto ls = enumerate_lagrangians(s);
    CHECK(ls.size() == expected);
    for (const auto& l : ls) {
      CHECK(l.dimension() == r);
      CHECK(is_totally_isotropic(l));
      CHECK(is_maximal_isotropic(l));
    }
    CHECK(std::is_sorted(ls.begin(), ls.end()));
    CHECK(lagrangian_order_check(s).holds());
  }
}

TEST_CASE("canonical form is unique per subspace", "[symplectic][property]") {
  std::mt19937_64 rng(17);
  const SymplecticSpace s(3, 2);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_vector(s, rng), b = random_vector(s, rng);
    FpVector mix(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) mix[k] = (2 * a[k] + b[k]) % 3;
    const SymplecticSubspace u(s, {a, b});
    const SymplecticSubspace v(s, {mix, a, b, a});
    REQUIRE(u == v);
    REQUIRE(u.contains(mix));
  }
  const auto all = enumerate_lagrangians(SymplecticSpace(2, 3));
  CHECK(std::set<SymplecticSubspace>(all.begin(), all.end()).size() == all.size());
}

TEST_CASE("isotropic closure and caps", "[symplectic]") {
  const SymplecticSpace s(2, 1);
  const auto iso = all_isotropic_subspaces(s);
  CHECK(iso.size() == 4);  // zero subspace plus three lines
  CHECK_FALSE(is_totally_isotropic(SymplecticSubspace(s, {s.basis_vector(0), s.basis_vector(1)})));
  LagrangianOptions small;
  small.max_search = 10;
  CHECK_THROWS_MATCHES(enumerate_lagrangians(SymplecticSpace(3, 2), small), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.kind() == ErrorKind::SpaceTooLarge; }));
}
