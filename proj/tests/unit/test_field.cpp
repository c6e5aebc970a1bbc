#include <set>

#include "doctest.h"
#include "pmds/error.hpp"
#include "pmds/field.hpp"
#include "support/errors.hpp"

using namespace pmds;

using testing_support::error_of;

TEST_CASE("prime field basics") {
  const Field f = Field::create(19);
  CHECK(f.q() == 19);
  CHECK(f.Q() == 20);
  CHECK(f.inv(f.from_int(2)) == f.from_int(10));
  CHECK(f.pow(f.from_int(2), 4) == f.from_int(16));
  CHECK(f.from_int(-1) == f.from_int(18));
  CHECK(f.format(f.from_int(7)) == "7");
  CHECK(f.parse("15") == f.from_int(15));
  const auto els = f.elements();
  REQUIRE(els.size() == 19);
  for (std::uint32_t i = 0; i < 19; ++i) CHECK(els[i].v == i);
}

TEST_CASE("prime field arithmetic matches integer arithmetic mod p") {
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 13u, 19u}) {
    const Field f = Field::create(p);
    for (std::uint32_t a = 0; a < p; ++a) {
      for (std::uint32_t b = 0; b < p; ++b) {
        CHECK(f.add(Felt{a}, Felt{b}).v == (a + b) % p);
        CHECK(f.mul(Felt{a}, Felt{b}).v == (a * b) % p);
        CHECK(f.sub(Felt{a}, Felt{b}).v == (a + p - b) % p);
      }
    }
  }
}

TEST_CASE("extension field moduli are the lexicographically smallest irreducibles") {
  CHECK(Field::create(2, 2).modulus() == std::vector<std::uint32_t>{1, 1, 1});
  CHECK(Field::create(3, 2).modulus() == std::vector<std::uint32_t>{1, 0, 1});
  const Field f4 = Field::create(2, 2);
  const Felt x = f4.element(2);
  CHECK(f4.coeffs(x) == std::vector<std::uint32_t>{0, 1});
  CHECK(f4.mul(x, x) == f4.element(3));  // x^2 = x + 1
  CHECK(f4.format(f4.element(3)) == "[1,1]");
  CHECK(f4.parse("[0,1]") == x);
}

TEST_CASE("field axioms hold exhaustively for small fields") {
  for (std::uint64_t q : {2u, 3u, 4u, 8u, 9u, 16u, 25u, 27u, 49u, 64u}) {
    CAPTURE(q);
    const Field f = Field::from_order(q);
    const auto els = f.elements();
    CHECK(els.size() == q);
    CHECK(std::set<Felt>(els.begin(), els.end()).size() == q);
    for (Felt a : els) {
      CHECK(f.pow(a, q) == a);
      CHECK(f.add(a, f.neg(a)).is_zero());
      if (!a.is_zero()) CHECK(f.mul(a, f.inv(a)) == f.one());
      for (Felt b : els) {
        CHECK(f.mul(a, b) == f.mul(b, a));
        const Felt c = els[(a.v * 7 + b.v * 3) % q];
        CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
      }
    }
  }
}

TEST_CASE("multiplicative group is cyclic of order q-1") {
  for (std::uint64_t q : {8u, 9u, 16u, 27u}) {
    const Field f = Field::from_order(q);
    bool found = false;
    for (Felt g : f.elements()) {
      if (g.is_zero()) continue;
      std::set<Felt> powers;
      Felt acc = f.one();
      for (std::uint64_t i = 0; i + 1 < q; ++i) {
        powers.insert(acc);
        acc = f.mul(acc, g);
      }
      if (powers.size() == q - 1) found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("field errors") {
  CHECK(error_of([] { Field::create(4); }) == ErrorCode::NotPrime);
  CHECK(error_of([] { Field::create(5, 0); }) == ErrorCode::DegreeZero);
  CHECK(error_of([] { Field::from_order(6); }) == ErrorCode::NotPrime);
  CHECK(error_of([] { Field::create(2, 40); }) == ErrorCode::FieldTooLarge);
  const Field f = Field::create(7);
  CHECK(error_of([&] { f.inv(f.zero()); }) == ErrorCode::DivisionByZero);
  CHECK(error_of([] { require_same_field(Field::create(7), Field::create(11)); }) == ErrorCode::MixedFields);
  CHECK(Field::create(7) == Field::from_order(7));
}
