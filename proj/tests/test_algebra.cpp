#include <random>

#include "doctest.h"
#include "numwall/algebra.hpp"

using namespace numwall;

namespace {

DomainValue zp(std::uint64_t p, long v) { return DomainValue(Domain::prime_field(p), v); }
DomainValue zz(long v) { return DomainValue(Domain::integers(), v); }

template <typename F>
void expect_code(F&& f, ErrorCode code) {
  try {
    f();
    FAIL("no error raised");
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

}  // namespace

TEST_CASE("field inverses of worked examples") {
  CHECK(field_inverse(zp(3, 2)) == zp(3, 2));
  CHECK(field_inverse(zp(7, 3)) == zp(7, 5));
  CHECK(field_inverse(zp(83, 2)) == zp(83, 42));
  expect_code([] { field_inverse(zp(5, 0)); }, ErrorCode::ZeroInverse);
  expect_code([] { field_inverse(zz(3)); }, ErrorCode::WrongDomain);
}

TEST_CASE("exact division") {
  CHECK(exact_divide(zz(12), zz(-4)) == zz(-3));
  CHECK(exact_divide(zp(7, 1), zp(7, 3)) == zp(7, 5));
  expect_code([] { exact_divide(zz(7), zz(2)); }, ErrorCode::InexactDivision);
  expect_code([] { exact_divide(zz(7), zz(0)); }, ErrorCode::DivisionByZero);
  expect_code([] { exact_divide(zp(5, 1), zp(5, 0)); }, ErrorCode::DivisionByZero);
}

TEST_CASE("domain parsing and primality") {
  CHECK(Domain::parse("Z").is_integers());
  CHECK(Domain::parse("83").modulus() == 83);
  CHECK(Domain::parse("83").to_string() == "83");
  CHECK(Domain::integers().to_string() == "Z");
  expect_code([] { Domain::parse("4"); }, ErrorCode::NotPrime);
  expect_code([] { Domain::parse("1"); }, ErrorCode::NotPrime);
  expect_code([] { Domain::parse("x3"); }, ErrorCode::ParseError);
  CHECK(is_prime(2));
  CHECK(is_prime(65537));
  CHECK_FALSE(is_prime(65535));
  CHECK_FALSE(is_prime(0));
}

TEST_CASE("residues are canonical") {
  CHECK(zp(5, -1).value() == 4);
  CHECK(zp(5, 12).value() == 2);
  CHECK((zp(5, 3) + zp(5, 4)) == zp(5, 2));
  CHECK((-zp(5, 0)) == zp(5, 0));
}

TEST_CASE("mixing domains is rejected") {
  expect_code([] { (void)(zp(3, 1) + zp(5, 1)); }, ErrorCode::DomainMismatch);
  expect_code([] { (void)(zz(1) * zp(5, 1)); }, ErrorCode::DomainMismatch);
}

TEST_CASE("inverse is an involution and divide undoes multiply") {
  std::mt19937_64 rng(7);
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 83ull, 65521ull, 65537ull, 2147483647ull}) {
    PrimeField f(static_cast<std::uint32_t>(p));
    for (int i = 0; i < 200; ++i) {
      auto a = static_cast<std::uint32_t>(1 + rng() % (p - 1));
      auto b = static_cast<std::uint32_t>(rng() % p);
      CHECK(f.inverse(f.inverse(a)) == a);
      CHECK(f.mul(a, f.inverse(a)) == 1);
      CHECK(f.inverse(a) == inverse_mod(a, static_cast<std::uint32_t>(p)));
      CHECK(f.div(f.mul(b, a), a) == b);
      DomainValue da = zp(p, static_cast<long>(a)), db = zp(p, static_cast<long>(b));
      CHECK(exact_divide(da * db, da) == db);
    }
  }
  for (int i = 0; i < 200; ++i) {
    long a = static_cast<long>(rng() % 2001) - 1000;
    long b = static_cast<long>(rng() % 2001) - 1000;
    if (b == 0) continue;
    CHECK(exact_divide(zz(a) * zz(b), zz(b)) == zz(a));
  }
}

TEST_CASE("integer ring fractions") {
  IntegerRing z;
  CHECK(z.from_fraction(mpq_class(6, 3)) == 2);
  expect_code([&] { z.from_fraction(mpq_class(1, 2)); }, ErrorCode::InexactDivision);
  expect_code([&] { z.fdiv(mpq_class(1), mpq_class(0)); }, ErrorCode::DivisionByZero);
}
