#pragma once

// Exact arithmetic over the integers and over prime fields Z/pZ.
//
// Two layers live here. Domain / DomainValue form the tagged public value
// type used at API boundaries (files, CLI, oracles). IntegerRing and
// PrimeField are untagged arithmetic policies used by the inner loops of the
// wall engine; both expose the same member names so algorithms can be
// written once as templates.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "numwall/error.hpp"

namespace numwall {

bool is_prime(std::uint64_t n);

// The coefficient domain: Z, or Z/pZ with p prime.
class Domain {
 public:
  Domain() = default;

  static Domain integers() { return Domain(); }
  static Domain prime_field(std::uint64_t p);

  // Accepts "Z" (or "z") for the integers, otherwise a decimal prime.
  static Domain parse(std::string_view text);

  bool is_integers() const noexcept { return p_ == 0; }
  bool is_prime_field() const noexcept { return p_ != 0; }
  // 0 for the integers.
  std::uint32_t modulus() const noexcept { return p_; }

  // "Z" or the decimal modulus; inverse of parse().
  std::string to_string() const;

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  explicit Domain(std::uint32_t p) : p_(p) {}
  std::uint32_t p_ = 0;
};

// An exact element of a Domain. Prime-field values are always held in the
// canonical range [0, p).
class DomainValue {
 public:
  DomainValue() = default;
  DomainValue(Domain domain, mpz_class value);
  DomainValue(Domain domain, long value);

  const Domain& domain() const noexcept { return domain_; }
  const mpz_class& value() const noexcept { return value_; }
  bool is_zero() const noexcept { return sgn(value_) == 0; }

  std::string to_string() const { return value_.get_str(); }

  DomainValue operator-() const;
  friend DomainValue operator+(const DomainValue& a, const DomainValue& b);
  friend DomainValue operator-(const DomainValue& a, const DomainValue& b);
  friend DomainValue operator*(const DomainValue& a, const DomainValue& b);
  friend bool operator==(const DomainValue& a, const DomainValue& b) {
    return a.domain_ == b.domain_ && a.value_ == b.value_;
  }

 private:
  Domain domain_;
  mpz_class value_;
};

// Multiplicative inverse in Z/pZ. Throws WrongDomain for Z and ZeroInverse
// for a = 0.
DomainValue field_inverse(const DomainValue& a);

// q with q * b == a. Throws DivisionByZero for b = 0 and, in Z, throws
// InexactDivision when b does not divide a.
DomainValue exact_divide(const DomainValue& a, const DomainValue& b);

// Arbitrary-precision integers. Fractions are exact rationals.
class IntegerRing {
 public:
  using Value = mpz_class;
  using Fraction = mpq_class;

  Domain domain() const { return Domain::integers(); }

  Value zero() const { return 0; }
  Value one() const { return 1; }
  Value from(const DomainValue& v) const { return v.value(); }
  Value from_int(long v) const { return v; }
  DomainValue lift(const Value& v) const { return DomainValue(domain(), v); }

  static bool is_zero(const Value& a) { return sgn(a) == 0; }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value sub(const Value& a, const Value& b) const { return a - b; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value neg(const Value& a) const { return -a; }
  Value div(const Value& a, const Value& b) const;  // exact

  Fraction to_fraction(const Value& a) const { return Fraction(a); }
  // Throws InexactDivision unless the fraction is an integer.
  Value from_fraction(const Fraction& f) const;
  static bool is_zero(const Fraction& a) { return sgn(a) == 0; }
  Fraction fadd(const Fraction& a, const Fraction& b) const { return a + b; }
  Fraction fsub(const Fraction& a, const Fraction& b) const { return a - b; }
  Fraction fmul(const Fraction& a, const Fraction& b) const { return a * b; }
  Fraction fneg(const Fraction& a) const { return -a; }
  Fraction fdiv(const Fraction& a, const Fraction& b) const;
};

// Z/pZ with word-sized residues. Inverses come from a table for p < 2^16 and
// from extended Euclid otherwise.
class PrimeField {
 public:
  using Value = std::uint32_t;
  using Fraction = std::uint32_t;

  explicit PrimeField(std::uint32_t p);
  explicit PrimeField(const Domain& d);

  Domain domain() const { return Domain::prime_field(p_); }
  std::uint32_t modulus() const noexcept { return p_; }

  Value zero() const { return 0; }
  Value one() const { return 1; }
  Value from(const DomainValue& v) const;
  Value from_int(long v) const;
  DomainValue lift(Value v) const { return DomainValue(domain(), static_cast<long>(v)); }

  static bool is_zero(Value a) { return a == 0; }
  Value add(Value a, Value b) const {
    std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<Value>(s >= p_ ? s - p_ : s);
  }
  Value sub(Value a, Value b) const { return a >= b ? a - b : static_cast<Value>(std::uint64_t{a} + p_ - b); }
  Value mul(Value a, Value b) const { return static_cast<Value>(std::uint64_t{a} * b % p_); }
  Value neg(Value a) const { return a == 0 ? 0 : p_ - a; }
  Value inverse(Value a) const;
  Value div(Value a, Value b) const { return mul(a, inverse(b)); }

  Fraction to_fraction(Value a) const { return a; }
  Value from_fraction(Fraction f) const { return f; }
  Fraction fadd(Fraction a, Fraction b) const { return add(a, b); }
  Fraction fsub(Fraction a, Fraction b) const { return sub(a, b); }
  Fraction fmul(Fraction a, Fraction b) const { return mul(a, b); }
  Fraction fneg(Fraction a) const { return neg(a); }
  Fraction fdiv(Fraction a, Fraction b) const { return div(a, b); }

 private:
  std::uint32_t p_;
  std::vector<std::uint32_t> inverses_;
};

// Extended-Euclid inverse of a modulo p, a in [1, p).
std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p);

}  // namespace numwall
