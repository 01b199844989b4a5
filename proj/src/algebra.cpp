#include "numwall/algebra.hpp"

#include <charconv>
#include <limits>

namespace numwall {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::WrongDomain: return "WrongDomain";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::ZeroInverse: return "ZeroInverse";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::InexactDivision: return "InexactDivision";
    case ErrorCode::UnstableSeed: return "UnstableSeed";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ZeroDivision: return "ZeroDivision";
    case ErrorCode::InternalInconsistency: return "InternalInconsistency";
    case ErrorCode::IncompleteFrame: return "IncompleteFrame";
    case ErrorCode::TooSmallRegion: return "TooSmallRegion";
    case ErrorCode::EffortExhausted: return "EffortExhausted";
    case ErrorCode::OverlapConflict: return "OverlapConflict";
    case ErrorCode::SeedNotStable: return "SeedNotStable";
    case ErrorCode::ReducibleAmbiguity: return "ReducibleAmbiguity";
  }
  return "Unknown";
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

Domain Domain::prime_field(std::uint64_t p) {
  if (p > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::InvalidArgument, "modulus " + std::to_string(p) + " exceeds 32 bits");
  }
  if (!is_prime(p)) {
    throw Error(ErrorCode::NotPrime, "modulus " + std::to_string(p) + " is not prime");
  }
  return Domain(static_cast<std::uint32_t>(p));
}

Domain Domain::parse(std::string_view text) {
  if (text == "Z" || text == "z") return integers();
  std::uint64_t p = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), p);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "bad modulus '" + std::string(text) + "'");
  }
  return prime_field(p);
}

std::string Domain::to_string() const {
  return is_integers() ? std::string("Z") : std::to_string(p_);
}

namespace {

mpz_class reduce(const Domain& d, mpz_class v) {
  if (d.is_prime_field()) {
    mpz_class p(d.modulus());
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
  }
  return v;
}

void require_same(const DomainValue& a, const DomainValue& b) {
  if (!(a.domain() == b.domain())) {
    throw Error(ErrorCode::DomainMismatch,
                "mixing values of Z/" + a.domain().to_string() + " and Z/" + b.domain().to_string());
  }
}

}  // namespace

DomainValue::DomainValue(Domain domain, mpz_class value)
    : domain_(domain), value_(reduce(domain, std::move(value))) {}

DomainValue::DomainValue(Domain domain, long value) : DomainValue(domain, mpz_class(value)) {}

DomainValue DomainValue::operator-() const { return DomainValue(domain_, mpz_class(-value_)); }

DomainValue operator+(const DomainValue& a, const DomainValue& b) {
  require_same(a, b);
  return DomainValue(a.domain_, mpz_class(a.value_ + b.value_));
}

DomainValue operator-(const DomainValue& a, const DomainValue& b) {
  require_same(a, b);
  return DomainValue(a.domain_, mpz_class(a.value_ - b.value_));
}

DomainValue operator*(const DomainValue& a, const DomainValue& b) {
  require_same(a, b);
  return DomainValue(a.domain_, mpz_class(a.value_ * b.value_));
}

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
  std::int64_t r0 = p, r1 = a % p;
  std::int64_t s0 = 0, s1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    std::int64_t s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1) throw Error(ErrorCode::ZeroInverse, "no inverse of " + std::to_string(a) + " mod " + std::to_string(p));
  s0 %= static_cast<std::int64_t>(p);
  if (s0 < 0) s0 += p;
  return static_cast<std::uint32_t>(s0);
}

DomainValue field_inverse(const DomainValue& a) {
  if (!a.domain().is_prime_field()) {
    throw Error(ErrorCode::WrongDomain, "field inverse requested in Z");
  }
  if (a.is_zero()) throw Error(ErrorCode::ZeroInverse, "inverse of 0");
  std::uint32_t p = a.domain().modulus();
  return DomainValue(a.domain(), static_cast<long>(inverse_mod(static_cast<std::uint32_t>(a.value().get_ui()), p)));
}

DomainValue exact_divide(const DomainValue& a, const DomainValue& b) {
  require_same(a, b);
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, a.to_string() + " / 0");
  if (a.domain().is_prime_field()) return a * field_inverse(b);
  return DomainValue(a.domain(), IntegerRing().div(a.value(), b.value()));
}

mpz_class IntegerRing::div(const mpz_class& a, const mpz_class& b) const {
  if (sgn(b) == 0) throw Error(ErrorCode::DivisionByZero, a.get_str() + " / 0");
  if (!mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t())) {
    throw Error(ErrorCode::InexactDivision, a.get_str() + " / " + b.get_str());
  }
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

mpz_class IntegerRing::from_fraction(const mpq_class& f) const {
  // Hand-built fractions may be unreduced.
  if (!mpz_divisible_p(f.get_num_mpz_t(), f.get_den_mpz_t())) {
    throw Error(ErrorCode::InexactDivision, f.get_str() + " is not an integer");
  }
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), f.get_num_mpz_t(), f.get_den_mpz_t());
  return q;
}

mpq_class IntegerRing::fdiv(const mpq_class& a, const mpq_class& b) const {
  if (sgn(b) == 0) throw Error(ErrorCode::DivisionByZero, a.get_str() + " / 0");
  return a / b;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, "modulus " + std::to_string(p) + " is not prime");
  if (p < (1u << 16)) {
    inverses_.assign(p, 0);
    for (std::uint32_t a = 1; a < p; ++a) {
      if (inverses_[a] == 0) {
        std::uint32_t b = inverse_mod(a, p);
        inverses_[a] = b;
        inverses_[b] = a;
      }
    }
  }
}

PrimeField::PrimeField(const Domain& d) : PrimeField(d.modulus()) {
  if (!d.is_prime_field()) throw Error(ErrorCode::WrongDomain, "PrimeField over Z");
}

PrimeField::Value PrimeField::from(const DomainValue& v) const {
  if (v.domain().is_prime_field() && v.domain().modulus() == p_) {
    return static_cast<Value>(v.value().get_ui());
  }
  mpz_class r = v.value() % p_;
  if (sgn(r) < 0) r += p_;
  return static_cast<Value>(r.get_ui());
}

PrimeField::Value PrimeField::from_int(long v) const {
  long r = v % static_cast<long>(p_);
  if (r < 0) r += p_;
  return static_cast<Value>(r);
}

PrimeField::Value PrimeField::inverse(Value a) const {
  if (a == 0) throw Error(ErrorCode::DivisionByZero, "division by 0 mod " + std::to_string(p_));
  if (!inverses_.empty()) return inverses_[a];
  return inverse_mod(a, p_);
}

}  // namespace numwall
