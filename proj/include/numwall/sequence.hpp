#pragma once

// Sequence generation: constant-width D0L substitution systems with a final
// coding (D0LEC), closed-form sequences (Rook, Knight, Pagoda, Rueppel,
// Thue-Morse, seeded pseudorandom), and an empirical power-freeness scan.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "numwall/algebra.hpp"

namespace numwall {

// A deterministic context-free substitution over single-character symbols.
// Every alphabet symbol has exactly one rule and all right-hand sides share
// one width >= 1.
class Morphism {
 public:
  Morphism() = default;
  // `alphabet` lists the symbols in order; `rules` must cover exactly them.
  Morphism(std::string alphabet, std::map<char, std::string> rules);

  const std::string& alphabet() const noexcept { return alphabet_; }
  std::size_t width() const noexcept { return width_; }
  bool contains(char symbol) const { return rules_.count(symbol) != 0; }
  const std::string& image(char symbol) const;
  std::string apply(std::string_view word) const;

  friend bool operator==(const Morphism&, const Morphism&) = default;

 private:
  std::string alphabet_;
  std::map<char, std::string> rules_;
  std::size_t width_ = 0;
};

// First `length` symbols of the fixed point of `m` grown from `seed`.
// Throws UnstableSeed unless m(seed) starts with seed. A width-1 morphism
// never grows, and its fixed point from `seed` is taken to be the constant
// word seed seed seed ...
std::string d0l_generate(const Morphism& m, char seed, std::size_t length);

// A D0L generator plus a final constant-width coding into domain values.
class D0LECSpec {
 public:
  D0LECSpec() = default;
  D0LECSpec(Morphism generator, char seed, std::map<char, std::vector<long>> extension, Domain domain);

  const Morphism& generator() const noexcept { return generator_; }
  char seed() const noexcept { return seed_; }
  const std::map<char, std::vector<long>>& extension() const noexcept { return extension_; }
  std::size_t extension_width() const noexcept { return ext_width_; }
  const Domain& domain() const noexcept { return domain_; }

  // Same spec with the coding reduced into another domain.
  D0LECSpec with_domain(Domain d) const;

  friend bool operator==(const D0LECSpec&, const D0LECSpec&) = default;

 private:
  Morphism generator_;
  char seed_ = 0;
  std::map<char, std::vector<long>> extension_;
  std::size_t ext_width_ = 0;
  Domain domain_;
};

// Terms start .. start+length-1 of extension(fixed point). Only the needed
// prefix of the fixed point is expanded.
std::vector<DomainValue> d0lec_extend(const D0LECSpec& spec, std::size_t start, std::size_t length);

// Text format, one directive per line:
//   alphabet A B C D
//   gen A -> BC
//   seed B
//   ext A -> 0
//   mod 3
// '#' starts a comment. format_d0lec() emits the canonical form, which
// parse_d0lec() reads back to an equal spec.
D0LECSpec parse_d0lec(std::string_view text);
std::string format_d0lec(const D0LECSpec& spec);
D0LECSpec load_d0lec_file(const std::string& path);

// Closed forms. All accept negative indices.
int rook(long n);
int knight(long n);                      // 0 or 1
std::uint32_t pagoda(long n, std::uint32_t p = 3);
int rueppel(long n);                     // 1 iff n + 1 is a power of two (n >= 0)
int thue_morse(long n);                  // parity of popcount(n), n >= 0
std::uint64_t libran(std::uint64_t seed, long n);  // counter-based 64-bit mix

// Closed-form and seeded sequences addressed by name.
struct BuiltinSequence {
  std::string name;
  Domain domain;
  std::uint64_t seed = 1;
};

struct PeriodicWord {
  std::vector<DomainValue> digits;
};

// Explicit terms S_start .. S_{start + size - 1}.
struct FiniteSegment {
  std::vector<DomainValue> digits;
  long start = 0;
};

class SequenceSpec {
 public:
  using Source = std::variant<BuiltinSequence, PeriodicWord, D0LECSpec, FiniteSegment>;

  explicit SequenceSpec(Source source);

  static SequenceSpec periodic(std::vector<DomainValue> digits);
  static SequenceSpec periodic(std::string_view digit_text, Domain domain);
  static SequenceSpec segment(std::vector<DomainValue> digits, long start = 0);

  const Source& source() const noexcept { return source_; }
  Domain domain() const;

  bool is_periodic() const { return std::holds_alternative<PeriodicWord>(source_); }
  std::size_t period() const;
  // Smallest and one-past-largest index with a defined term (nullopt when
  // unbounded on that side).
  std::optional<long> first_index() const;
  std::optional<long> end_index() const;

  // Throws OutOfRange when any requested index is undefined.
  std::vector<DomainValue> terms(long start, std::size_t count) const;
  DomainValue term(long n) const { return terms(n, 1).front(); }

  std::string describe() const;

 private:
  Source source_;
};

// Names: thue-morse, u, v, rook, knight, pagoda, rueppel, zigzag, thue-rook,
// libran, nosquare6, nosquare4, plus pagoda-d0lec, knight-d0lec, rook-d0lec
// for the substitution routes. Matching ignores case, '-' and '_'.
// A modulus of nullopt selects the sequence's natural domain.
SequenceSpec builtin_sequence(std::string_view name, std::optional<Domain> domain = std::nullopt,
                              std::uint64_t seed = 1);
std::vector<std::string> builtin_names();
// Text of the shipped D0LEC definition backing a builtin, if any.
std::optional<std::string> builtin_d0lec_text(std::string_view name);

// Raw digit text: one term per ASCII digit; whitespace ignored; '#' comments.
std::vector<long> parse_digit_text(std::string_view text);

// One square (power 2) or cube (power 3): word[position .. position +
// power*period) consists of `power` equal blocks of length `period`.
struct PowerOccurrence {
  std::size_t position;
  std::size_t period;
  friend bool operator==(const PowerOccurrence&, const PowerOccurrence&) = default;
};

struct PowerReport {
  unsigned power = 2;
  std::size_t min_period = 1;  // only periods >= min_period were reported
  std::vector<PowerOccurrence> occurrences;
  bool power_free() const { return occurrences.empty(); }
};

// Every occurrence of a (power)-th power in `word`, sorted by (period,
// position). With `max_period`, only powers of period > max_period count.
PowerReport power_free_check(std::span<const std::uint32_t> word, unsigned power,
                             std::optional<std::size_t> max_period = std::nullopt);
PowerReport power_free_check(std::string_view word, unsigned power,
                             std::optional<std::size_t> max_period = std::nullopt);
PowerReport power_free_check(const std::vector<DomainValue>& word, unsigned power,
                             std::optional<std::size_t> max_period = std::nullopt);

}  // namespace numwall
