#include "numwall/sequence.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "builtin_data.hpp"

namespace numwall {

Morphism::Morphism(std::string alphabet, std::map<char, std::string> rules)
    : alphabet_(std::move(alphabet)), rules_(std::move(rules)) {
  if (alphabet_.empty()) throw Error(ErrorCode::InvalidArgument, "empty alphabet");
  std::set<char> seen;
  for (char s : alphabet_) {
    if (!seen.insert(s).second) throw Error(ErrorCode::InvalidArgument, std::string("duplicate symbol ") + s);
    auto it = rules_.find(s);
    if (it == rules_.end()) throw Error(ErrorCode::InvalidArgument, std::string("no rule for symbol ") + s);
    if (it->second.empty()) throw Error(ErrorCode::InvalidArgument, std::string("empty image for ") + s);
    if (width_ == 0) width_ = it->second.size();
    if (it->second.size() != width_) {
      throw Error(ErrorCode::InvalidArgument, std::string("non-constant width at symbol ") + s);
    }
  }
  if (rules_.size() != alphabet_.size()) throw Error(ErrorCode::InvalidArgument, "rule for a symbol outside the alphabet");
}

const std::string& Morphism::image(char symbol) const {
  auto it = rules_.find(symbol);
  if (it == rules_.end()) throw Error(ErrorCode::InvalidArgument, std::string("symbol not in alphabet: ") + symbol);
  return it->second;
}

std::string Morphism::apply(std::string_view word) const {
  std::string out;
  out.reserve(word.size() * width_);
  for (char c : word) out += image(c);
  return out;
}

std::string d0l_generate(const Morphism& m, char seed, std::size_t length) {
  const std::string& first = m.image(seed);
  if (first.front() != seed) {
    throw Error(ErrorCode::UnstableSeed, std::string("image of seed ") + seed + " is " + first);
  }
  if (m.width() == 1) return std::string(length, seed);
  std::string word(1, seed);
  while (word.size() < length) word = m.apply(word);
  word.resize(length);
  return word;
}

D0LECSpec::D0LECSpec(Morphism generator, char seed, std::map<char, std::vector<long>> extension, Domain domain)
    : generator_(std::move(generator)), seed_(seed), extension_(std::move(extension)), domain_(domain) {
  if (!generator_.contains(seed_)) throw Error(ErrorCode::InvalidArgument, std::string("seed not in alphabet: ") + seed_);
  if (generator_.image(seed_).front() != seed_) {
    throw Error(ErrorCode::UnstableSeed, std::string("image of seed ") + seed_ + " is " + generator_.image(seed_));
  }
  for (char s : generator_.alphabet()) {
    auto it = extension_.find(s);
    if (it == extension_.end()) throw Error(ErrorCode::InvalidArgument, std::string("no extension for symbol ") + s);
    if (it->second.empty()) throw Error(ErrorCode::InvalidArgument, std::string("empty extension for ") + s);
    if (ext_width_ == 0) ext_width_ = it->second.size();
    if (it->second.size() != ext_width_) {
      throw Error(ErrorCode::InvalidArgument, std::string("non-constant extension width at ") + s);
    }
    if (domain_.is_prime_field()) {
      for (long& v : it->second) {
        long p = domain_.modulus();
        v = ((v % p) + p) % p;
      }
    }
  }
  if (extension_.size() != generator_.alphabet().size()) {
    throw Error(ErrorCode::InvalidArgument, "extension for a symbol outside the alphabet");
  }
}

D0LECSpec D0LECSpec::with_domain(Domain d) const {
  return D0LECSpec(generator_, seed_, extension_, d);
}

std::vector<DomainValue> d0lec_extend(const D0LECSpec& spec, std::size_t start, std::size_t length) {
  std::vector<DomainValue> out;
  if (length == 0) return out;
  const std::size_t w = spec.extension_width();
  const std::size_t last = (start + length - 1) / w;
  const std::string fixed = d0l_generate(spec.generator(), spec.seed(), last + 1);
  out.reserve(length);
  for (std::size_t i = start; i < start + length; ++i) {
    const auto& block = spec.extension().at(fixed[i / w]);
    out.emplace_back(spec.domain(), block[i % w]);
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

long parse_long(std::string_view s, int line) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad integer '" + std::string(s) + "'");
  }
  return v;
}

// "X -> RHS" split into symbol and right-hand side.
std::pair<char, std::string_view> parse_rule(std::string_view body, int line) {
  auto arrow = body.find("->");
  if (arrow == std::string_view::npos) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": expected '->'");
  }
  auto lhs = trim(body.substr(0, arrow));
  auto rhs = trim(body.substr(arrow + 2));
  if (lhs.size() != 1) throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": rule symbol must be one character");
  if (rhs.empty()) throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": empty right-hand side");
  return {lhs.front(), rhs};
}

}  // namespace

D0LECSpec parse_d0lec(std::string_view text) {
  std::string alphabet;
  std::map<char, std::string> gen;
  std::map<char, std::vector<long>> ext;
  std::optional<char> seed;
  std::optional<Domain> domain;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto sp = line.find_first_of(" \t");
    std::string_view key = line.substr(0, sp);
    std::string_view body = sp == std::string_view::npos ? std::string_view() : trim(line.substr(sp));
    if (key == "alphabet") {
      for (auto tok : split_ws(body)) {
        if (tok.size() != 1) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": symbols are single characters");
        alphabet.push_back(tok.front());
      }
    } else if (key == "gen") {
      auto [sym, rhs] = parse_rule(body, line_no);
      std::string img;
      for (char c : rhs) {
        if (!std::isspace(static_cast<unsigned char>(c))) img.push_back(c);
      }
      if (!gen.emplace(sym, img).second) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": duplicate gen rule");
    } else if (key == "ext") {
      auto [sym, rhs] = parse_rule(body, line_no);
      std::vector<long> vals;
      if (rhs.front() == '(') {
        if (rhs.back() != ')') throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": unterminated value list");
        for (auto t : split_ws(rhs.substr(1, rhs.size() - 2))) vals.push_back(parse_long(t, line_no));
      } else {
        for (char c : rhs) {
          if (std::isspace(static_cast<unsigned char>(c))) continue;
          if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": digit expected in '" + std::string(rhs) + "'");
          }
          vals.push_back(c - '0');
        }
      }
      if (!ext.emplace(sym, vals).second) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": duplicate ext rule");
    } else if (key == "seed") {
      if (body.size() != 1) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": seed is one symbol");
      seed = body.front();
    } else if (key == "mod") {
      domain = Domain::parse(body);
    } else {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": unknown directive '" + std::string(key) + "'");
    }
  }
  if (alphabet.empty()) throw Error(ErrorCode::ParseError, "missing alphabet");
  if (!seed) throw Error(ErrorCode::ParseError, "missing seed");
  if (!domain) throw Error(ErrorCode::ParseError, "missing mod");
  return D0LECSpec(Morphism(alphabet, gen), *seed, ext, *domain);
}

std::string format_d0lec(const D0LECSpec& spec) {
  std::ostringstream out;
  const auto& alpha = spec.generator().alphabet();
  out << "alphabet";
  for (char c : alpha) out << ' ' << c;
  out << '\n';
  for (char c : alpha) out << "gen " << c << " -> " << spec.generator().image(c) << '\n';
  out << "seed " << spec.seed() << '\n';
  bool digits = true;
  for (const auto& [sym, vals] : spec.extension()) {
    for (long v : vals) digits = digits && v >= 0 && v <= 9;
  }
  for (char c : alpha) {
    out << "ext " << c << " -> ";
    const auto& vals = spec.extension().at(c);
    if (digits) {
      for (long v : vals) out << v;
    } else {
      out << '(';
      for (std::size_t i = 0; i < vals.size(); ++i) out << (i ? " " : "") << vals[i];
      out << ')';
    }
    out << '\n';
  }
  out << "mod " << spec.domain().to_string() << '\n';
  return out.str();
}

D0LECSpec load_d0lec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_d0lec(ss.str());
}

int rook(long n) {
  if (n == 0) return 0;
  if (n < 0) return 1 - rook(-n);
  auto u = static_cast<unsigned long>(n);
  u >>= std::countr_zero(u);
  return static_cast<int>((u >> 1) & 1u);
}

int knight(long n) { return rook(n + 1) ^ rook(n - 1); }

std::uint32_t pagoda(long n, std::uint32_t p) {
  long d = rook(n + 1) - rook(n - 1);
  long r = d % static_cast<long>(p);
  return static_cast<std::uint32_t>(r < 0 ? r + p : r);
}

int rueppel(long n) {
  if (n < 0) return 0;
  return std::has_single_bit(static_cast<unsigned long>(n) + 1) ? 1 : 0;
}

int thue_morse(long n) {
  if (n < 0) throw Error(ErrorCode::OutOfRange, "Thue-Morse index " + std::to_string(n));
  return std::popcount(static_cast<unsigned long>(n)) & 1;
}

// splitmix64 finalizer applied to seed-scrambled counter values.
std::uint64_t libran(std::uint64_t seed, long n) {
  std::uint64_t z = seed * 0xD1B54A32D192ED03ull + static_cast<std::uint64_t>(n) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

std::string normalize_name(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == '-' || c == '_') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

struct BuiltinInfo {
  const char* name;
  const char* file;  // nullptr for closed forms
  long default_modulus;  // 0 for Z
};

constexpr BuiltinInfo kBuiltins[] = {
    {"thue-morse", "thue-morse.d0lec", 2}, {"u", "u.d0lec", 3},
    {"v", "v.d0lec", 5},                   {"rook", nullptr, 2},
    {"knight", nullptr, 2},                {"pagoda", nullptr, 3},
    {"rueppel", nullptr, 2},               {"zigzag", "zigzag.d0lec", 3},
    {"thue-rook", "thue-rook.d0lec", 2},   {"libran", nullptr, 2},
    {"nosquare6", "nosquare6.d0lec", 2},   {"nosquare4", "nosquare4.d0lec", 2},
    {"pagoda-d0lec", "pagoda-d0lec.d0lec", 3}, {"knight-d0lec", "knight-d0lec.d0lec", 2},
    {"rook-d0lec", "rook-d0lec.d0lec", 2},
};

const BuiltinInfo* find_builtin(std::string_view name) {
  const std::string key = normalize_name(name);
  for (const auto& b : kBuiltins) {
    if (normalize_name(b.name) == key) return &b;
  }
  return nullptr;
}

long closed_form_value(const BuiltinSequence& b, long n) {
  const std::string key = normalize_name(b.name);
  if (key == "rook") return rook(n);
  if (key == "knight") return knight(n);
  if (key == "pagoda") return rook(n + 1) - rook(n - 1);
  if (key == "rueppel") return rueppel(n);
  if (key == "libran") {
    std::uint64_t r = libran(b.seed, n);
    std::uint64_t q = b.domain.is_prime_field() ? b.domain.modulus() : 10;
    return static_cast<long>(r % q);
  }
  throw Error(ErrorCode::UnknownName, "unknown closed-form sequence '" + b.name + "'");
}

}  // namespace

SequenceSpec builtin_sequence(std::string_view name, std::optional<Domain> domain, std::uint64_t seed) {
  const BuiltinInfo* info = find_builtin(name);
  if (info == nullptr) throw Error(ErrorCode::UnknownName, "unknown sequence '" + std::string(name) + "'");
  Domain d = domain ? *domain : (info->default_modulus == 0 ? Domain::integers() : Domain::prime_field(info->default_modulus));
  if (info->file != nullptr) {
    auto text = detail::builtin_data(info->file);
    if (!text) throw Error(ErrorCode::InternalInconsistency, std::string("missing builtin data ") + info->file);
    return SequenceSpec(parse_d0lec(*text).with_domain(d));
  }
  return SequenceSpec(BuiltinSequence{info->name, d, seed});
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& b : kBuiltins) out.emplace_back(b.name);
  return out;
}

std::optional<std::string> builtin_d0lec_text(std::string_view name) {
  const BuiltinInfo* info = find_builtin(name);
  if (info == nullptr || info->file == nullptr) return std::nullopt;
  auto text = detail::builtin_data(info->file);
  if (!text) return std::nullopt;
  return std::string(*text);
}

std::vector<long> parse_digit_text(std::string_view text) {
  std::vector<long> out;
  bool comment = false;
  for (char c : text) {
    if (c == '\n') {
      comment = false;
      continue;
    }
    if (comment) continue;
    if (c == '#') {
      comment = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      out.push_back(c - '0');
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      throw Error(ErrorCode::ParseError, std::string("unexpected character '") + c + "' in digit text");
    }
  }
  return out;
}

SequenceSpec::SequenceSpec(Source source) : source_(std::move(source)) {
  if (auto* p = std::get_if<PeriodicWord>(&source_)) {
    if (p->digits.empty()) throw Error(ErrorCode::InvalidArgument, "empty periodic word");
    for (const auto& v : p->digits) {
      if (!(v.domain() == p->digits.front().domain())) throw Error(ErrorCode::DomainMismatch, "mixed domains in periodic word");
    }
  } else if (auto* s = std::get_if<FiniteSegment>(&source_)) {
    if (s->digits.empty()) throw Error(ErrorCode::InvalidArgument, "empty segment");
  } else if (auto* b = std::get_if<BuiltinSequence>(&source_)) {
    const BuiltinInfo* info = find_builtin(b->name);
    if (info == nullptr || info->file != nullptr) {
      throw Error(ErrorCode::UnknownName, "not a closed-form sequence: '" + b->name + "'");
    }
    b->name = info->name;
  }
}

SequenceSpec SequenceSpec::periodic(std::vector<DomainValue> digits) {
  return SequenceSpec(PeriodicWord{std::move(digits)});
}

SequenceSpec SequenceSpec::periodic(std::string_view digit_text, Domain domain) {
  std::vector<DomainValue> digits;
  for (long v : parse_digit_text(digit_text)) digits.emplace_back(domain, v);
  return periodic(std::move(digits));
}

SequenceSpec SequenceSpec::segment(std::vector<DomainValue> digits, long start) {
  return SequenceSpec(FiniteSegment{std::move(digits), start});
}

Domain SequenceSpec::domain() const {
  return std::visit(
      [](const auto& s) -> Domain {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BuiltinSequence>) return s.domain;
        else if constexpr (std::is_same_v<T, D0LECSpec>) return s.domain();
        else return s.digits.front().domain();
      },
      source_);
}

std::size_t SequenceSpec::period() const {
  if (auto* p = std::get_if<PeriodicWord>(&source_)) return p->digits.size();
  return 0;
}

std::optional<long> SequenceSpec::first_index() const {
  if (auto* s = std::get_if<FiniteSegment>(&source_)) return s->start;
  if (std::holds_alternative<D0LECSpec>(source_)) return 0;
  if (auto* b = std::get_if<BuiltinSequence>(&source_)) {
    (void)b;
    return std::nullopt;
  }
  return std::nullopt;
}

std::optional<long> SequenceSpec::end_index() const {
  if (auto* s = std::get_if<FiniteSegment>(&source_)) return s->start + static_cast<long>(s->digits.size());
  return std::nullopt;
}

std::vector<DomainValue> SequenceSpec::terms(long start, std::size_t count) const {
  const long end = start + static_cast<long>(count);
  if (auto lo = first_index(); lo && start < *lo && count > 0) {
    throw Error(ErrorCode::OutOfRange, "term " + std::to_string(start) + " precedes index " + std::to_string(*lo));
  }
  if (auto hi = end_index(); hi && end > *hi) {
    throw Error(ErrorCode::OutOfRange, "term " + std::to_string(end - 1) + " beyond index " + std::to_string(*hi - 1));
  }
  std::vector<DomainValue> out;
  out.reserve(count);
  if (auto* p = std::get_if<PeriodicWord>(&source_)) {
    const long t = static_cast<long>(p->digits.size());
    for (long n = start; n < end; ++n) out.push_back(p->digits[static_cast<std::size_t>(((n % t) + t) % t)]);
  } else if (auto* s = std::get_if<FiniteSegment>(&source_)) {
    for (long n = start; n < end; ++n) out.push_back(s->digits[static_cast<std::size_t>(n - s->start)]);
  } else if (auto* d = std::get_if<D0LECSpec>(&source_)) {
    out = d0lec_extend(*d, static_cast<std::size_t>(start), count);
  } else {
    const auto& b = std::get<BuiltinSequence>(source_);
    for (long n = start; n < end; ++n) out.emplace_back(b.domain, closed_form_value(b, n));
  }
  return out;
}

std::string SequenceSpec::describe() const {
  std::ostringstream out;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BuiltinSequence>) {
          out << "builtin:" << s.name;
          if (s.name == "libran") out << " seed=" << s.seed;
        } else if constexpr (std::is_same_v<T, D0LECSpec>) {
          out << "d0lec:seed=" << s.seed() << ",symbols=" << s.generator().alphabet();
        } else if constexpr (std::is_same_v<T, PeriodicWord>) {
          out << "periodic:";
          for (const auto& v : s.digits) out << (s.digits.front().domain().is_integers() ? " " : "") << v.to_string();
        } else {
          out << "segment:start=" << s.start << ",length=" << s.digits.size();
        }
      },
      source_);
  out << " mod " << domain().to_string();
  return out.str();
}

PowerReport power_free_check(std::span<const std::uint32_t> w, unsigned power, std::optional<std::size_t> max_period) {
  if (power < 2) throw Error(ErrorCode::InvalidArgument, "power must be at least 2");
  PowerReport report;
  report.power = power;
  report.min_period = max_period ? *max_period + 1 : 1;
  const std::size_t n = w.size();
  for (std::size_t l = report.min_period; l * power <= n; ++l) {
    // Maximal runs of positions i with w[i] == w[i + l]; a power needs a run
    // of (power - 1) * l, which always covers a multiple of l.
    const std::size_t need = (power - 1) * l;
    std::size_t scanned = 0;
    for (std::size_t j = 0; j + l < n; j += l) {
      if (j < scanned || w[j] != w[j + l]) continue;
      std::size_t a = j;
      while (a > 0 && w[a - 1] == w[a - 1 + l]) --a;
      std::size_t b = j;
      while (b + 1 + l < n && w[b + 1] == w[b + 1 + l]) ++b;
      scanned = b + 1;
      if (b - a + 1 >= need) {
        for (std::size_t i = a; i + need <= b + 1; ++i) report.occurrences.push_back({i, l});
      }
    }
  }
  return report;
}

PowerReport power_free_check(std::string_view word, unsigned power, std::optional<std::size_t> max_period) {
  std::vector<std::uint32_t> w(word.begin(), word.end());
  return power_free_check(std::span<const std::uint32_t>(w), power, max_period);
}

PowerReport power_free_check(const std::vector<DomainValue>& word, unsigned power, std::optional<std::size_t> max_period) {
  std::vector<std::uint32_t> w;
  w.reserve(word.size());
  for (const auto& v : word) {
    if (!v.value().fits_sint_p()) throw Error(ErrorCode::InvalidArgument, "symbol too large for power scan");
    w.push_back(static_cast<std::uint32_t>(v.value().get_si()));
  }
  return power_free_check(std::span<const std::uint32_t>(w), power, max_period);
}

}  // namespace numwall
