#include "numwall/analysis.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <sstream>

#include "builtin_data.hpp"

namespace numwall {

namespace {

mpq_class power_q(std::uint64_t q, long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), q, static_cast<unsigned long>(e));
  return mpq_class(r);
}

}  // namespace

mpq_class expected_window_density(std::uint64_t q, long g) {
  if (q < 2) throw Error(ErrorCode::InvalidArgument, "field size must be >= 2");
  if (g < 1) throw Error(ErrorCode::InvalidArgument, "window size must be >= 1");
  mpq_class c = power_q(q - 1, 3) / (mpq_class(q + 1) * power_q(q, g + 2));
  c.canonicalize();
  return c;
}

namespace {

// Density of all windows with g > last.
mpq_class tail_window_density(std::uint64_t q, long last) {
  mpq_class c = power_q(q - 1, 2) / (mpq_class(q + 1) * power_q(q, last + 2));
  c.canonicalize();
  return c;
}

}  // namespace

bool Region::holds(long m, long n) const {
  if (m < row_begin || m >= row_end || n < col_begin || n >= col_end) return false;
  if (diamond_centre && std::labs(n - *diamond_centre) > m) return false;
  return true;
}

Region whole_wall(const Wall& wall) {
  Region r;
  r.row_begin = 0;
  r.row_end = wall.max_row() + 1;
  r.col_begin = wall.row_begin(-2);
  r.col_end = wall.row_end(-2);
  return r;
}

long WindowCensus::windows() const {
  long s = 0;
  for (const auto& [g, c] : counts) s += c;
  return s;
}

namespace {

template <class F>
void for_each_cell(const Wall& wall, const Region& region, F&& f) {
  const long m_lo = std::max(region.row_begin, 0L);
  const long m_hi = std::min(region.row_end, wall.max_row() + 1);
  for (long m = m_lo; m < m_hi; ++m) {
    const long lo = std::max(region.col_begin, wall.row_begin(m));
    const long hi = std::min(region.col_end, wall.row_end(m));
    for (long n = lo; n < hi; ++n) {
      if (region.holds(m, n)) f(m, n);
    }
  }
}

}  // namespace

WindowCensus window_census(const Wall& wall, const Region& region) {
  WindowCensus c;
  c.region = region;
  c.terminal_zero_row = wall.terminal_zero_row();
  for_each_cell(wall, region, [&](long, long) { ++c.total_entries; });
  for (const Window& w : wall.windows()) {
    if (!region.holds(w.m0, w.n0) || !wall.contains(w.m0, w.n0)) continue;
    if (w.truncated) ++c.truncated;
    else ++c.counts[w.g];
  }
  return c;
}

double chi_square_critical_99(int df) {
  static const std::vector<double> table = [] {
    std::vector<double> t;
    auto text = detail::builtin_data("chi2_q99.txt");
    if (!text) throw Error(ErrorCode::InternalInconsistency, "chi-square table missing");
    std::istringstream in{std::string(*text)};
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      int k = 0;
      double v = 0;
      ls >> k >> v;
      if (k != static_cast<int>(t.size()) + 1) throw Error(ErrorCode::InternalInconsistency, "chi-square table out of order");
      t.push_back(v);
    }
    return t;
  }();
  if (df < 1 || df > static_cast<int>(table.size())) {
    throw Error(ErrorCode::OutOfRange, "no chi-square quantile for " + std::to_string(df) + " degrees of freedom");
  }
  return table[static_cast<std::size_t>(df - 1)];
}

ChiSquareResult chi_square_test(const WindowCensus& census, std::uint64_t q) {
  const double n = static_cast<double>(census.total_entries);
  long last = 0;
  while (n * expected_window_density(q, last + 1).get_d() >= 5.0) ++last;
  if (last == 0) throw Error(ErrorCode::TooSmallRegion, "no window size reaches expected count 5");

  ChiSquareResult r;
  for (long g = 1; g <= last; ++g) {
    auto it = census.counts.find(g);
    r.bins.push_back({g, g, it == census.counts.end() ? 0 : it->second, n * expected_window_density(q, g).get_d()});
  }
  ChiSquareBin tail{last + 1, -1, 0, n * tail_window_density(q, last).get_d()};
  for (const auto& [g, c] : census.counts) {
    if (g > last) tail.observed += c;
  }
  if (tail.expected >= 5.0) {
    r.bins.push_back(tail);
  } else {
    r.bins.back().g_last = -1;
    r.bins.back().observed += tail.observed;
    r.bins.back().expected += tail.expected;
  }
  if (r.bins.size() < 2) throw Error(ErrorCode::TooSmallRegion, "fewer than two chi-square bins");
  for (const auto& b : r.bins) r.statistic += (b.observed - b.expected) * (b.observed - b.expected) / b.expected;
  r.degrees_of_freedom = static_cast<int>(r.bins.size()) - 1;
  r.critical = chi_square_critical_99(r.degrees_of_freedom);
  r.pass = r.statistic < r.critical;
  return r;
}

DeficiencyReport deficiency(const Wall& wall, long d) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "deficiency bound must be >= 1");
  DeficiencyReport r;
  r.d = d;
  long depth = wall.max_row();
  bool failed = false;
  if (wall.periodic()) {
    r.period = wall.width();
    r.order = wall.terminal_zero_row();
    if (r.order) {
      depth = std::min(depth, *r.order);
      failed = true;
    }
  }
  for (const Window& w : wall.windows()) {
    if (w.g >= d) {
      depth = std::min(depth, w.m0 - 1);
      failed = true;
    }
  }
  r.depth = depth;
  r.unbounded = !failed;
  return r;
}

DeficiencyReport deficiency_of_period(const std::vector<DomainValue>& word, long d) {
  const auto seq = SequenceSpec::periodic(word);
  // The wall of a period-t word vanishes by row t.
  return deficiency(wall_frame(seq, static_cast<long>(word.size()) + 1), d);
}

std::vector<std::uint32_t> canonical_word(const std::vector<std::uint32_t>& word, std::uint32_t q) {
  const std::size_t t = word.size();
  std::vector<std::uint32_t> best = word;
  std::vector<std::uint32_t> cand(t);
  for (std::uint32_t c = 1; c < q; ++c) {
    for (int rev = 0; rev < 2; ++rev) {
      for (std::size_t s = 0; s < t; ++s) {
        for (std::size_t i = 0; i < t; ++i) {
          const std::size_t j = rev ? (s + t - i) % t : (s + i) % t;
          cand[i] = static_cast<std::uint32_t>(std::uint64_t{word[j]} * c % q);
        }
        if (cand < best) best = cand;
      }
    }
  }
  return best;
}

namespace {

bool is_primitive(const std::vector<std::uint32_t>& w) {
  const std::size_t t = w.size();
  for (std::size_t p = 1; p < t; ++p) {
    if (t % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < t && periodic; ++i) periodic = w[i] == w[i - p];
    if (periodic) return false;
  }
  return true;
}

class DepthSearch {
 public:
  DepthSearch(std::uint64_t q, long d, const SearchLimits& limits)
      : q_(static_cast<std::uint32_t>(q)), d_(d), limits_(limits), domain_(Domain::prime_field(q)) {}

  SearchResult run() {
    for (std::size_t t = 1; t <= limits_.max_period; ++t) {
      if (static_cast<long>(t) > result_.report.depth || result_.word.empty()) {
        word_.assign(t, 0);
        extend(0);
      }
      result_.periods_searched = t;
    }
    result_.nodes = nodes_;
    return result_;
  }

 private:
  std::vector<DomainValue> lift(const std::vector<std::uint32_t>& w) const {
    std::vector<DomainValue> v;
    v.reserve(w.size());
    for (auto x : w) v.emplace_back(domain_, static_cast<long>(x));
    return v;
  }

  // Depth cap implied by the triangle of word_[0..k).
  long prefix_cap(std::size_t k) const {
    if (k < 3) return LONG_MAX;
    const Wall w = wall_frame(SequenceSpec::segment(lift(std::vector<std::uint32_t>(word_.begin(), word_.begin() + static_cast<long>(k)))),
                              static_cast<long>(k));
    long cap = LONG_MAX;
    for (const Window& win : w.windows()) {
      if (win.g >= d_) cap = std::min(cap, win.m0 - 1);
    }
    return cap;
  }

  void extend(std::size_t k) {
    if (++nodes_ > limits_.max_nodes) {
      result_.nodes = nodes_;
      throw EffortExhaustedError(result_);
    }
    const bool have_best = !result_.word.empty();
    if (have_best && k >= 3 && prefix_cap(k) <= result_.report.depth) return;
    if (k == word_.size()) {
      leaf();
      return;
    }
    for (std::uint32_t v = 0; v < q_; ++v) {
      word_[k] = v;
      extend(k + 1);
    }
  }

  void leaf() {
    if (!is_primitive(word_) || canonical_word(word_, q_) != word_) return;
    const DeficiencyReport rep = deficiency_of_period(lift(word_), d_);
    if (result_.word.empty() || rep.depth > result_.report.depth) {
      result_.word = lift(word_);
      result_.report = rep;
    }
  }

  std::uint32_t q_;
  long d_;
  SearchLimits limits_;
  Domain domain_;
  std::vector<std::uint32_t> word_;
  std::uint64_t nodes_ = 0;
  SearchResult result_;
};

}  // namespace

SearchResult search_max_depth(std::uint64_t q, long d, const SearchLimits& limits) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "deficiency bound must be >= 1");
  if (!is_prime(q)) throw Error(ErrorCode::NotPrime, std::to_string(q) + " is not prime");
  if (limits.max_period < 1) throw Error(ErrorCode::InvalidArgument, "max_period must be >= 1");
  return DepthSearch(q, d, limits).run();
}

std::optional<int> two_adic_valuation(long n) {
  if (n == 0) return std::nullopt;
  int v = 0;
  unsigned long u = n < 0 ? 0UL - static_cast<unsigned long>(n) : static_cast<unsigned long>(n);
  while ((u & 1UL) == 0) {
    u >>= 1;
    ++v;
  }
  return v;
}

std::vector<std::pair<long, long>> zero_location_check(const Wall& wall, long max_row) {
  std::vector<std::pair<long, long>> bad;
  const long top = std::min(max_row, wall.max_row());
  for (long m = 0; m <= top; ++m) {
    const int vm = *two_adic_valuation(m + 2);
    for (long n = wall.row_begin(m); n < wall.row_end(m); ++n) {
      if (!wall.is_zero(m, n)) continue;
      const auto vn = two_adic_valuation(n);
      if (!vn || vm <= *vn) bad.emplace_back(m, n);
    }
  }
  return bad;
}

mpq_class zero_density_estimate(const Wall& wall, const Region& region) {
  long zeros = 0, cells = 0;
  for_each_cell(wall, region, [&](long m, long n) {
    ++cells;
    zeros += wall.is_zero(m, n) ? 1 : 0;
  });
  if (cells == 0) throw Error(ErrorCode::TooSmallRegion, "region holds no wall entries");
  mpq_class r(zeros, cells);
  r.canonicalize();
  return r;
}

KnightPatternReport knight_pattern_check(const Wall& wall, const Region& region) {
  KnightPatternReport r;
  for_each_cell(wall, region, [&](long m, long n) {
    if (!wall.is_zero(m, n)) return;
    ++r.zeros;
    const Window* w = wall.window_at(m, n);
    if (w == nullptr || w->g > 1) ++r.large_windows;
    // Each unordered pair once: partners later in row-major order.
    for (long dm = 0; dm <= 2; ++dm) {
      for (long dn = -2; dn <= 2; ++dn) {
        if (dm == 0 && dn <= 0) continue;
        const long a = m + dm, b = n + dn;
        if (!region.holds(a, b) || !wall.contains(a, b) || !wall.is_zero(a, b)) continue;
        const bool knight = (dm == 1 && std::labs(dn) == 2) || (dm == 2 && std::labs(dn) == 1);
        if (!knight) ++r.close_pairs;
      }
    }
  });
  return r;
}

FrameLawReport check_frame_laws(const Wall& wall) {
  FrameLawReport r;
  const Domain& dom = wall.domain();
  const Ratio one(dom, mpq_class(1));
  const Ratio minus_one(dom, mpq_class(-1));
  for (const Window& w : wall.windows()) {
    if (w.truncated) continue;
    const WindowFrames f = window_frames(wall, w);
    bool complete = true;
    for (long k = 0; k <= w.g + 1; ++k) {
      const auto i = static_cast<std::size_t>(k);
      complete = complete && f.a[i] && f.b[i] && f.c[i] && f.d[i];
    }
    if (!complete) continue;
    ++r.windows_checked;
    auto where = [&] { return "window (" + std::to_string(w.m0) + "," + std::to_string(w.n0) + ") g=" + std::to_string(w.g); };

    const FrameRatios fr = window_ratios(f);
    const Ratio sign_g = w.g % 2 == 0 ? one : minus_one;
    if (!(fr.p * fr.t / (fr.q * fr.r) == sign_g)) {
      ++r.ratio_law_failures;
      r.messages.push_back(where() + ": PT/QR");
    }
    auto geometric = [&](const std::vector<std::optional<DomainValue>>& e, const Ratio& ratio) {
      for (std::size_t k = 0; k + 1 < e.size(); ++k) {
        if (!(Ratio::of(*e[k + 1], *e[k]) == ratio)) return false;
      }
      return true;
    };
    if (!geometric(f.a, fr.p) || !geometric(f.b, fr.q) || !geometric(f.c, fr.r) || !geometric(f.d, fr.t)) {
      ++r.geometric_failures;
      r.messages.push_back(where() + ": inner frame not geometric");
    }
    for (long k = 0; k <= w.g + 1; ++k) {
      const auto i = static_cast<std::size_t>(k);
      const Ratio lhs = Ratio::of(*f.a[i] * *f.d[i], *f.b[i] * *f.c[i]);
      if (!(lhs == ((w.g * k) % 2 == 0 ? one : minus_one))) {
        ++r.product_law_failures;
        r.messages.push_back(where() + ": product law at k=" + std::to_string(k));
      }
    }
  }
  return r;
}

}  // namespace numwall
