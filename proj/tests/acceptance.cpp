// Acceptance run: one PASS/FAIL line per criterion, with its runtime
// against the pinned budget. Exit status 1 when any criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "numwall/analysis.hpp"
#include "numwall/render.hpp"
#include "numwall/sequence.hpp"
#include "numwall/tiling.hpp"
#include "numwall/wall.hpp"

using namespace numwall;

namespace {

// Pinned tolerances.
constexpr double kDensityTolerance = 0.01;  // absolute, on zero densities
constexpr double kSigmaBound = 3.0;         // per-bin census deviation
constexpr std::uint64_t kRandomSeed = 20240611;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Outcome()> run;
};

void require(Outcome& o, bool ok, const std::string& what) {
  if (!ok) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
  }
}

void note(Outcome& o, const std::string& what) { o.detail += (o.detail.empty() ? "" : "; ") + what; }

std::vector<DomainValue> word_of(std::string_view digits, std::uint64_t p) {
  auto s = SequenceSpec::periodic(digits, Domain::prime_field(p));
  return s.terms(0, s.period());
}

std::vector<std::uint32_t> residues(const std::vector<DomainValue>& v) {
  std::vector<std::uint32_t> out;
  for (const auto& x : v) out.push_back(static_cast<std::uint32_t>(x.value().get_ui()));
  return out;
}

std::string digits(const std::vector<DomainValue>& v) {
  std::string s;
  for (const auto& x : v) s += x.to_string();
  return s;
}

// Walls from criterion 1, reused by criterion 2.
std::vector<Wall>& oracle_walls() {
  static std::vector<Wall> walls;
  return walls;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(kRandomSeed);
  const std::uint64_t primes[] = {2, 3, 5, 7};
  long entries = 0, mismatches = 0;
  auto compare = [&](const SequenceSpec& seq, long rows) {
    Wall w = wall_frame(seq, rows);
    for (long m = 0; m <= w.max_row(); ++m) {
      for (long n = w.row_begin(m); n < w.row_end(m); ++n) {
        ++entries;
        if (!(w.at(m, n) == hankel_oracle(seq, m, n))) ++mismatches;
      }
    }
    oracle_walls().push_back(std::move(w));
  };
  for (int i = 0; i < 50; ++i) {
    const std::uint64_t p = primes[i % 4];
    const std::size_t t = 1 + rng() % 16;
    std::vector<DomainValue> w;
    for (std::size_t k = 0; k < t; ++k) w.emplace_back(Domain::prime_field(p), static_cast<long>(rng() % p));
    compare(SequenceSpec::periodic(std::move(w)), 24);
  }
  for (int i = 0; i < 10; ++i) {
    const std::size_t t = 1 + rng() % 16;
    std::vector<DomainValue> w;
    for (std::size_t k = 0; k < t; ++k) w.emplace_back(Domain::integers(), static_cast<long>(rng() % 7) - 3);
    compare(SequenceSpec::periodic(std::move(w)), 12);
  }
  note(o, "60 walls, " + std::to_string(entries) + " entries");
  require(o, mismatches == 0, std::to_string(mismatches) + " entries differ from the oracle");
  return o;
}

Outcome frame_laws() {
  Outcome o;
  long windows = 0, failures = 0;
  auto audit = [&](const Wall& w) {
    FrameLawReport r = check_frame_laws(w);
    windows += r.windows_checked;
    failures += r.ratio_law_failures + r.product_law_failures + r.geometric_failures;
    for (const auto& m : r.messages) note(o, m);
  };
  for (const auto& w : oracle_walls()) audit(w);
  const long random_windows = windows;
  audit(wall_frame(builtin_sequence("rueppel"), 128, 0, 257));
  note(o, std::to_string(random_windows) + " windows from criterion 1, " + std::to_string(windows - random_windows) +
              " from Rueppel");
  require(o, random_windows > 0 && windows > random_windows, "no windows audited");
  require(o, failures == 0, std::to_string(failures) + " frame-law failures");
  return o;
}

Outcome deficiency_table() {
  Outcome o;
  struct Row {
    long d;
    const char* period;
    long depth;
  };
  const Row rows[] = {
      {1, "1", 1},
      {2, "111010", 5},
      {3, "11110101001111010010", 19},
      {4, "000110010001101100110001101100111011000110010011001110010011", 56},
  };
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& row : rows) {
    auto rep = deficiency_of_period(word_of(row.period, 2), row.d);
    const long t = static_cast<long>(std::string_view(row.period).size());
    std::ostringstream ss;
    ss << "(" << row.d << "," << rep.depth << "," << rep.order.value_or(-1) << "," << t << ")";
    note(o, ss.str());
    require(o, rep.depth == row.depth && rep.order == row.depth && rep.period == static_cast<std::size_t>(t),
            "table row d=" + std::to_string(row.d));
  }
  const double verify_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  require(o, verify_s < 10, "verifications over 10 s");

  const struct {
    long d;
    std::size_t max_period;
    long depth;
    const char* tabulated_word;
  } searches[] = {{1, 16, 1, "1"}, {2, 16, 5, "111010"}, {3, 24, 19, "11110101001111010010"}};
  double small_s = 0;
  for (const auto& s : searches) {
    SearchLimits lim;
    lim.max_period = s.max_period;
    const auto t1 = std::chrono::steady_clock::now();
    SearchResult r = search_max_depth(2, s.d, lim);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
    if (s.d <= 2) small_s += secs;
    // Independent check of the returned word.
    Wall w = wall_frame(SequenceSpec::periodic(r.word), static_cast<long>(r.word.size()) + 1);
    const long independent = deficiency(w, s.d).depth;
    const bool same_orbit = canonical_word(residues(r.word), 2) == canonical_word(residues(word_of(s.tabulated_word, 2)), 2);
    std::ostringstream ss;
    ss << "search d=" << s.d << " -> [" << digits(r.word) << "] depth " << r.report.depth << " t=" << r.word.size()
       << (same_orbit ? " (tabulated word's orbit)" : " (another optimal orbit)") << std::fixed << std::setprecision(1)
       << " " << secs << " s";
    note(o, ss.str());
    require(o, r.report.depth == s.depth && independent == s.depth, "search depth for d=" + std::to_string(s.d));
    require(o, r.word.size() == std::string_view(s.tabulated_word).size(), "search period for d=" + std::to_string(s.d));
  }
  require(o, small_s < 60, "d<=2 searches over 1 min");
  return o;
}

Outcome pagoda_deficiency() {
  Outcome o;
  const struct {
    std::uint64_t p;
    long rows;
  } cases[] = {{3, 512}, {7, 256}, {11, 128}};
  for (const auto& c : cases) {
    Wall w = wall_frame(builtin_sequence("pagoda", Domain::prime_field(c.p)), c.rows, 0, 4096);
    long larger = 0, count = 0;
    for (const auto& x : w.windows()) {
      ++count;
      if (x.g != 1) ++larger;
    }
    note(o, "mod " + std::to_string(c.p) + " rows 0.." + std::to_string(c.rows) + ": " + std::to_string(count) +
                " windows, " + std::to_string(larger) + " larger than 1");
    require(o, larger == 0 && count > 0, "mod " + std::to_string(c.p));
  }
  return o;
}

Outcome mod83_specimen() {
  Outcome o;
  Wall w = wall_frame(builtin_sequence("pagoda", Domain::prime_field(83)), 140, 0, 700);
  bool size3 = false, size2 = false;
  long largest = 0;
  for (const auto& x : w.windows()) {
    largest = std::max(largest, x.g);
    if (x.g >= 2) size2 = true;
    if (x.g == 3 && std::labs(x.m0 - 105) <= 1 && std::labs(x.n0 - 188) <= 1) size3 = true;
  }
  note(o, std::to_string(w.windows().size()) + " windows through row 140, largest size " + std::to_string(largest));
  require(o, size3, "no size-3 window within offset 1 of (105,188)");
  require(o, size2, "no window of size 2 or more");
  // Cross-check the reported cell against the determinant oracle.
  const DomainValue direct = hankel_oracle(builtin_sequence("pagoda", Domain::prime_field(83)), 105, 188);
  note(o, "oracle S(105,188) = " + direct.to_string());
  return o;
}

Outcome zero_location() {
  Outcome o;
  Wall w = wall_frame(builtin_sequence("pagoda"), 255, -512, 1025);
  auto v = zero_location_check(w, 255);
  long odd = 0, col0 = 0, zeros = 0;
  for (long m = 0; m <= 255; ++m) {
    for (long n = w.row_begin(m); n < w.row_end(m); ++n) {
      if (!w.is_zero(m, n)) continue;
      ++zeros;
      if (m % 2 != 0) ++odd;
      if (n == 0) ++col0;
    }
  }
  for (long m = -1; m < 0; ++m) col0 += w.is_zero(m, 0) ? 1 : 0;
  note(o, std::to_string(zeros) + " zeros");
  require(o, v.empty(), std::to_string(v.size()) + " valuation violations");
  require(o, odd == 0, "zeros on odd rows");
  require(o, col0 == 0, "zeros in column 0");
  return o;
}

Outcome zero_density() {
  Outcome o;
  MarkovDensity md = markov_zero_density();
  note(o, "tiling density " + md.density.get_str());
  require(o, md.density == mpq_class(3, 20), "tiling density is not 3/20");

  Wall p = wall_frame(builtin_sequence("pagoda"), 1023, -1025, 2051);
  mpq_class pd = zero_density_estimate(p, whole_wall(p));
  std::ostringstream ps;
  ps << std::fixed << std::setprecision(5) << "Pagoda rows 0..1023 " << pd.get_d();
  note(o, ps.str());
  require(o, std::fabs(pd.get_d() - 0.15) <= kDensityTolerance, "Pagoda empirical density");

  Wall k = wall_frame(builtin_sequence("knight"), 1024, -1024, 2049);
  Region diamond{0, 1025, -1024, 1025, 0};
  mpq_class kd = zero_density_estimate(k, diamond);
  KnightPatternReport kr = knight_pattern_check(k, diamond);
  std::ostringstream ks;
  ks << std::fixed << std::setprecision(5) << "Knight diamond " << kd.get_d() << ", " << kr.zeros << " zeros, "
     << kr.close_pairs << " non-knight pairs";
  note(o, ks.str());
  require(o, std::fabs(kd.get_d() - 0.2) <= kDensityTolerance, "Knight density");
  require(o, kr.ok(), "Knight zeros not a knight's move apart");
  return o;
}

Outcome tiling_verification() {
  Outcome o;
  TilingAudit a = audit_tiles(pagoda_tiles());
  require(o, a.closure && a.symmetry, "closure/symmetry audit");
  require(o, a.checksum, "checksum audit");
  TilingReport r = verify_tiling(128);
  note(o, "radius 128, " + std::to_string(r.levels) + " levels, " + std::to_string(r.compared) + " entries, " +
              std::to_string(r.mismatches) + " mismatches");
  require(o, r.mismatches == 0, "tiling mismatches");
  IsolatedZeroAudit iz = isolated_zero_audit();
  std::vector<int> expected_isolated;
  for (int id = 3; id <= 13; ++id) expected_isolated.push_back(id);
  require(o, iz.flagged == std::vector<int>({1, 2}), "flagged tiles are not 1,2");
  require(o, iz.isolated == expected_isolated, "tiles 3..13 not all isolated");
  require(o, iz.ok(), "adjacent zeros across tile boundaries");
  note(o, "flagged 1,2; cross-boundary pairs " + std::to_string(iz.cross_boundary_pairs));
  return o;
}

Outcome window_statistics() {
  Outcome o;
  const long r = 512;
  auto census = [&](const char* name, std::uint64_t q) {
    Wall w = wall_frame(builtin_sequence(name, Domain::prime_field(q), 1), r - 1, 0, 3 * r);
    return window_census(w, Region{0, r, r, 2 * r, std::nullopt});
  };
  for (std::uint64_t q : {2ull, 3ull}) {
    WindowCensus c = census("libran", q);
    double worst = 0;
    for (long g = 1; g <= 5; ++g) {
      const double e = expected_window_density(q, g).get_d() * static_cast<double>(c.total_entries);
      worst = std::max(worst, std::fabs(static_cast<double>(c.counts[g]) - e) / std::sqrt(e));
    }
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(2) << "Libran mod " << q << " worst bin " << worst << " sigma";
    note(o, ss.str());
    require(o, worst <= kSigmaBound, "Libran mod " + std::to_string(q) + " bins");
  }
  ChiSquareResult tr = chi_square_test(census("thue-rook", 2), 2);
  Wall ru = wall_frame(builtin_sequence("rueppel"), 255, 0, 768);
  ChiSquareResult rr = chi_square_test(window_census(ru, Region{0, 256, 256, 512, std::nullopt}), 2);
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(1) << "ThueRook chi2 " << tr.statistic << " (crit " << tr.critical << "), Rueppel chi2 "
     << rr.statistic << " (crit " << rr.critical << ")";
  note(o, ss.str());
  require(o, tr.pass, "ThueRook chi-square");
  require(o, !rr.pass, "Rueppel passed chi-square");
  return o;
}

Outcome power_freeness() {
  Outcome o;
  constexpr std::size_t kTerms = 100000;
  const struct {
    const char* name;
    unsigned power;
    std::optional<std::size_t> max_period;
  } cases[] = {{"v", 2, std::nullopt}, {"u", 2, std::nullopt}, {"thue-morse", 3, std::nullopt}, {"nosquare6", 2, 3}, {"nosquare4", 2, 2}};
  for (const auto& c : cases) {
    auto terms = residues(builtin_sequence(c.name).terms(0, kTerms));
    PowerReport r = power_free_check(terms, c.power, c.max_period);
    require(o, r.power_free(), std::string(c.name) + " has " + std::to_string(r.occurrences.size()) + " powers");
  }
  // A square's length is twice its period: NoSquare6 keeps periods <= 3,
  // NoSquare4 periods <= 2, and both bounds are attained.
  for (const auto& [name, period] : {std::pair{"nosquare6", 3ul}, std::pair{"nosquare4", 2ul}}) {
    auto terms = residues(builtin_sequence(name).terms(0, kTerms));
    require(o, !power_free_check(terms, 2, period - 1).power_free(), std::string(name) + " bound not attained");
  }
  note(o, "5 sequences over 100000 terms");
  return o;
}

Outcome round_trip() {
  Outcome o;
  std::vector<Wall> walls;
  walls.push_back(wall_frame(builtin_sequence("pagoda", Domain::prime_field(7)), 60, -30, 151));
  walls.push_back(wall_frame(builtin_sequence("rueppel"), 64, 0, 129));
  walls.push_back(wall_frame(SequenceSpec::periodic("1122", Domain::prime_field(3)), 6));
  walls.push_back(wall_frame(builtin_sequence("thue-rook", Domain::integers()), 12, 0, 30));
  for (const auto& w : walls) {
    const std::string text = format_wall(w);
    Wall back = parse_wall(text);
    require(o, back.same_grid(w) && back.windows() == w.windows(), "wall re-read differs");
    require(o, format_wall(back) == text, "wall re-dump differs");
  }
  long specs = 0;
  for (const auto& name : builtin_names()) {
    auto text = builtin_d0lec_text(name);
    if (!text) continue;
    ++specs;
    D0LECSpec spec = parse_d0lec(*text);
    const std::string canon = format_d0lec(spec);
    D0LECSpec back = parse_d0lec(canon);
    require(o, back == spec, name + " spec re-read differs");
    require(o, format_d0lec(back) == canon, name + " spec re-dump differs");
    require(o, d0lec_extend(back, 0, 256) == d0lec_extend(spec, 0, 256), name + " terms differ");
  }
  note(o, std::to_string(walls.size()) + " wall dumps, " + std::to_string(specs) + " D0LEC specs");
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence", 60, oracle_equivalence},
      {2, "frame laws", 60, frame_laws},
      {3, "deficiency table and search", 120, deficiency_table},
      {4, "Pagoda deficiency mod 3, 7, 11", 120, pagoda_deficiency},
      {5, "mod-83 specimen", 60, mod83_specimen},
      {6, "zero-location theorem", 30, zero_location},
      {7, "zero density", 120, zero_density},
      {8, "tiling verification", 60, tiling_verification},
      {9, "window statistics", 120, window_statistics},
      {10, "power-freeness", 60, power_freeness},
      {11, "round-trip", 60, round_trip},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail += std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_seconds) {
      o.pass = false;
      o.detail += "; over time budget";
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << c.id << "  " << c.title << "  [" << std::fixed
              << std::setprecision(2) << secs << " s / " << std::setprecision(0) << c.budget_seconds << " s]  " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
