#pragma once

// Window statistics, frame-law audits, deficiency measurement and the
// search for periodic words of maximal depth under a window-size bound.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "numwall/algebra.hpp"
#include "numwall/wall.hpp"

namespace numwall {

// Asymptotic density, per wall entry, of windows of size exactly g in the
// wall of a random sequence over a q-element field:
//   (q-1)^3 / ((q+1) q^{g+2}).
// Summed with weight g^2 over g >= 1 it gives 1/q, the fraction of singular
// random Toeplitz matrices.
mpq_class expected_window_density(std::uint64_t q, long g);

// Cells (m, n) with m in [row_begin, row_end) and n in [col_begin, col_end),
// further restricted to |n - c| <= m when `diamond_centre` = c is set, and
// always to cells held by the wall.
struct Region {
  long row_begin = 0;
  long row_end = 0;
  long col_begin = 0;
  long col_end = 0;
  std::optional<long> diamond_centre;

  bool holds(long m, long n) const;
};

// Every row of the wall, columns [row_begin(m), row_end(m)).
Region whole_wall(const Wall& wall);

struct WindowCensus {
  Region region;
  // Complete windows whose origin lies in the region, by size.
  std::map<long, long> counts;
  // Windows cut by the triangle edge; their size is unknown.
  long truncated = 0;
  // Cells of the region held by the wall.
  long total_entries = 0;
  // Periodic only: the identically-zero tail, which is not a window.
  std::optional<long> terminal_zero_row;

  long windows() const;
};

WindowCensus window_census(const Wall& wall, const Region& region);

struct ChiSquareBin {
  long g_first = 0;
  long g_last = 0;  // -1 for an open tail
  long observed = 0;
  double expected = 0;
};

struct ChiSquareResult {
  double statistic = 0;
  int degrees_of_freedom = 0;
  double critical = 0;  // 99th percentile
  bool pass = false;
  std::vector<ChiSquareBin> bins;
};

// Pearson goodness of fit of window counts against
// expected_window_density over bins g = 1 .. G, where G is the last size
// with expected count >= 5, plus the pooled tail g > G (folded into bin G
// when its own expectation is below 5). Significance level 0.01. Throws
// TooSmallRegion when fewer than two bins qualify.
ChiSquareResult chi_square_test(const WindowCensus& census, std::uint64_t q);

// Upper 1% point of chi-square with `df` degrees of freedom (df 1..60).
double chi_square_critical_99(int df);

struct DeficiencyReport {
  long d = 1;
  // Last row m such that rows 0..m hold no window with g >= d; -1 when row
  // 0 already fails. For periodic walls the identically-zero tail also ends
  // the depth. Equals the last computed row when nothing fails.
  long depth = -1;
  // True when no failure was seen in the computed rows (depth is then only
  // a lower bound).
  bool unbounded = false;
  std::optional<std::size_t> period;
  std::optional<long> order;  // first identically-zero row
};

DeficiencyReport deficiency(const Wall& wall, long d);
// Periodic word over Z/qZ, wall computed deep enough to settle the answer.
DeficiencyReport deficiency_of_period(const std::vector<DomainValue>& word, long d);

struct SearchLimits {
  std::size_t max_period = 16;
  std::uint64_t max_nodes = 50'000'000;
};

struct SearchResult {
  std::vector<DomainValue> word;
  DeficiencyReport report;
  std::uint64_t nodes = 0;
  std::size_t periods_searched = 0;  // every period 1..periods_searched completed
};

// Thrown when limits.max_nodes is reached; carries the best word so far.
class EffortExhaustedError : public Error {
 public:
  explicit EffortExhaustedError(SearchResult best)
      : Error(ErrorCode::EffortExhausted, "search node limit reached"), best_(std::move(best)) {}
  const SearchResult& best() const noexcept { return best_; }

 private:
  SearchResult best_;
};

// Exhaustive search over primitive periodic words over Z/qZ of period
// 1 .. limits.max_period maximising the deficiency-d depth. Prefixes are
// pruned as soon as their own triangle shows a window that caps the depth
// at or below the best found; leaves are taken only in canonical form under
// rotation, reversal and nonzero scaling. The first word (by period, then
// lexicographic order) reaching the maximum is returned.
SearchResult search_max_depth(std::uint64_t q, long d, const SearchLimits& limits = {});

// Canonical representative of a word's orbit under rotation, reversal and
// multiplication by nonzero scalars (lexicographically least residues).
std::vector<std::uint32_t> canonical_word(const std::vector<std::uint32_t>& word, std::uint32_t q);

// 2-adic valuation; nullopt stands for +infinity (n = 0).
std::optional<int> two_adic_valuation(long n);

// Zero entries (m, n), m >= 0, with v2(m+2) <= v2(n).
std::vector<std::pair<long, long>> zero_location_check(const Wall& wall, long max_row);

mpq_class zero_density_estimate(const Wall& wall, const Region& region);

struct KnightPatternReport {
  long zeros = 0;
  // Pairs of zeros within Chebyshev distance 2 that are not a knight's
  // move apart, and zeros belonging to windows larger than 1.
  long close_pairs = 0;
  long large_windows = 0;
  bool ok() const { return close_pairs == 0 && large_windows == 0; }
};

KnightPatternReport knight_pattern_check(const Wall& wall, const Region& region);

struct FrameLawReport {
  long windows_checked = 0;
  long ratio_law_failures = 0;     // PT/QR != (-1)^g
  long product_law_failures = 0;   // A_k D_k / (B_k C_k) != (-1)^{gk}
  long geometric_failures = 0;     // an inner frame edge is not geometric
  std::vector<std::string> messages;
  bool ok() const { return ratio_law_failures == 0 && product_law_failures == 0 && geometric_failures == 0; }
};

// Audits every complete window whose inner frame lies inside the wall.
FrameLawReport check_frame_laws(const Wall& wall);

}  // namespace numwall
