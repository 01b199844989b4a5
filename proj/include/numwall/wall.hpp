#pragma once

// Number walls: S(m, n) is the (m+1)x(m+1) Toeplitz determinant
// |S_{n+j-i}|, with row -2 identically 0 and row -1 identically 1.
//
// Three routes are provided:
//   hankel_oracle  - direct determinant evaluation (test oracle)
//   wall_naive     - the plain row recurrence, which cannot divide by zero
//   wall_frame     - the recurrence extended across zero windows using the
//                    inner/outer frame relations
//
// A wall is either Periodic (the bi-infinite periodic extension of a word;
// column n means n mod t) or Segment (terms start .. start+L-1; row m holds
// columns start+m .. start+L-1-m, the part determined by the segment).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "numwall/algebra.hpp"
#include "numwall/sequence.hpp"

namespace numwall {

enum class WallMode { Periodic, Segment };

// A g x g block of zeros with top-left interior cell (m0, n0). For periodic
// walls n0 lies in [0, t). A truncated window touches the edge of a segment
// triangle; its size is then only a lower bound and its frames are partial.
struct Window {
  long m0 = 0;
  long n0 = 0;
  long g = 0;
  bool truncated = false;

  friend bool operator==(const Window&, const Window&) = default;
};

// Distance of interior cell (m, n) from the nearest inner frame edge; equals
// the nullity of the corresponding Toeplitz matrix.
long window_nullity(const Window& w, long m, long n);

// Thrown by wall_naive at the first division by a zero S(m-2, n).
class ZeroDivisionError : public Error {
 public:
  ZeroDivisionError(long m, long n)
      : Error(ErrorCode::ZeroDivision, "division by S(" + std::to_string(m - 2) + "," + std::to_string(n) + ") = 0 computing S(" +
                                           std::to_string(m) + "," + std::to_string(n) + ")"),
        m_(m), n_(n) {}
  long m() const noexcept { return m_; }
  long n() const noexcept { return n_; }

 private:
  long m_, n_;
};

namespace detail {
struct WallAccess;
}

class Wall {
 public:
  const Domain& domain() const noexcept { return domain_; }
  WallMode mode() const noexcept { return mode_; }
  bool periodic() const noexcept { return mode_ == WallMode::Periodic; }
  // Period t (Periodic) or segment length L (Segment).
  std::size_t width() const noexcept { return width_; }
  // First column index of the grid (always 0 when Periodic).
  long start() const noexcept { return start_; }
  long max_row() const noexcept { return max_row_; }
  // Periodic only: first row that is identically zero; every later row is
  // zero too and holds no windows.
  std::optional<long> terminal_zero_row() const noexcept { return terminal_row_; }

  // Half-open column range held by row m (absolute indices).
  long row_begin(long m) const;
  long row_end(long m) const;
  bool contains(long m, long n) const;

  // Throws OutOfRange when (m, n) is not held by the wall.
  DomainValue at(long m, long n) const;
  bool is_zero(long m, long n) const;
  // Residue of a prime-field wall entry.
  std::uint32_t residue(long m, long n) const;

  const std::vector<Window>& windows() const noexcept { return windows_; }
  // The window whose interior holds zero cell (m, n), if any.
  const Window* window_at(long m, long n) const;

  // Same grid (domain, geometry, every entry).
  bool same_grid(const Wall& other) const;

 private:
  friend struct detail::WallAccess;

  Domain domain_;
  WallMode mode_ = WallMode::Periodic;
  std::size_t width_ = 0;
  long start_ = 0;
  long max_row_ = -1;
  std::optional<long> terminal_row_;
  // rows_[m + 2] holds row m over [row_begin(m), row_end(m)).
  std::variant<std::vector<std::vector<std::uint32_t>>, std::vector<std::vector<mpz_class>>> rows_;
  std::vector<std::vector<std::int32_t>> window_ids_;
  std::vector<Window> windows_;
};

struct WallOptions {
  // Rows of integer walls are clamped to this bound; entry size grows
  // doubly exponentially with depth.
  long integer_row_cap = 32;
};

// Periodic words give periodic walls and finite segments give segment
// walls; other specs need the explicit segment overload. Segment walls stop
// at row (L-1)/2, the apex of the triangle.
Wall wall_frame(const SequenceSpec& seq, long max_row, const WallOptions& opts = {});
Wall wall_frame(const SequenceSpec& seq, long max_row, long start, std::size_t length, const WallOptions& opts = {});
Wall wall_naive(const SequenceSpec& seq, long max_row, const WallOptions& opts = {});
Wall wall_naive(const SequenceSpec& seq, long max_row, long start, std::size_t length, const WallOptions& opts = {});

// Determinant of the (m+1)x(m+1) Toeplitz matrix at column n, by
// fraction-free elimination over Z and Gaussian elimination over Z/pZ.
// Throws OutOfRange when the sequence lacks one of S_{n-m} .. S_{n+m}.
DomainValue hankel_oracle(const SequenceSpec& seq, long m, long n);
// Same determinant from explicit terms S_{n-m} .. S_{n+m} (2m+1 values).
DomainValue toeplitz_determinant(const std::vector<DomainValue>& terms);

// Exact element of the fraction field: a rational over Z, a residue over
// Z/pZ. Used for frame ratios.
class Ratio {
 public:
  Ratio(Domain d, mpq_class v);
  static Ratio of(const DomainValue& num, const DomainValue& den);
  const Domain& domain() const noexcept { return domain_; }
  const mpq_class& value() const noexcept { return value_; }
  bool is_zero() const { return sgn(value_) == 0; }
  std::string to_string() const { return value_.get_str(); }

  friend Ratio operator*(const Ratio& a, const Ratio& b);
  friend Ratio operator/(const Ratio& a, const Ratio& b);
  friend bool operator==(const Ratio& a, const Ratio& b) { return a.domain_ == b.domain_ && a.value_ == b.value_; }

 private:
  Domain domain_;
  mpq_class value_;
};

// Frame sequences of a window, index k = 0 .. g+1 in the orientation of the
// frame diagram: A north from the NW corner, B west from the NW corner, C
// east from the SE corner, D south from the SE corner; E, F, G, H the outer
// frames aligned with them. Missing entries (outside a segment triangle or
// below the last computed row) are nullopt.
struct WindowFrames {
  long g = 0;
  std::vector<std::optional<DomainValue>> a, b, c, d, e, f, gg, h;
};

WindowFrames window_frames(const Wall& wall, const Window& w);

struct FrameRatios {
  Ratio p, q, r, t;
};

// Edge ratios of the inner frame. Throws IncompleteFrame when an edge lacks
// two consecutive entries.
FrameRatios window_ratios(const WindowFrames& frames);

// The outer frame row below the window, H_0 .. H_{g+1}, from the inner
// frames and the outer frames E, F, G. Throws IncompleteFrame when inputs
// are missing.
std::vector<DomainValue> cross_window(const WindowFrames& frames);

// Frames of the size-0 "window" in the 2x2 block with top-left (m, n):
// inner frame is the block itself, outer frames the ring around it.
WindowFrames block_frames(const Wall& wall, long m, long n);

// Text dump:
//   #wall mod=<p|Z> mode=<periodic t|segment L> [start=<s>] rows=<M>
// then rows -2 .. M, one per line, space-separated canonical integers, '.'
// outside the segment triangle. Windows are recomputed on read.
void write_wall(std::ostream& out, const Wall& wall);
std::string format_wall(const Wall& wall);
Wall read_wall(std::istream& in);
Wall parse_wall(const std::string& text);

}  // namespace numwall
