#pragma once

// The ternary Pagoda wall as a substitution tiling.
//
// Wall entries sit on the integer lattice (m down, n right). A tile is the
// taxicab-radius-2 diamond of 13 entries around its centre, so tile
// vertices are shared by 4 tiles and edge midpoints by 2. Tile coordinates
// u = (m + 2, n) put the tiling origin at entry (-2, 0); centres lie on
// (2, 0) + <(2, 2), (2, -2)>. Inflation sends a tile at u to its four gene
// children at 2u + (-2, 0), (0, -2), (0, 2), (2, 0) (North, West, East,
// South), each offset first moved by the parent's spatial transform.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "numwall/error.hpp"

namespace numwall {

// Spatial part: A identity, B mirror n -> -n, C mirror m -> -m, D half-turn.
// Colour part: I identity, J negate odd rows, K negate odd columns,
// L = J K (negate where exactly one of m, n is odd). Parities are absolute
// wall parities. The group is (Z/2)^4; every element is an involution.
class Transform {
 public:
  constexpr Transform() = default;
  constexpr Transform(int spatial, int colour) : bits_(static_cast<std::uint8_t>((spatial & 3) | ((colour & 3) << 2))) {}

  // Two-letter code such as "BK"; parse() also accepts a lone spatial or
  // colour letter and "" for AI.
  static Transform parse(std::string_view code);
  std::string code() const;

  int spatial() const noexcept { return bits_ & 3; }
  int colour() const noexcept { return bits_ >> 2; }
  int index() const noexcept { return bits_; }  // 0..15

  bool mirrors_columns() const noexcept { return (spatial() & 1) != 0; }  // n -> -n
  bool mirrors_rows() const noexcept { return (spatial() & 2) != 0; }     // m -> -m
  // Whether the entry at absolute (m, n) is negated.
  bool negates(long m, long n) const noexcept;

  friend bool operator==(Transform, Transform) = default;
  friend auto operator<=>(Transform, Transform) = default;

 private:
  std::uint8_t bits_ = 0;
};

std::vector<Transform> all_transforms();

// The transform equal to applying b and then a.
Transform compose_transforms(Transform a, Transform b);

// 13 entries in row order: widths 1, 3, 5, 3, 1 for dm = -2 .. 2.
class Diamond {
 public:
  Diamond() { values_.fill(0); }
  explicit Diamond(const std::array<std::uint8_t, 13>& values) : values_(values) {}

  static int index(int dm, int dn);  // -1 outside the diamond
  static std::pair<int, int> offset(int index);

  std::uint8_t at(int dm, int dn) const { return values_[static_cast<std::size_t>(index(dm, dn))]; }
  std::uint8_t operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  std::uint8_t& operator[](int i) { return values_[static_cast<std::size_t>(i)]; }
  const std::array<std::uint8_t, 13>& values() const noexcept { return values_; }
  std::string to_string() const;  // "0 000 00000 111 1"

  friend bool operator==(const Diamond&, const Diamond&) = default;

 private:
  std::array<std::uint8_t, 13> values_;
};

// The pattern seen after transforming a diamond centred on an entry with
// even m and n, values mod 3.
Diamond apply_transform(const Diamond& pattern, Transform t);

struct TileRef {
  int id = 0;
  Transform t;
  friend bool operator==(const TileRef&, const TileRef&) = default;
  friend auto operator<=>(const TileRef&, const TileRef&) = default;
};

enum GeneSlot { North = 0, West = 1, East = 2, South = 3 };

struct TileSpec {
  int id = 0;
  std::array<TileRef, 4> gene;  // indexed by GeneSlot
  Diamond extn;
  std::vector<Transform> symm;
};

class TileSet {
 public:
  TileSet() = default;
  explicit TileSet(std::vector<TileSpec> tiles);

  const std::vector<TileSpec>& tiles() const noexcept { return tiles_; }
  std::size_t size() const noexcept { return tiles_.size(); }
  // Throws UnknownName for ids not present.
  const TileSpec& tile(int id) const;
  bool has(int id) const;

 private:
  std::vector<TileSpec> tiles_;
};

TileSet parse_tiles(std::string_view text);
std::string format_tiles(const TileSet& set);
// The shipped 13-tile Pagoda set.
const TileSet& pagoda_tiles();

// Placements keyed by tile coordinates u of the centre.
struct TileField {
  int level = 0;
  std::map<std::pair<long, long>, TileRef> placements;
};

// Centre in wall coordinates for tile coordinates u.
inline std::pair<long, long> wall_centre(std::pair<long, long> u) { return {u.first - 2, u.second}; }

TileField inflate(const TileField& field, const TileSet& set);

// Thrown by paint() when two tiles write different values to one entry.
class OverlapConflictError : public Error {
 public:
  OverlapConflictError(long m, long n)
      : Error(ErrorCode::OverlapConflict, "tiles disagree at (" + std::to_string(m) + "," + std::to_string(n) + ")"), m_(m), n_(n) {}
  long m() const noexcept { return m_; }
  long n() const noexcept { return n_; }

 private:
  long m_, n_;
};

// Painted wall entries (mod 3) keyed by (m, n).
using Fragment = std::map<std::pair<long, long>, std::uint8_t>;

Fragment paint(const TileField& field, const TileSet& set);

// The four self-reproducing placements around the tiling origin, located
// by matching painted diamonds against the wall. Throws SeedNotStable when
// some position around the origin has no matching fixed placement.
TileField locate_seed(const TileSet& set);

struct TilingAudit {
  bool closure = true;   // gene ids resolve and the transform group closes
  bool symmetry = true;  // every listed symm fixes its extn
  bool checksum = true;  // 13 tiles, 52 gene references, 169 extn entries
  std::vector<std::string> problems;
  bool ok() const { return closure && symmetry && checksum; }
};

TilingAudit audit_tiles(const TileSet& set);

struct TilingReport {
  long radius = 0;
  int levels = 0;
  TileField seed;
  long compared = 0;
  long mismatches = 0;
  std::vector<std::pair<long, long>> first_mismatches;  // at most 20
  // Zero entries below row -1 with a zero king-neighbour in the fragment.
  long adjacent_zero_pairs = 0;
  TilingAudit audit;
  bool ok() const { return mismatches == 0 && audit.ok(); }
};

// Expands the seed `levels` times (nullopt: least k with 2^{k+1} >= radius),
// paints, and compares every entry with m >= -2 and |m + 2| + |n| <= radius
// against the Pagoda mod 3 wall.
TilingReport verify_tiling(long radius, std::optional<int> levels = std::nullopt, const TileSet& set = pagoda_tiles());

// M[i][j] = number of tile j's children that are tile i (ids 1-based, stored
// 0-based).
std::vector<std::vector<long>> substitution_matrix(const TileSet& set);

// Boundary-weighted zero count of a diamond: interior entries weigh 1, edge
// midpoints 1/2, vertices 1/4 (total weight 8).
mpq_class weighted_zero_count(const Diamond& d);

struct MarkovDensity {
  mpq_class density;
  std::vector<int> tile_class;              // ids of the class used
  std::map<int, mpq_class> frequencies;     // Perron vector, sums to 1
};

// Zero density of the tiling restricted to one closed communicating class
// of the substitution matrix. Without a class, the unique closed class with
// more than one tile is used; ReducibleAmbiguity when there is not exactly
// one.
MarkovDensity markov_zero_density(const TileSet& set = pagoda_tiles(), std::optional<std::vector<int>> tile_class = std::nullopt);

// Closed communicating classes (sorted ids) of the substitution matrix.
std::vector<std::vector<int>> closed_classes(const TileSet& set);

struct IsolatedZeroAudit {
  std::vector<int> isolated;       // tiles whose extn zeros are isolated
  std::vector<int> flagged;        // tiles with adjacent zeros in extn
  long cross_boundary_pairs = 0;   // adjacent zeros below row -1, level-6 fragment
  bool ok() const { return cross_boundary_pairs == 0; }
};

IsolatedZeroAudit isolated_zero_audit(const TileSet& set = pagoda_tiles(), int levels = 6);

}  // namespace numwall
