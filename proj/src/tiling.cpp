#include "numwall/tiling.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "builtin_data.hpp"
#include "numwall/sequence.hpp"
#include "numwall/wall.hpp"

namespace numwall {

namespace {

constexpr char kSpatial[] = "ABCD";
constexpr char kColour[] = "IJKL";

bool odd(long v) { return (v & 1L) != 0; }

}  // namespace

Transform Transform::parse(std::string_view code) {
  int s = 0, c = 0;
  std::size_t i = 0;
  if (i < code.size()) {
    const char* p = std::char_traits<char>::find(kSpatial, 4, code[i]);
    if (p != nullptr) {
      s = static_cast<int>(p - kSpatial);
      ++i;
    }
  }
  if (i < code.size()) {
    const char* p = std::char_traits<char>::find(kColour, 4, code[i]);
    if (p != nullptr) {
      c = static_cast<int>(p - kColour);
      ++i;
    }
  }
  if (i != code.size()) throw Error(ErrorCode::ParseError, "bad transform code '" + std::string(code) + "'");
  return Transform(s, c);
}

std::string Transform::code() const { return {kSpatial[spatial()], kColour[colour()]}; }

bool Transform::negates(long m, long n) const noexcept {
  const bool row = odd(m), col = odd(n);
  switch (colour()) {
    case 1: return row;
    case 2: return col;
    case 3: return row != col;
    default: return false;
  }
}

std::vector<Transform> all_transforms() {
  std::vector<Transform> v;
  for (int s = 0; s < 4; ++s)
    for (int c = 0; c < 4; ++c) v.emplace_back(s, c);
  return v;
}

int Diamond::index(int dm, int dn) {
  static constexpr int row_start[5] = {0, 1, 4, 9, 12};
  if (std::abs(dm) + std::abs(dn) > 2) return -1;
  const int half = 2 - std::abs(dm);
  return row_start[dm + 2] + dn + half;
}

std::pair<int, int> Diamond::offset(int i) {
  static constexpr int row_start[6] = {0, 1, 4, 9, 12, 13};
  for (int r = 0; r < 5; ++r) {
    if (i < row_start[r + 1]) {
      const int dm = r - 2;
      return {dm, i - row_start[r] - (2 - std::abs(dm))};
    }
  }
  throw Error(ErrorCode::OutOfRange, "diamond index " + std::to_string(i));
}

std::string Diamond::to_string() const {
  std::string s;
  for (int i = 0; i < 13; ++i) {
    if (i == 1 || i == 4 || i == 9 || i == 12) s += ' ';
    s += static_cast<char>('0' + values_[static_cast<std::size_t>(i)]);
  }
  return s;
}

namespace {

std::pair<int, int> move(Transform t, int dm, int dn) {
  if (t.mirrors_rows()) dm = -dm;
  if (t.mirrors_columns()) dn = -dn;
  return {dm, dn};
}

// Integer action used to derive the composition table: value at offset d is
// sign(d) * pattern[s(d)].
std::array<int, 13> act(Transform t, const std::array<int, 13>& p) {
  std::array<int, 13> out{};
  for (int i = 0; i < 13; ++i) {
    const auto [dm, dn] = Diamond::offset(i);
    const auto [sm, sn] = move(t, dm, dn);
    const int v = p[static_cast<std::size_t>(Diamond::index(sm, sn))];
    out[static_cast<std::size_t>(i)] = t.negates(dm, dn) ? -v : v;
  }
  return out;
}

const std::array<std::array<Transform, 16>, 16>& composition_table() {
  static const auto table = [] {
    std::array<int, 13> generic{};
    for (int i = 0; i < 13; ++i) generic[static_cast<std::size_t>(i)] = i + 1;
    std::map<std::array<int, 13>, Transform> by_image;
    for (Transform t : all_transforms()) by_image[act(t, generic)] = t;
    if (by_image.size() != 16) throw Error(ErrorCode::InternalInconsistency, "transforms act non-faithfully");
    std::array<std::array<Transform, 16>, 16> tab{};
    for (Transform a : all_transforms()) {
      for (Transform b : all_transforms()) {
        auto it = by_image.find(act(a, act(b, generic)));
        if (it == by_image.end()) throw Error(ErrorCode::InternalInconsistency, "transform group not closed");
        tab[static_cast<std::size_t>(a.index())][static_cast<std::size_t>(b.index())] = it->second;
      }
    }
    return tab;
  }();
  return table;
}

}  // namespace

Transform compose_transforms(Transform a, Transform b) {
  return composition_table()[static_cast<std::size_t>(a.index())][static_cast<std::size_t>(b.index())];
}

Diamond apply_transform(const Diamond& pattern, Transform t) {
  Diamond out;
  for (int i = 0; i < 13; ++i) {
    const auto [dm, dn] = Diamond::offset(i);
    const auto [sm, sn] = move(t, dm, dn);
    const std::uint8_t v = pattern.at(sm, sn);
    out[i] = t.negates(dm, dn) ? static_cast<std::uint8_t>((3 - v) % 3) : v;
  }
  return out;
}

TileSet::TileSet(std::vector<TileSpec> tiles) : tiles_(std::move(tiles)) {
  std::sort(tiles_.begin(), tiles_.end(), [](const TileSpec& a, const TileSpec& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < tiles_.size(); ++i) {
    if (tiles_[i].id == tiles_[i - 1].id) throw Error(ErrorCode::ParseError, "duplicate tile " + std::to_string(tiles_[i].id));
  }
}

bool TileSet::has(int id) const {
  return std::any_of(tiles_.begin(), tiles_.end(), [&](const TileSpec& t) { return t.id == id; });
}

const TileSpec& TileSet::tile(int id) const {
  for (const auto& t : tiles_) {
    if (t.id == id) return t;
  }
  throw Error(ErrorCode::UnknownName, "no tile " + std::to_string(id));
}

namespace {

TileRef parse_ref(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == 0) throw Error(ErrorCode::ParseError, "bad gene entry '" + std::string(text) + "'");
  return TileRef{std::stoi(std::string(text.substr(0, i))), Transform::parse(text.substr(i))};
}

std::string format_ref(const TileRef& r) {
  std::string s = std::to_string(r.id);
  if (r.t.spatial() != 0) s += kSpatial[r.t.spatial()];
  if (r.t.colour() != 0) s += kColour[r.t.colour()];
  return s;
}

}  // namespace

TileSet parse_tiles(std::string_view text) {
  std::vector<TileSpec> tiles;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& why) { throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + why); };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "tile") {
      TileSpec t;
      if (!(ls >> t.id)) fail("missing tile id");
      tiles.push_back(t);
      continue;
    }
    if (tiles.empty()) fail("'" + key + "' before any tile");
    TileSpec& t = tiles.back();
    std::string tok;
    if (key == "gene") {
      std::array<bool, 4> seen{};
      while (ls >> tok) {
        if (tok.size() < 3 || tok[1] != '=') fail("bad gene field '" + tok + "'");
        const std::string dirs = "NWES";
        const auto slot = dirs.find(tok[0]);
        if (slot == std::string::npos) fail("bad gene direction '" + tok + "'");
        t.gene[slot] = parse_ref(std::string_view(tok).substr(2));
        seen[slot] = true;
      }
      if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) fail("gene needs N, W, E and S");
    } else if (key == "extn") {
      std::string digits;
      while (ls >> tok) digits += tok;
      if (digits.size() != 13) fail("extn needs 13 digits");
      for (int i = 0; i < 13; ++i) {
        const char c = digits[static_cast<std::size_t>(i)];
        if (c < '0' || c > '2') fail("extn digit out of range");
        t.extn[i] = static_cast<std::uint8_t>(c - '0');
      }
    } else if (key == "symm") {
      while (ls >> tok) {
        if (tok == "full") {
          t.symm = all_transforms();
        } else {
          t.symm.push_back(Transform::parse(tok));
        }
      }
    } else {
      fail("unknown directive '" + key + "'");
    }
  }
  return TileSet(std::move(tiles));
}

std::string format_tiles(const TileSet& set) {
  std::ostringstream out;
  for (const auto& t : set.tiles()) {
    out << "tile " << t.id << "\ngene N=" << format_ref(t.gene[North]) << " W=" << format_ref(t.gene[West])
        << " E=" << format_ref(t.gene[East]) << " S=" << format_ref(t.gene[South]) << "\nextn " << t.extn.to_string()
        << "\nsymm";
    if (t.symm.size() == 16) {
      out << " full";
    } else {
      for (const auto& s : t.symm) out << ' ' << s.code();
    }
    out << "\n\n";
  }
  return out.str();
}

const TileSet& pagoda_tiles() {
  static const TileSet set = [] {
    auto text = detail::builtin_data("pagoda_tiles.txt");
    if (!text) throw Error(ErrorCode::InternalInconsistency, "pagoda tile data missing");
    return parse_tiles(*text);
  }();
  return set;
}

namespace {

constexpr std::array<std::pair<int, int>, 4> kChildOffset = {{{-2, 0}, {0, -2}, {0, 2}, {2, 0}}};

std::pair<long, long> child_position(std::pair<long, long> u, Transform t, int slot) {
  const auto [dm, dn] = move(t, kChildOffset[static_cast<std::size_t>(slot)].first, kChildOffset[static_cast<std::size_t>(slot)].second);
  return {2 * u.first + dm, 2 * u.second + dn};
}

}  // namespace

TileField inflate(const TileField& field, const TileSet& set) {
  TileField out;
  out.level = field.level + 1;
  for (const auto& [u, ref] : field.placements) {
    const TileSpec& spec = set.tile(ref.id);
    for (int slot = 0; slot < 4; ++slot) {
      const TileRef& child = spec.gene[static_cast<std::size_t>(slot)];
      const TileRef placed{child.id, compose_transforms(ref.t, child.t)};
      const auto pos = child_position(u, ref.t, slot);
      auto [it, inserted] = out.placements.emplace(pos, placed);
      if (!inserted && !(it->second == placed)) {
        const auto c = wall_centre(pos);
        throw OverlapConflictError(c.first, c.second);
      }
    }
  }
  return out;
}

namespace {

void paint_one(Fragment& frag, std::pair<long, long> u, const TileRef& ref, const TileSet& set) {
  const auto [cm, cn] = wall_centre(u);
  const Diamond d = apply_transform(set.tile(ref.id).extn, ref.t);
  for (int i = 0; i < 13; ++i) {
    const auto [dm, dn] = Diamond::offset(i);
    const std::pair<long, long> p{cm + dm, cn + dn};
    auto [it, inserted] = frag.emplace(p, d[i]);
    if (!inserted && it->second != d[i]) throw OverlapConflictError(p.first, p.second);
  }
}

}  // namespace

Fragment paint(const TileField& field, const TileSet& set) {
  Fragment frag;
  for (const auto& [u, ref] : field.placements) paint_one(frag, u, ref, set);
  return frag;
}

namespace {

// Pagoda mod 3 segment wall holding every entry with m >= -2 and
// |m + 2| + |n| <= radius.
Wall reference_wall(long radius) {
  const long half = radius + 2;
  return wall_frame(builtin_sequence("pagoda", Domain::prime_field(3)), radius, -2 * half, static_cast<std::size_t>(4 * half + 1));
}

long taxicab_from_origin(long m, long n) { return std::labs(m + 2) + std::labs(n); }

// Entries of `frag` with m >= -2 inside the radius that differ from the wall.
// With `upper_zero`, entries above row -2 are also compared against the
// zero half-plane.
long compare(const Fragment& frag, const Wall& wall, long radius, long* compared,
             std::vector<std::pair<long, long>>* first, bool upper_zero = false) {
  long bad = 0;
  for (const auto& [p, v] : frag) {
    const auto [m, n] = p;
    if (taxicab_from_origin(m, n) > radius) continue;
    if (m < -2) {
      if (upper_zero && v != 0) ++bad;
      continue;
    }
    if (compared) ++*compared;
    if (!wall.contains(m, n)) throw Error(ErrorCode::InternalInconsistency, "reference wall too small");
    if (wall.residue(m, n) != v) {
      ++bad;
      if (first && first->size() < 20) first->push_back(p);
    }
  }
  return bad;
}

}  // namespace

TileField locate_seed(const TileSet& set) {
  // Fixed placements: the placement at u is its own child in some slot,
  // which forces u = -s(offset).
  struct Candidate {
    std::pair<long, long> u;
    TileRef ref;
  };
  std::vector<Candidate> fixed;
  for (const auto& spec : set.tiles()) {
    for (Transform t : all_transforms()) {
      for (int slot = 0; slot < 4; ++slot) {
        const TileRef& child = spec.gene[static_cast<std::size_t>(slot)];
        if (child.id != spec.id || compose_transforms(t, child.t) != t) continue;
        const auto [dm, dn] = move(t, kChildOffset[static_cast<std::size_t>(slot)].first,
                                   kChildOffset[static_cast<std::size_t>(slot)].second);
        fixed.push_back({{-dm, -dn}, TileRef{spec.id, t}});
      }
    }
  }
  const long check_radius = 32;
  const int check_levels = 3;
  const Wall wall = reference_wall(check_radius);
  TileField seed;
  for (const auto& [om, on] : kChildOffset) {
    const std::pair<long, long> u{om, on};
    // Matching candidates grouped by what they paint; placements painting
    // the same fragment at every checked level are interchangeable.
    std::map<std::vector<std::pair<std::pair<long, long>, std::uint8_t>>, TileRef> matches;
    for (const auto& c : fixed) {
      if (c.u != u) continue;
      TileField f;
      f.placements.emplace(u, c.ref);
      bool ok = true;
      std::vector<std::pair<std::pair<long, long>, std::uint8_t>> painted;
      for (int level = 0; level <= check_levels && ok; ++level) {
        try {
          const Fragment frag = paint(f, set);
          ok = compare(frag, wall, check_radius, nullptr, nullptr, true) == 0;
          painted.insert(painted.end(), frag.begin(), frag.end());
        } catch (const OverlapConflictError&) {
          ok = false;
        }
        f = inflate(f, set);
      }
      if (ok) matches.emplace(std::move(painted), c.ref);  // keeps the first (least) placement
    }
    if (matches.size() != 1) {
      throw Error(ErrorCode::SeedNotStable, std::to_string(matches.size()) + " distinct fixed placements match the wall at u=(" +
                                                std::to_string(u.first) + "," + std::to_string(u.second) + ")");
    }
    seed.placements.emplace(u, matches.begin()->second);
  }
  return seed;
}

TilingAudit audit_tiles(const TileSet& set) {
  TilingAudit a;
  long refs = 0, entries = 0;
  for (const auto& t : set.tiles()) {
    for (const auto& g : t.gene) {
      ++refs;
      if (!set.has(g.id)) {
        a.closure = false;
        a.problems.push_back("tile " + std::to_string(t.id) + " refers to missing tile " + std::to_string(g.id));
      }
    }
    entries += 13;
    for (Transform s : t.symm) {
      if (!(apply_transform(t.extn, s) == t.extn)) {
        a.symmetry = false;
        a.problems.push_back("tile " + std::to_string(t.id) + " not fixed by " + s.code());
      }
    }
  }
  const auto all = all_transforms();
  for (Transform x : all) {
    bool has_inverse = false;
    for (Transform y : all) {
      const Transform xy = compose_transforms(x, y);
      if (xy.index() < 0 || xy.index() >= 16) a.closure = false;
      if (xy == Transform()) has_inverse = true;
      for (Transform z : all) {
        if (compose_transforms(xy, z) != compose_transforms(x, compose_transforms(y, z))) {
          a.closure = false;
          a.problems.push_back("composition not associative");
        }
      }
    }
    if (!has_inverse) {
      a.closure = false;
      a.problems.push_back(x.code() + " has no inverse");
    }
  }
  if (set.size() != 13 || refs != 52 || entries != 169) {
    a.checksum = false;
    a.problems.push_back("expected 13 tiles, 52 gene references, 169 extn entries; got " + std::to_string(set.size()) + ", " +
                         std::to_string(refs) + ", " + std::to_string(entries));
  }
  return a;
}

namespace {

long adjacent_zero_pairs_below(const Fragment& frag, long first_row, long radius) {
  long pairs = 0;
  for (const auto& [p, v] : frag) {
    if (v != 0 || p.first < first_row || taxicab_from_origin(p.first, p.second) > radius) continue;
    // Each unordered pair once: partners later in row-major order.
    const std::pair<long, long> next[4] = {{p.first, p.second + 1}, {p.first + 1, p.second - 1}, {p.first + 1, p.second}, {p.first + 1, p.second + 1}};
    for (const auto& q : next) {
      auto it = frag.find(q);
      if (it != frag.end() && it->second == 0 && taxicab_from_origin(q.first, q.second) <= radius) ++pairs;
    }
  }
  return pairs;
}

int levels_for(long radius) {
  int k = 0;
  while ((2L << k) < radius) ++k;
  return k;
}

}  // namespace

TilingReport verify_tiling(long radius, std::optional<int> levels, const TileSet& set) {
  if (radius < 1) throw Error(ErrorCode::InvalidArgument, "radius must be >= 1");
  TilingReport r;
  r.radius = radius;
  r.levels = levels ? *levels : levels_for(radius);
  r.audit = audit_tiles(set);
  r.seed = locate_seed(set);
  TileField f = r.seed;
  for (int i = 0; i < r.levels; ++i) f = inflate(f, set);
  const Fragment frag = paint(f, set);
  const Wall wall = reference_wall(radius);
  r.mismatches = compare(frag, wall, radius, &r.compared, &r.first_mismatches);
  r.adjacent_zero_pairs = adjacent_zero_pairs_below(frag, -1, radius);
  return r;
}

std::vector<std::vector<long>> substitution_matrix(const TileSet& set) {
  const std::size_t k = set.size();
  std::vector<std::vector<long>> m(k, std::vector<long>(k, 0));
  for (std::size_t j = 0; j < k; ++j) {
    for (const auto& g : set.tiles()[j].gene) {
      for (std::size_t i = 0; i < k; ++i) {
        if (set.tiles()[i].id == g.id) ++m[i][j];
      }
    }
  }
  return m;
}

mpq_class weighted_zero_count(const Diamond& d) {
  mpq_class z = 0;
  for (int i = 0; i < 13; ++i) {
    if (d[i] != 0) continue;
    const auto [dm, dn] = Diamond::offset(i);
    const int r = std::abs(dm) + std::abs(dn);
    if (r <= 1) z += 1;
    else if (dm == 0 || dn == 0) z += mpq_class(1, 4);
    else z += mpq_class(1, 2);
  }
  return z;
}

std::vector<std::vector<int>> closed_classes(const TileSet& set) {
  const auto m = substitution_matrix(set);
  const std::size_t k = set.size();
  // reach[i][j]: j is a descendant of i (i -> j when j is a child of i).
  std::vector<std::vector<bool>> reach(k, std::vector<bool>(k, false));
  for (std::size_t i = 0; i < k; ++i) {
    reach[i][i] = true;
    for (std::size_t j = 0; j < k; ++j)
      if (m[j][i] > 0) reach[i][j] = true;
  }
  for (std::size_t via = 0; via < k; ++via)
    for (std::size_t i = 0; i < k; ++i)
      if (reach[i][via])
        for (std::size_t j = 0; j < k; ++j)
          if (reach[via][j]) reach[i][j] = true;
  std::vector<std::vector<int>> classes;
  std::vector<bool> done(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    if (done[i]) continue;
    std::vector<int> cls;
    bool closed = true;
    for (std::size_t j = 0; j < k; ++j) {
      if (reach[i][j] && reach[j][i]) {
        cls.push_back(set.tiles()[j].id);
        done[j] = true;
      } else if (reach[i][j]) {
        closed = false;
      }
    }
    if (closed) classes.push_back(cls);
  }
  return classes;
}

MarkovDensity markov_zero_density(const TileSet& set, std::optional<std::vector<int>> tile_class) {
  std::vector<int> cls;
  if (tile_class) {
    cls = *tile_class;
    std::sort(cls.begin(), cls.end());
  } else {
    std::vector<std::vector<int>> bulk;
    for (auto& c : closed_classes(set)) {
      if (c.size() > 1) bulk.push_back(c);
    }
    if (bulk.size() != 1) {
      throw Error(ErrorCode::ReducibleAmbiguity, std::to_string(bulk.size()) + " closed classes with more than one tile");
    }
    cls = bulk.front();
  }
  const std::size_t k = cls.size();
  auto pos = [&](int id) -> long {
    auto it = std::find(cls.begin(), cls.end(), id);
    return it == cls.end() ? -1 : static_cast<long>(it - cls.begin());
  };
  // A = M_C - 4 I, plus the normalisation row; solve A pi = (0, .., 0, 1).
  std::vector<std::vector<mpq_class>> a(k + 1, std::vector<mpq_class>(k + 1, 0));
  for (std::size_t j = 0; j < k; ++j) {
    for (const auto& g : set.tile(cls[j]).gene) {
      const long i = pos(g.id);
      if (i < 0) throw Error(ErrorCode::InvalidArgument, "tile class is not closed");
      a[static_cast<std::size_t>(i)][j] += 1;
    }
    a[j][j] -= 4;
    a[k][j] = 1;
  }
  a[k][k] = 1;  // augmented column holds the right-hand side
  for (std::size_t i = 0; i < k; ++i) a[i][k] = 0;
  // Gaussian elimination on the (k+1) x k system with augmented column k.
  const std::size_t rows = k + 1;
  std::size_t r = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < k && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(a[p][c]) == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    const mpq_class inv = 1 / a[r][c];
    for (std::size_t j = c; j <= k; ++j) a[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(a[i][c]) == 0) continue;
      const mpq_class f = a[i][c];
      for (std::size_t j = c; j <= k; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  if (pivot_col.size() != k) throw Error(ErrorCode::ReducibleAmbiguity, "eigenvalue 4 is not simple on the class");
  for (std::size_t i = r; i < rows; ++i) {
    if (sgn(a[i][k]) != 0) throw Error(ErrorCode::ReducibleAmbiguity, "no frequency vector for the class");
  }
  MarkovDensity out;
  out.tile_class = cls;
  out.density = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const mpq_class& pi = a[i][k];
    out.frequencies[cls[pivot_col[i]]] = pi;
    out.density += pi * weighted_zero_count(set.tile(cls[pivot_col[i]]).extn);
  }
  out.density /= 8;
  out.density.canonicalize();
  return out;
}

IsolatedZeroAudit isolated_zero_audit(const TileSet& set, int levels) {
  IsolatedZeroAudit r;
  for (const auto& t : set.tiles()) {
    bool isolated = true;
    for (int i = 0; i < 13 && isolated; ++i) {
      if (t.extn[i] != 0) continue;
      const auto [dm, dn] = Diamond::offset(i);
      for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b) {
          if ((a != 0 || b != 0) && Diamond::index(dm + a, dn + b) >= 0 && t.extn.at(dm + a, dn + b) == 0) isolated = false;
        }
    }
    (isolated ? r.isolated : r.flagged).push_back(t.id);
  }
  TileField f = locate_seed(set);
  for (int i = 0; i < levels; ++i) f = inflate(f, set);
  r.cross_boundary_pairs = adjacent_zero_pairs_below(paint(f, set), -1, 2L << levels);
  return r;
}

}  // namespace numwall
