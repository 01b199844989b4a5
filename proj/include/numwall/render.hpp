#pragma once

// Wall images as binary PPM (P6). Row m of the wall is image row m + 2, so
// rows -2 and -1 appear at the top; column n is image column n - start.
// Cells outside a segment triangle are light blue (173, 216, 230).

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "numwall/wall.hpp"

namespace numwall {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kBackground{173, 216, 230};

enum class PaletteMode { Grey, Rainbow };

// Grey: 0 white, 1 black, every other residue (128, 128, 128).
// Rainbow: a fixed 13-entry table (0 white, 1 black, 2 red, 3 green,
// 4 blue, ...) indexed by residue; residues >= 13 reuse hues 2..12 cyclically.
// Integer walls colour by residue mod 13 of |value|, so 0 stays white.
class Palette {
 public:
  Palette() = default;
  explicit Palette(PaletteMode mode) : mode_(mode) {}
  PaletteMode mode() const noexcept { return mode_; }
  Rgb colour(std::uint32_t residue) const;
  Rgb colour(const DomainValue& v) const;

 private:
  PaletteMode mode_ = PaletteMode::Grey;
};

const std::array<Rgb, 13>& rainbow_table();

struct RenderOptions {
  Palette palette;
  int scale = 1;  // pixels per entry edge, >= 1
  // Quarter-turn anticlockwise: the sequence row runs down the left side.
  bool quarter_turn = false;
};

struct ImageSize {
  long width = 0;
  long height = 0;
};

// Untransposed size is width() * scale by (max_row + 3) * scale.
ImageSize image_size(const Wall& wall, const RenderOptions& opts);
// Throws InvalidArgument for scale < 1.
std::string render_wall(const Wall& wall, const RenderOptions& opts = {});
void write_ppm(std::ostream& out, const Wall& wall, const RenderOptions& opts = {});

}  // namespace numwall
