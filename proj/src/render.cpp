#include "numwall/render.hpp"

#include <ostream>

namespace numwall {

const std::array<Rgb, 13>& rainbow_table() {
  static const std::array<Rgb, 13> table = {{
      {255, 255, 255},  // 0
      {0, 0, 0},        // 1
      {255, 0, 0},      // 2
      {0, 255, 0},      // 3
      {0, 0, 255},      // 4
      {255, 255, 0},    // 5
      {0, 255, 255},    // 6
      {255, 0, 255},    // 7
      {255, 128, 0},    // 8
      {128, 0, 255},    // 9
      {0, 128, 64},     // 10
      {128, 64, 0},     // 11
      {255, 128, 192},  // 12
  }};
  return table;
}

Rgb Palette::colour(std::uint32_t residue) const {
  if (residue == 0) return {255, 255, 255};
  if (residue == 1) return {0, 0, 0};
  if (mode_ == PaletteMode::Grey) return {128, 128, 128};
  const auto& table = rainbow_table();
  if (residue < table.size()) return table[residue];
  return table[2 + (residue - 2) % (table.size() - 2)];
}

Rgb Palette::colour(const DomainValue& v) const {
  if (v.domain().is_prime_field()) return colour(static_cast<std::uint32_t>(v.value().get_ui()));
  mpz_class a = abs(v.value());
  if (a == 0) return colour(0u);
  mpz_class r = a % 13;
  // A nonzero multiple of 13 must not read as zero.
  return colour(r == 0 ? 13u : static_cast<std::uint32_t>(r.get_ui()));
}

ImageSize image_size(const Wall& wall, const RenderOptions& opts) {
  long w = static_cast<long>(wall.width()) * opts.scale;
  long h = (wall.max_row() + 3) * opts.scale;
  if (opts.quarter_turn) return {h, w};
  return {w, h};
}

std::string render_wall(const Wall& wall, const RenderOptions& opts) {
  if (opts.scale < 1) throw Error(ErrorCode::InvalidArgument, "scale must be at least 1");
  const long cols = static_cast<long>(wall.width());
  const long rows = wall.max_row() + 3;
  // One pixel per cell first, then scaled and possibly rotated.
  std::vector<Rgb> cells(static_cast<std::size_t>(cols * rows), kBackground);
  for (long m = -2; m <= wall.max_row(); ++m) {
    for (long j = 0; j < cols; ++j) {
      long n = wall.start() + j;
      if (!wall.contains(m, n)) continue;
      Rgb c;
      if (m == -2) c = opts.palette.colour(0u);
      else if (m == -1) c = opts.palette.colour(1u);
      else if (wall.domain().is_prime_field()) c = opts.palette.colour(wall.residue(m, n));
      else c = opts.palette.colour(wall.at(m, n));
      cells[static_cast<std::size_t>((m + 2) * cols + j)] = c;
    }
  }
  const ImageSize size = image_size(wall, opts);
  std::string out = "P6\n" + std::to_string(size.width) + " " + std::to_string(size.height) + "\n255\n";
  const std::size_t header = out.size();
  out.resize(header + static_cast<std::size_t>(size.width * size.height * 3));
  char* px = out.data() + header;
  for (long y = 0; y < size.height; ++y) {
    for (long x = 0; x < size.width; ++x) {
      long row, col;
      if (opts.quarter_turn) {
        // Anticlockwise: image column is the wall row, bottom is column 0.
        row = x / opts.scale;
        col = cols - 1 - y / opts.scale;
      } else {
        row = y / opts.scale;
        col = x / opts.scale;
      }
      const Rgb& c = cells[static_cast<std::size_t>(row * cols + col)];
      *px++ = static_cast<char>(c.r);
      *px++ = static_cast<char>(c.g);
      *px++ = static_cast<char>(c.b);
    }
  }
  return out;
}

void write_ppm(std::ostream& out, const Wall& wall, const RenderOptions& opts) {
  std::string bytes = render_wall(wall, opts);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace numwall
