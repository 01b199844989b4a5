// numwall: compute, render and audit number walls from the command line.
//
// Exit status: 0 success, 1 a verification failed, 2 usage or input error.
// Every run writes "numwall <version> config=<digest>" to stderr; the
// digest is FNV-1a over the subcommand path and its options with defaults
// filled in, so equal configurations print equal digests.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "numwall/analysis.hpp"
#include "numwall/render.hpp"
#include "numwall/sequence.hpp"
#include "numwall/tiling.hpp"
#include "numwall/wall.hpp"

namespace {

using namespace numwall;

constexpr const char* kVersion = "1.0.0";

struct SourceOptions {
  std::string builtin;
  std::string period;
  std::string spec_file;
  std::string digits_file;
  std::string wall_file;  // render and census only
  std::string modulus;
  std::uint64_t seed = 1;
};

struct GeometryOptions {
  long rows = 64;
  std::optional<long> segment;
  long start = 0;
};

void add_source(CLI::App* app, SourceOptions& s, bool allow_wall_file) {
  auto* g = app->add_option_group("source", "exactly one sequence source");
  g->add_option("--builtin", s.builtin, "named sequence (" + [] {
    std::string names;
    for (const auto& n : builtin_names()) names += (names.empty() ? "" : ", ") + n;
    return names;
  }() + ")");
  g->add_option("--period", s.period, "periodic word as digits, e.g. 111010");
  g->add_option("--spec", s.spec_file, "D0LEC specification file");
  g->add_option("--digits", s.digits_file, "raw digits file (finite segment)");
  if (allow_wall_file) g->add_option("--wall", s.wall_file, "wall dump file to read");
  g->require_option(1);
  app->add_option("--mod", s.modulus, "coefficient domain: a prime or Z (default: natural domain of the source)");
  app->add_option("--seed", s.seed, "seed for the libran sequence")->capture_default_str();
}

void add_geometry(CLI::App* app, GeometryOptions& g) {
  app->add_option("--rows", g.rows, "deepest wall row M")->capture_default_str()->check(CLI::NonNegativeNumber);
  app->add_option("--segment", g.segment, "segment length L (default 2M+1; periodic words give a periodic wall without it)")
      ->check(CLI::PositiveNumber);
  app->add_option("--start", g.start, "index of the first segment term")->capture_default_str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<Domain> chosen_domain(const SourceOptions& s) {
  if (s.modulus.empty()) return std::nullopt;
  return Domain::parse(s.modulus);
}

SequenceSpec make_sequence(const SourceOptions& s, long start) {
  const std::optional<Domain> dom = chosen_domain(s);
  if (!s.builtin.empty()) return builtin_sequence(s.builtin, dom, s.seed);
  if (!s.period.empty()) return SequenceSpec::periodic(s.period, dom.value_or(Domain::prime_field(2)));
  if (!s.spec_file.empty()) {
    D0LECSpec spec = parse_d0lec(read_file(s.spec_file));
    return SequenceSpec(dom ? spec.with_domain(*dom) : spec);
  }
  if (!s.digits_file.empty()) {
    const Domain d = dom.value_or(Domain::prime_field(2));
    std::vector<DomainValue> terms;
    for (long v : parse_digit_text(read_file(s.digits_file))) terms.emplace_back(d, v);
    return SequenceSpec::segment(std::move(terms), start);
  }
  throw Error(ErrorCode::InvalidArgument, "no sequence source given");
}

Wall make_wall(const SourceOptions& s, const GeometryOptions& g, bool naive = false) {
  if (!s.wall_file.empty()) return parse_wall(read_file(s.wall_file));
  SequenceSpec seq = make_sequence(s, g.start);
  const bool own_geometry = seq.is_periodic() || std::holds_alternative<FiniteSegment>(seq.source());
  if (own_geometry && !g.segment) return naive ? wall_naive(seq, g.rows) : wall_frame(seq, g.rows);
  const auto length = static_cast<std::size_t>(g.segment.value_or(2 * g.rows + 1));
  return naive ? wall_naive(seq, g.rows, g.start, length) : wall_frame(seq, g.rows, g.start, length);
}

std::filesystem::path output_path(const std::string& out) {
  std::filesystem::path p(out);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("NUMWALL_OUT_DIR"); dir != nullptr && *dir != '\0') return std::filesystem::path(dir) / p;
  }
  return p;
}

// Writes to --out when given, otherwise to stdout.
void emit(const std::string& out, const std::string& bytes) {
  if (out.empty() || out == "-") {
    std::cout.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    std::cout.flush();
    return;
  }
  const auto path = output_path(out);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string join_terms(const std::vector<DomainValue>& terms) {
  bool single = true;
  for (const auto& t : terms) single = single && sgn(t.value()) >= 0 && t.value() < 10;
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!single && i != 0) out += ' ';
    out += terms[i].to_string();
  }
  return out;
}

std::string digest(const CLI::App* sub) {
  std::string text;
  for (const CLI::App* a = sub; a != nullptr && a->get_parent() != nullptr; a = a->get_parent()) text = a->get_name() + "/" + text;
  text += "\n" + sub->config_to_str(true, false);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

std::string decimal(const mpq_class& q, int places = 6) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(places) << q.get_d();
  return ss.str();
}

// Region "r0,r1,c0,c1" (half-open) or the whole wall.
Region parse_region(const std::string& text, const Wall& wall) {
  if (text.empty()) return whole_wall(wall);
  std::vector<long> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stol(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad region '" + text + "'");
    }
  }
  if (v.size() != 4) throw Error(ErrorCode::InvalidArgument, "region needs r0,r1,c0,c1");
  return Region{v[0], v[1], v[2], v[3], std::nullopt};
}

TileSet load_tiles(const std::string& path) { return path.empty() ? pagoda_tiles() : parse_tiles(read_file(path)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numwall: number walls over the integers and prime fields"};
  app.set_version_flag("--version", std::string("numwall ") + kVersion);
  app.require_subcommand(1);

  // seq
  SourceOptions seq_src;
  long seq_start = 0;
  std::size_t seq_count = 64;
  bool seq_show_spec = false;
  auto* seq = app.add_subcommand("seq", "print terms of a sequence (substitution systems and closed forms)");
  add_source(seq, seq_src, false);
  seq->add_option("--start", seq_start, "first index")->capture_default_str();
  seq->add_option("--count", seq_count, "number of terms")->capture_default_str();
  seq->add_flag("--show-spec", seq_show_spec, "print the canonical D0LEC text instead of terms");

  // wall
  SourceOptions wall_src;
  GeometryOptions wall_geo;
  std::string wall_out;
  bool wall_naive_flag = false;
  auto* wall = app.add_subcommand("wall", "compute a number wall across zero windows and write its text dump");
  add_source(wall, wall_src, false);
  add_geometry(wall, wall_geo);
  wall->add_option("--out", wall_out, "dump file (default stdout; relative paths use NUMWALL_OUT_DIR)");
  wall->add_flag("--naive", wall_naive_flag, "plain recurrence only; fails at the first zero divisor");

  // render
  SourceOptions render_src;
  GeometryOptions render_geo;
  std::string render_out, render_palette = "grey";
  int render_scale = 1;
  bool render_rotate = false;
  auto* render = app.add_subcommand("render", "draw a wall as a PPM image: 0 white, 1 black, then grey or rainbow hues");
  add_source(render, render_src, true);
  add_geometry(render, render_geo);
  render->add_option("--palette", render_palette, "grey or rainbow")->capture_default_str()->check(CLI::IsMember({"grey", "rainbow"}));
  render->add_option("--scale", render_scale, "pixels per entry")->capture_default_str()->check(CLI::PositiveNumber);
  render->add_flag("--rotate", render_rotate, "quarter-turn so the sequence runs down the left side");
  render->add_option("--out", render_out, "image file (default stdout)");

  // census
  SourceOptions census_src;
  GeometryOptions census_geo;
  std::string census_region, census_expect;
  auto* census = app.add_subcommand("census", "count windows by size and test them against the random-sequence density");
  add_source(census, census_src, true);
  add_geometry(census, census_geo);
  census->add_option("--region", census_region, "r0,r1,c0,c1 half-open window-origin region (default whole wall)");
  census->add_option("--expect", census_expect, "exit 1 unless the chi-square verdict is this")->check(CLI::IsMember({"pass", "fail"}));

  // deficiency
  SourceOptions def_src;
  GeometryOptions def_geo;
  long def_d = 1;
  auto* def = app.add_subcommand("deficiency", "rows before the first window of size d or more (LCP deficiency)");
  add_source(def, def_src, false);
  add_geometry(def, def_geo);
  def->add_option("--d", def_d, "smallest forbidden window size")->capture_default_str()->check(CLI::PositiveNumber);

  // search
  std::uint64_t search_q = 2;
  long search_d = 2;
  SearchLimits search_limits;
  auto* search = app.add_subcommand("search", "exhaustive search for the periodic word of greatest deficiency depth");
  search->add_option("--mod", search_q, "field size q (prime)")->capture_default_str();
  search->add_option("--d", search_d, "smallest forbidden window size")->capture_default_str()->check(CLI::PositiveNumber);
  search->add_option("--max-period", search_limits.max_period, "longest period tried")->capture_default_str();
  search->add_option("--max-nodes", search_limits.max_nodes, "node budget")->capture_default_str();

  // zerocheck
  SourceOptions zc_src;
  zc_src.builtin = "pagoda";
  zc_src.modulus = "3";
  long zc_rows = 255;
  auto* zc = app.add_subcommand("zerocheck", "ternary Pagoda zeros: 2-adic location rule, parity corollaries and density");
  zc->add_option("--builtin", zc_src.builtin, "sequence")->capture_default_str();
  zc->add_option("--mod", zc_src.modulus, "domain")->capture_default_str();
  zc->add_option("--rows", zc_rows, "last row checked")->capture_default_str()->check(CLI::NonNegativeNumber);

  // tiling
  auto* tiling = app.add_subcommand("tiling", "the 13-tile substitution tiling of the ternary Pagoda wall");
  tiling->require_subcommand(1);
  long tv_radius = 64;
  std::optional<int> tv_levels;
  std::string tv_tiles, td_tiles, ta_tiles;
  auto* tv = tiling->add_subcommand("verify", "expand the seed and compare with the computed wall");
  tv->add_option("--radius", tv_radius, "taxicab radius around (-2, 0)")->capture_default_str()->check(CLI::PositiveNumber);
  tv->add_option("--levels", tv_levels, "inflation levels (default: enough for the radius)");
  tv->add_option("--tiles", tv_tiles, "tile file (default: shipped set)");
  auto* td = tiling->add_subcommand("density", "exact zero density from the substitution matrix");
  td->add_option("--tiles", td_tiles, "tile file (default: shipped set)");
  auto* ta = tiling->add_subcommand("audit", "closure, symmetry and checksum audits plus the isolated-zero audit");
  ta->add_option("--tiles", ta_tiles, "tile file (default: shipped set)");

  // powerfree
  SourceOptions pf_src;
  std::size_t pf_count = 100000;
  unsigned pf_power = 2;
  std::optional<std::size_t> pf_max_period;
  auto* pf = app.add_subcommand("powerfree", "scan a sequence prefix for squares or cubes");
  add_source(pf, pf_src, false);
  pf->add_option("--count", pf_count, "prefix length")->capture_default_str();
  pf->add_option("--power", pf_power, "2 for squares, 3 for cubes")->capture_default_str()->check(CLI::IsMember({2u, 3u}));
  pf->add_option("--max-period", pf_max_period, "ignore powers of period up to this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const CLI::App* active = nullptr;
  for (const CLI::App* a = &app; a != nullptr;) {
    auto subs = a->get_subcommands();
    if (subs.empty()) break;
    active = subs.front();
    a = active;
  }
  std::cerr << "numwall " << kVersion << " config=" << digest(active) << '\n';

  try {
    std::ostringstream out;
    int status = 0;
    if (seq->parsed()) {
      if (seq_show_spec) {
        D0LECSpec spec;
        if (!seq_src.spec_file.empty()) {
          spec = parse_d0lec(read_file(seq_src.spec_file));
        } else if (auto text = seq_src.builtin.empty() ? std::nullopt : builtin_d0lec_text(seq_src.builtin)) {
          spec = parse_d0lec(*text);
        } else {
          throw Error(ErrorCode::InvalidArgument, "--show-spec needs a substitution-based source");
        }
        if (auto d = chosen_domain(seq_src)) spec = spec.with_domain(*d);
        out << format_d0lec(spec);
      } else {
        SequenceSpec s = make_sequence(seq_src, 0);
        out << join_terms(s.terms(seq_start, seq_count)) << '\n';
      }
    } else if (wall->parsed()) {
      Wall w = make_wall(wall_src, wall_geo, wall_naive_flag);
      emit(wall_out, format_wall(w));
      std::cerr << "rows=" << w.max_row() << " windows=" << w.windows().size() << '\n';
    } else if (render->parsed()) {
      Wall w = make_wall(render_src, render_geo);
      RenderOptions opts;
      opts.palette = Palette(render_palette == "rainbow" ? PaletteMode::Rainbow : PaletteMode::Grey);
      opts.scale = render_scale;
      opts.quarter_turn = render_rotate;
      emit(render_out, render_wall(w, opts));
    } else if (census->parsed()) {
      Wall w = make_wall(census_src, census_geo);
      if (!w.domain().is_prime_field()) throw Error(ErrorCode::WrongDomain, "census needs a prime field");
      WindowCensus c = window_census(w, parse_region(census_region, w));
      out << "entries=" << c.total_entries << " truncated=" << c.truncated << '\n';
      const std::uint64_t q = w.domain().modulus();
      for (const auto& [g, n] : c.counts) {
        const double e = expected_window_density(q, g).get_d() * static_cast<double>(c.total_entries);
        out << "g=" << g << " observed=" << n << " expected=" << std::fixed << std::setprecision(2) << e << '\n';
      }
      if (c.terminal_zero_row) out << "terminal_zero_row=" << *c.terminal_zero_row << '\n';
      ChiSquareResult r = chi_square_test(c, q);
      out << "chi2=" << std::fixed << std::setprecision(3) << r.statistic << " df=" << r.degrees_of_freedom
          << " critical=" << r.critical << ' ' << (r.pass ? "pass" : "fail") << '\n';
      if (!census_expect.empty() && (census_expect == "pass") != r.pass) status = 1;
    } else if (def->parsed()) {
      SequenceSpec s = make_sequence(def_src, def_geo.start);
      DeficiencyReport r;
      if (s.is_periodic() && !def_geo.segment) {
        r = deficiency_of_period(s.terms(0, s.period()), def_d);
      } else {
        r = deficiency(make_wall(def_src, def_geo), def_d);
      }
      out << "depth=" << r.depth;
      if (r.period) out << " t=" << *r.period;
      out << '\n';
      if (r.order) out << "order=" << *r.order << '\n';
      if (r.unbounded) out << "no failure through the last computed row\n";
    } else if (search->parsed()) {
      if (!is_prime(search_q)) throw Error(ErrorCode::NotPrime, std::to_string(search_q) + " is not prime");
      auto print = [&](const SearchResult& r) {
        out << "word=" << join_terms(r.word) << " depth=" << r.report.depth << " t=" << r.word.size() << '\n';
        out << "nodes=" << r.nodes << " periods_searched=" << r.periods_searched << '\n';
      };
      try {
        print(search_max_depth(search_q, search_d, search_limits));
      } catch (const EffortExhaustedError& e) {
        print(e.best());
        out << "effort exhausted\n";
        status = 1;
      }
    } else if (zc->parsed()) {
      const long half = 2 * (zc_rows + 1);
      Wall w = wall_frame(make_sequence(zc_src, 0), zc_rows, -half, static_cast<std::size_t>(2 * half + 1));
      auto violations = zero_location_check(w, zc_rows);
      long odd = 0, col0 = 0;
      for (long m = 0; m <= zc_rows; ++m) {
        for (long n = w.row_begin(m); n < w.row_end(m); ++n) {
          if (!w.is_zero(m, n)) continue;
          if (m % 2 != 0) ++odd;
          if (n == 0) ++col0;
        }
      }
      Region centre{0, zc_rows + 1, -(zc_rows + 1), zc_rows + 2, std::nullopt};
      mpq_class density = zero_density_estimate(w, centre);
      out << "violations=" << violations.size() << " odd_row_zeros=" << odd << " column0_zeros=" << col0 << '\n';
      for (std::size_t i = 0; i < violations.size() && i < 10; ++i)
        out << "  zero at (" << violations[i].first << "," << violations[i].second << ")\n";
      out << "density=" << density.get_str() << " (" << decimal(density) << ")\n";
      if (!violations.empty() || odd != 0 || col0 != 0) status = 1;
    } else if (tv->parsed()) {
      TilingReport r = verify_tiling(tv_radius, tv_levels, load_tiles(tv_tiles));
      out << "levels=" << r.levels << " compared=" << r.compared << '\n';
      out << r.mismatches << " mismatches\n";
      for (const auto& [m, n] : r.first_mismatches) out << "  mismatch at (" << m << "," << n << ")\n";
      out << "adjacent_zero_pairs=" << r.adjacent_zero_pairs << '\n';
      if (!r.ok()) status = 1;
    } else if (td->parsed()) {
      MarkovDensity d = markov_zero_density(load_tiles(td_tiles));
      out << "density=" << d.density.get_str() << " (" << decimal(d.density) << ")\n";
      out << "class=";
      for (std::size_t i = 0; i < d.tile_class.size(); ++i) out << (i ? "," : "") << d.tile_class[i];
      out << '\n';
    } else if (ta->parsed()) {
      TileSet set = load_tiles(ta_tiles);
      TilingAudit a = audit_tiles(set);
      out << "closure=" << (a.closure ? "ok" : "FAIL") << " symmetry=" << (a.symmetry ? "ok" : "FAIL")
          << " checksum=" << (a.checksum ? "ok" : "FAIL") << '\n';
      for (const auto& p : a.problems) out << "  " << p << '\n';
      IsolatedZeroAudit iz = isolated_zero_audit(set);
      out << "flagged=";
      for (std::size_t i = 0; i < iz.flagged.size(); ++i) out << (i ? "," : "") << iz.flagged[i];
      out << " cross_boundary_pairs=" << iz.cross_boundary_pairs << '\n';
      if (!a.ok() || !iz.ok()) status = 1;
    } else if (pf->parsed()) {
      SequenceSpec s = make_sequence(pf_src, 0);
      auto terms = s.terms(s.first_index().value_or(0), pf_count);
      PowerReport r = power_free_check(terms, pf_power, pf_max_period);
      out << (pf_power == 2 ? "squares=" : "cubes=") << r.occurrences.size() << '\n';
      for (std::size_t i = 0; i < r.occurrences.size() && i < 10; ++i)
        out << "  position=" << r.occurrences[i].position << " period=" << r.occurrences[i].period << '\n';
      out << (r.power_free() ? "power-free" : "not power-free") << '\n';
      if (!r.power_free()) status = 1;
    }
    std::cout << out.str();
    return status;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::InvalidArgument:
      case ErrorCode::ParseError:
      case ErrorCode::NotPrime:
      case ErrorCode::WrongDomain:
      case ErrorCode::DomainMismatch:
      case ErrorCode::UnknownName:
      case ErrorCode::OutOfRange:
      case ErrorCode::UnstableSeed:
        return 2;
      default:
        return 1;
    }
  }
}
