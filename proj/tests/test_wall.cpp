#include <random>
#include <sstream>

#include "doctest.h"
#include "numwall/analysis.hpp"
#include "numwall/wall.hpp"

using namespace numwall;

namespace {

template <typename F>
void expect_code(F&& f, ErrorCode code) {
  try {
    f();
    FAIL("no error raised");
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

SequenceSpec random_periodic(std::mt19937_64& rng, Domain d, std::size_t t, long lo, long hi) {
  std::vector<DomainValue> w;
  for (std::size_t i = 0; i < t; ++i) w.emplace_back(d, lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)));
  return SequenceSpec::periodic(std::move(w));
}

// Every cell against the determinant oracle.
long oracle_mismatches(const Wall& w, const SequenceSpec& seq) {
  long bad = 0;
  for (long m = 0; m <= w.max_row(); ++m) {
    for (long n = w.row_begin(m); n < w.row_end(m); ++n) {
      if (!(w.at(m, n) == hankel_oracle(seq, m, n))) ++bad;
    }
  }
  return bad;
}

Ratio sign_ratio(const Domain& d, long s) { return Ratio(d, mpq_class(s)); }

}  // namespace

TEST_CASE("determinant oracle examples") {
  auto ones = SequenceSpec::periodic("1", Domain::prime_field(5));
  CHECK(hankel_oracle(ones, -1, 3).value() == 1);
  CHECK(hankel_oracle(ones, -2, 3).value() == 0);
  CHECK(hankel_oracle(ones, 1, 0).is_zero());
  auto t = builtin_sequence("thue-morse");
  CHECK(hankel_oracle(t, 1, 1).value() == 1);
  auto seg = SequenceSpec::segment(t.terms(0, 5));
  expect_code([&] { hankel_oracle(seg, 2, 1); }, ErrorCode::OutOfRange);
  const Domain z = Domain::integers();
  CHECK(toeplitz_determinant({DomainValue(z, 2), DomainValue(z, 3), DomainValue(z, 5)}).value() == 9 - 10);
}

TEST_CASE("naive recurrence examples") {
  Wall one = wall_naive(SequenceSpec::periodic("1", Domain::prime_field(2)), 3);
  for (long n = 0; n < 1; ++n) CHECK(one.at(0, n).value() == 1);
  CHECK(one.terminal_zero_row() == 1);
  for (long m = 1; m <= one.max_row(); ++m) CHECK(one.is_zero(m, 0));

  Wall geo = wall_naive(SequenceSpec::periodic("124", Domain::prime_field(7)), 2);
  CHECK(geo.terminal_zero_row() == 1);
  for (long n = 0; n < 3; ++n) CHECK(geo.is_zero(1, n));

  auto rue = builtin_sequence("rueppel");
  try {
    wall_naive(rue, 8, 0, 17);
    FAIL("expected a zero division");
  } catch (const ZeroDivisionError& e) {
    CHECK(e.m() == 2);
    CHECK(e.n() == 2);
  }
}

TEST_CASE("naive and frame agree where the naive route succeeds") {
  std::mt19937_64 rng(11);
  int compared = 0;
  for (int i = 0; i < 200 && compared < 40; ++i) {
    auto seq = random_periodic(rng, Domain::prime_field(7), 3 + rng() % 12, 0, 6);
    try {
      Wall a = wall_naive(seq, 6);
      CHECK(a.same_grid(wall_frame(seq, 6)));
      ++compared;
    } catch (const ZeroDivisionError&) {
    }
  }
  CHECK(compared > 10);
}

TEST_CASE("frame algorithm matches the oracle on random walls") {
  std::mt19937_64 rng(5);
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull}) {
    for (int i = 0; i < 15; ++i) {
      auto seq = random_periodic(rng, Domain::prime_field(p), 1 + rng() % 16, 0, static_cast<long>(p) - 1);
      Wall w = wall_frame(seq, 20);
      CHECK(oracle_mismatches(w, seq) == 0);
    }
  }
  for (int i = 0; i < 6; ++i) {
    auto seq = random_periodic(rng, Domain::integers(), 1 + rng() % 8, -2, 2);
    Wall w = wall_frame(seq, 10);
    CHECK(oracle_mismatches(w, seq) == 0);
  }
  // Segment mode over a sparse sequence, which is rich in windows.
  std::vector<DomainValue> terms;
  for (int i = 0; i < 61; ++i) terms.emplace_back(Domain::prime_field(2), rng() % 5 == 0 ? 1 : 0);
  auto seg = SequenceSpec::segment(terms, -7);
  Wall w = wall_frame(seg, 30);
  CHECK(w.max_row() == 30);
  CHECK(oracle_mismatches(w, seg) == 0);
}

TEST_CASE("named walls match the oracle") {
  for (const char* name : {"rueppel", "knight", "pagoda", "thue-morse", "zigzag", "thue-rook"}) {
    auto seq = builtin_sequence(name);
    Wall w = wall_frame(seq, 40, 0, 81);
    CHECK_MESSAGE(oracle_mismatches(w, seq) == 0, name);
  }
}

TEST_CASE("Rueppel wall crosses its windows") {
  Wall w = wall_frame(builtin_sequence("rueppel"), 64, 0, 129);
  CHECK(w.max_row() == 64);
  std::map<long, long> sizes;
  for (const auto& x : w.windows()) {
    if (!x.truncated) ++sizes[x.g];
  }
  // Complete windows are 2^k - 1 on a side.
  for (long g : {1L, 3L, 7L, 15L}) CHECK(sizes.count(g) == 1);
  for (const auto& [g, c] : sizes) CHECK(std::has_single_bit(static_cast<unsigned long>(g + 1)));
}

TEST_CASE("ternary Pagoda has isolated zeros") {
  Wall w = wall_frame(builtin_sequence("pagoda"), 256, 0, 1024);
  long complete = 0;
  for (const auto& x : w.windows()) {
    if (x.truncated) continue;
    ++complete;
    CHECK(x.g == 1);
  }
  CHECK(complete > 0);
}

TEST_CASE("[111010] wall") {
  Wall w = wall_frame(SequenceSpec::periodic("111010", Domain::prime_field(2)), 8);
  // Order 5: rows -1 .. 4 are the nonzero rows.
  CHECK(w.terminal_zero_row() == 5);
  for (const auto& x : w.windows()) CHECK(x.g < 2);
  for (long m = 5; m <= w.max_row(); ++m)
    for (long n = 0; n < 6; ++n) CHECK(w.is_zero(m, n));
}

TEST_CASE("wall invariants") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 40; ++i) {
    const std::uint64_t p = (i % 2) ? 2 : 3;
    const std::size_t t = 1 + rng() % 16;
    auto seq = random_periodic(rng, Domain::prime_field(p), t, 0, static_cast<long>(p) - 1);
    Wall w = wall_frame(seq, 24);
    PrimeField f(static_cast<std::uint32_t>(p));
    // Row bound for period t: at most t + 1 nonzero rows counting row -1.
    if (w.terminal_zero_row()) CHECK(*w.terminal_zero_row() <= static_cast<long>(t));
    for (long m = 0; m <= w.max_row(); ++m) {
      for (long n = 0; n < static_cast<long>(t); ++n) {
        // Zeros decompose into the recorded windows.
        if (w.is_zero(m, n) && (!w.terminal_zero_row() || m < *w.terminal_zero_row())) {
          const Window* win = w.window_at(m, n);
          REQUIRE(win != nullptr);
          CHECK(window_nullity(*win, m, (n - win->n0 + static_cast<long>(t)) % static_cast<long>(t) + win->n0) >= 1);
        }
        if (m >= 1 && m < w.max_row()) {
          const long tl = static_cast<long>(t);
          auto v = [&](long mm, long nn) { return w.residue(mm, ((nn % tl) + tl) % tl); };
          CHECK(f.mul(v(m, n), v(m, n)) == f.add(f.mul(v(m + 1, n), v(m - 1, n)), f.mul(v(m, n + 1), v(m, n - 1))));
        }
      }
    }
    for (const auto& x : w.windows()) {
      for (long dm = 0; dm < x.g; ++dm)
        for (long dn = 0; dn < x.g; ++dn) CHECK(w.is_zero(x.m0 + dm, (x.n0 + dn) % static_cast<long>(t)));
    }
    CHECK(check_frame_laws(w).ok());
  }
}

TEST_CASE("segment Sylvester identity over Z") {
  auto seq = builtin_sequence("thue-rook", Domain::integers());
  Wall w = wall_frame(seq, 12, 0, 40);
  for (long m = 0; m < w.max_row(); ++m) {
    for (long n = w.row_begin(m + 1); n < w.row_end(m + 1); ++n) {
      mpz_class lhs = w.at(m, n).value() * w.at(m, n).value();
      mpz_class rhs = w.at(m + 1, n).value() * (m == 0 ? mpz_class(1) : w.at(m - 1, n).value()) +
                      w.at(m, n + 1).value() * w.at(m, n - 1).value();
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("integer walls are capped") {
  Wall w = wall_frame(SequenceSpec::periodic("1 2 0 1 1 0 2 1 1 0 1 2 1 0 0 1 1 1 2 0 1 0 0 1 1 2 0 1 0 1 1 0 1 2 0", Domain::integers()), 100);
  CHECK(w.max_row() <= 32);
}

TEST_CASE("window ratios") {
  Wall pag = wall_frame(builtin_sequence("pagoda"), 64, 0, 256);
  long seen = 0;
  for (const auto& x : pag.windows()) {
    if (x.truncated || x.m0 + x.g + 1 > pag.max_row()) continue;
    FrameRatios r = window_ratios(window_frames(pag, x));
    CHECK((r.p * r.t / (r.q * r.r)) == sign_ratio(pag.domain(), -1));
    ++seen;
  }
  CHECK(seen > 10);

  std::mt19937_64 rng(3);
  long g2 = 0;
  for (int i = 0; i < 50; ++i) {
    auto seq = random_periodic(rng, Domain::prime_field(2), 16, 0, 1);
    Wall w = wall_frame(seq, 17);
    for (const auto& x : w.windows()) {
      if (x.g != 2 || x.m0 + x.g + 1 > w.max_row()) continue;
      FrameRatios r = window_ratios(window_frames(w, x));
      CHECK((r.p * r.t / (r.q * r.r)) == sign_ratio(w.domain(), 1));
      ++g2;
    }
  }
  CHECK(g2 > 0);

  WindowFrames empty;
  empty.g = 1;
  expect_code([&] { window_ratios(empty); }, ErrorCode::IncompleteFrame);
}

TEST_CASE("outer frame relation") {
  auto knight = builtin_sequence("knight");
  Wall kw = wall_frame(knight, 20, 0, 41);
  const Window* first = nullptr;
  std::vector<DomainValue> h;
  for (const auto& x : kw.windows()) {
    if (x.truncated) continue;
    try {
      h = cross_window(window_frames(kw, x));
      first = &x;
      break;
    } catch (const Error& e) {
      REQUIRE(e.code() == ErrorCode::IncompleteFrame);
    }
  }
  REQUIRE(first != nullptr);
  REQUIRE(h.size() == static_cast<std::size_t>(first->g + 2));
  for (long k = 0; k < first->g + 2; ++k) {
    CHECK(h[static_cast<std::size_t>(k)] == hankel_oracle(knight, first->m0 + first->g + 1, first->n0 + first->g - k));
  }

  // Degenerate size-0 window: the relation is the Sylvester step.
  auto seq = builtin_sequence("thue-rook", Domain::integers());
  Wall zw = wall_frame(seq, 8, 0, 30);
  long checked = 0;
  for (long m = 0; m + 2 <= zw.max_row(); ++m) {
    for (long n = zw.row_begin(m + 2); n + 1 < zw.row_end(m + 2); ++n) {
      WindowFrames f = block_frames(zw, m, n);
      bool usable = true;
      for (const auto& a : f.a) usable = usable && a && !a->is_zero();
      for (const auto& b : f.b) usable = usable && b && !b->is_zero();
      for (const auto& c : f.c) usable = usable && c && !c->is_zero();
      for (const auto& e : f.e) usable = usable && e;
      for (const auto& ff : f.f) usable = usable && ff;
      for (const auto& g : f.gg) usable = usable && g;
      if (!usable) continue;
      auto hh = cross_window(f);
      for (long k = 0; k < 2; ++k) CHECK(hh[static_cast<std::size_t>(k)] == zw.at(m + 2, n + 1 - k));
      ++checked;
    }
  }
  CHECK(checked > 20);
}

TEST_CASE("dump round-trip") {
  for (const Wall& w : {wall_frame(builtin_sequence("pagoda"), 30, -5, 70),
                        wall_frame(SequenceSpec::periodic("111010", Domain::prime_field(2)), 8),
                        wall_frame(builtin_sequence("thue-rook", Domain::integers()), 10, 0, 25)}) {
    std::string text = format_wall(w);
    Wall back = parse_wall(text);
    CHECK(back.same_grid(w));
    CHECK(back.windows() == w.windows());
    CHECK(format_wall(back) == text);
  }
  std::string text = format_wall(wall_frame(builtin_sequence("pagoda"), 3, 0, 9));
  CHECK(text.rfind("#wall mod=3 mode=segment 9 rows=3\n", 0) == 0);
  expect_code([] { parse_wall("#wall mod=3 mode=segment 3 rows=0\n0 0 0\n1 1 1\n1 2 x\n"); }, ErrorCode::ParseError);
  expect_code([] { parse_wall("#wall mod=3 mode=segment 3 rows=0\n0 0 0\n1 1 1\n1 2 5\n"); }, ErrorCode::ParseError);
}
