#include "numwall/wall.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace numwall {

long window_nullity(const Window& w, long m, long n) {
  return std::min({m - w.m0 + 1, w.m0 + w.g - m, n - w.n0 + 1, w.n0 + w.g - n});
}

long Wall::row_begin(long m) const {
  if (mode_ == WallMode::Periodic) return 0;
  return start_ + std::max(m, 0L);
}

long Wall::row_end(long m) const {
  if (mode_ == WallMode::Periodic) return static_cast<long>(width_);
  return start_ + static_cast<long>(width_) - std::max(m, 0L);
}

bool Wall::contains(long m, long n) const {
  if (m < -2 || m > max_row_) return false;
  if (mode_ == WallMode::Periodic) return true;
  return n >= row_begin(m) && n < row_end(m);
}

namespace {

std::size_t cell_index(const Wall& w, long m, long n) {
  if (w.periodic()) {
    const long t = static_cast<long>(w.width());
    return static_cast<std::size_t>(((n % t) + t) % t);
  }
  return static_cast<std::size_t>(n - w.row_begin(m));
}

[[noreturn]] void out_of_range(long m, long n) {
  throw Error(ErrorCode::OutOfRange, "no wall entry at (" + std::to_string(m) + "," + std::to_string(n) + ")");
}

}  // namespace

DomainValue Wall::at(long m, long n) const {
  if (!contains(m, n)) out_of_range(m, n);
  const std::size_t i = cell_index(*this, m, n);
  return std::visit(
      [&](const auto& rows) {
        const auto& v = rows[static_cast<std::size_t>(m + 2)][i];
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, std::uint32_t>) {
          return DomainValue(domain_, static_cast<long>(v));
        } else {
          return DomainValue(domain_, v);
        }
      },
      rows_);
}

bool Wall::is_zero(long m, long n) const {
  if (!contains(m, n)) out_of_range(m, n);
  const std::size_t i = cell_index(*this, m, n);
  return std::visit(
      [&](const auto& rows) {
        const auto& v = rows[static_cast<std::size_t>(m + 2)][i];
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, std::uint32_t>) {
          return v == 0;
        } else {
          return sgn(v) == 0;
        }
      },
      rows_);
}

std::uint32_t Wall::residue(long m, long n) const {
  if (!contains(m, n)) out_of_range(m, n);
  const auto* rows = std::get_if<std::vector<std::vector<std::uint32_t>>>(&rows_);
  if (rows == nullptr) throw Error(ErrorCode::WrongDomain, "residue() on an integer wall");
  return (*rows)[static_cast<std::size_t>(m + 2)][cell_index(*this, m, n)];
}

const Window* Wall::window_at(long m, long n) const {
  if (m < 0 || !contains(m, n)) return nullptr;
  const auto& ids = window_ids_[static_cast<std::size_t>(m + 2)];
  const std::int32_t id = ids[cell_index(*this, m, n)];
  return id < 0 ? nullptr : &windows_[static_cast<std::size_t>(id)];
}

bool Wall::same_grid(const Wall& o) const {
  return domain_ == o.domain_ && mode_ == o.mode_ && width_ == o.width_ && start_ == o.start_ &&
         max_row_ == o.max_row_ && rows_ == o.rows_;
}

namespace detail {

// Grants the builders and the reader write access to a Wall.
struct WallAccess {
  template <class V>
  static std::vector<std::vector<V>>& rows(Wall& w) {
    return std::get<std::vector<std::vector<V>>>(w.rows_);
  }

  template <class V>
  static void init(Wall& w, Domain d, WallMode mode, std::size_t width, long start, long max_row) {
    w.domain_ = d;
    w.mode_ = mode;
    w.width_ = width;
    w.start_ = start;
    w.max_row_ = max_row;
    w.terminal_row_.reset();
    w.rows_ = std::vector<std::vector<V>>(static_cast<std::size_t>(max_row + 3));
    w.window_ids_.assign(static_cast<std::size_t>(max_row + 3), {});
    w.windows_.clear();
    auto& rows = std::get<std::vector<std::vector<V>>>(w.rows_);
    for (long m = -2; m <= max_row; ++m) {
      const auto size = static_cast<std::size_t>(w.row_end(m) - w.row_begin(m));
      rows[static_cast<std::size_t>(m + 2)].assign(size, V(0));
      w.window_ids_[static_cast<std::size_t>(m + 2)].assign(size, -1);
    }
    for (auto& v : rows[1]) v = V(1);
  }

  static std::vector<std::int32_t>& ids(Wall& w, long m) { return w.window_ids_[static_cast<std::size_t>(m + 2)]; }
  static std::vector<Window>& windows(Wall& w) { return w.windows_; }
  static void set_terminal(Wall& w, long m) { w.terminal_row_ = m; }

  // Assigns window ids to the zeros of row m (m >= 0), opening a window for
  // each zero run whose northern neighbours are nonzero. Returns false when
  // a periodic row is identically zero (terminal).
  template <class V>
  static bool scan_row(Wall& w, long m) {
    auto& rows = std::get<std::vector<std::vector<V>>>(w.rows_);
    const auto& row = rows[static_cast<std::size_t>(m + 2)];
    auto& ids = w.window_ids_[static_cast<std::size_t>(m + 2)];
    const long size = static_cast<long>(row.size());
    if (size == 0) return true;
    auto zero = [&](long i) { return is_zero_value(row[static_cast<std::size_t>(i)]); };

    long first_nonzero = -1;
    for (long i = 0; i < size; ++i) {
      if (!zero(i)) {
        first_nonzero = i;
        break;
      }
    }
    const long begin = w.row_begin(m);
    if (first_nonzero < 0 && w.periodic()) {
      w.terminal_row_ = m;
      return false;
    }

    // Runs are scanned from a nonzero cell so periodic runs never split at
    // the seam. For segments that cell may not exist; start at 0.
    const long origin = w.periodic() ? first_nonzero : 0;
    long i = 0;
    while (i < size) {
      long pos = (origin + i) % size;
      if (!zero(pos)) {
        ++i;
        continue;
      }
      long len = 0;
      while (i + len < size && zero((origin + i + len) % size)) ++len;
      const long a = begin + pos;  // absolute first column
      std::int32_t north_id = -2;
      bool north_mixed = false;
      for (long k = 0; k < len; ++k) {
        const long n = a + k;
        std::int32_t id = -1;
        if (m >= 1 && w.contains(m - 1, n)) {
          const long j = static_cast<long>(cell_index(w, m - 1, n));
          if (is_zero_value(rows[static_cast<std::size_t>(m + 1)][static_cast<std::size_t>(j)])) {
            id = w.window_ids_[static_cast<std::size_t>(m + 1)][static_cast<std::size_t>(j)];
          }
        }
        if (north_id == -2) north_id = id;
        else if (north_id != id) north_mixed = true;
      }
      if (north_mixed) {
        throw Error(ErrorCode::InternalInconsistency,
                    "zero run at row " + std::to_string(m) + " column " + std::to_string(a) + " is not part of a square window");
      }
      std::int32_t id = north_id;
      if (id < 0) {
        Window win;
        win.m0 = m;
        win.n0 = w.periodic() ? pos : a;
        win.g = len;
        win.truncated = !w.periodic() && (pos == 0 || pos + len == size);
        id = static_cast<std::int32_t>(w.windows_.size());
        w.windows_.push_back(win);
      }
      for (long k = 0; k < len; ++k) ids[static_cast<std::size_t>((pos + k) % size)] = id;
      i += len;
    }
    return true;
  }

  static bool is_zero_value(std::uint32_t v) { return v == 0; }
  static bool is_zero_value(const mpz_class& v) { return sgn(v) == 0; }
};

}  // namespace detail

namespace {

using detail::WallAccess;

template <class Ring>
class WallBuilder {
 public:
  using V = typename Ring::Value;
  using F = typename Ring::Fraction;

  WallBuilder(Ring ring, Wall& wall, bool frame) : ring_(std::move(ring)), wall_(wall), frame_(frame) {}

  void run(const std::vector<DomainValue>& row0) {
    auto& rows = WallAccess::rows<V>(wall_);
    auto& r0 = rows[2];
    for (std::size_t i = 0; i < r0.size(); ++i) r0[i] = ring_.from(row0[i]);
    if (!WallAccess::scan_row<V>(wall_, 0)) return;
    note_new_windows();
    for (long m = 1; m <= wall_.max_row(); ++m) {
      compute_row(m);
      const bool live = WallAccess::scan_row<V>(wall_, m);
      note_new_windows();
      if (frame_) validate_active(m);
      if (!live) return;  // terminal: later rows stay zero
    }
  }

 private:
  const V& get(long m, long n) const {
    const auto& rows = WallAccess::rows<V>(const_cast<Wall&>(wall_));
    if (!wall_.contains(m, n)) out_of_range(m, n);
    return rows[static_cast<std::size_t>(m + 2)][cell_index(wall_, m, n)];
  }

  F frac(long m, long n) const { return ring_.to_fraction(get(m, n)); }

  void compute_row(long m) {
    auto& rows = WallAccess::rows<V>(wall_);
    auto& row = rows[static_cast<std::size_t>(m + 2)];
    const auto& north2 = rows[static_cast<std::size_t>(m)];
    const auto& ids2 = WallAccess::ids(wall_, m - 2);
    const long begin = wall_.row_begin(m);
    for (std::size_t i = 0; i < row.size(); ++i) {
      const long n = begin + static_cast<long>(i);
      const std::size_t j2 = cell_index(wall_, m - 2, n);
      const V& below = north2[j2];
      if (!Ring::is_zero(below)) {
        const V& c = get(m - 1, n);
        V num = ring_.sub(ring_.mul(c, c), ring_.mul(get(m - 1, n - 1), get(m - 1, n + 1)));
        try {
          row[i] = ring_.div(num, below);
        } catch (const Error& e) {
          throw Error(ErrorCode::InternalInconsistency,
                      "recurrence failed at (" + std::to_string(m) + "," + std::to_string(n) + "): " + e.what());
        }
        continue;
      }
      if (!frame_) throw ZeroDivisionError(m, n);
      const std::int32_t id = m - 2 >= 0 ? ids2[j2] : -1;
      if (id < 0) {
        throw Error(ErrorCode::InternalInconsistency,
                    "zero at (" + std::to_string(m - 2) + "," + std::to_string(n) + ") outside every window");
      }
      const Window w = WallAccess::windows(wall_)[static_cast<std::size_t>(id)];
      row[i] = window_entry(w, m, n);
    }
  }

  // Entry (m, n) with S(m-2, n) inside window w.
  V window_entry(const Window& w, long m, long n) {
    if (w.truncated) return ring_.zero();
    const long rel = m - w.m0;
    if (rel < w.g) return ring_.zero();
    long off = n - w.n0;
    if (wall_.periodic()) {
      const long t = static_cast<long>(wall_.width());
      off = ((off % t) + t) % t;
    }
    const long k = w.g - off;  // frame index, 1..g
    const long n_abs = w.n0 + off;
    try {
      if (rel == w.g) return south_inner(w, k);
      return south_outer(w, k, m, n_abs);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InternalInconsistency) throw;
      throw Error(ErrorCode::InternalInconsistency,
                  "frame relation failed at (" + std::to_string(m) + "," + std::to_string(n) + "): " + e.what());
    }
  }

  // D_k = (-1)^{gk} B_k C_k / A_k.
  V south_inner(const Window& w, long k) {
    const V& a = get(w.m0 - 1, w.n0 - 1 + k);
    const V& b = get(w.m0 - 1 + k, w.n0 - 1);
    const V& c = get(w.m0 + w.g - k, w.n0 + w.g);
    V d = ring_.div(ring_.mul(b, c), a);
    if ((w.g * k) % 2 != 0) d = ring_.neg(d);
    return d;
  }

  // H_k from  Q E_k/A_k + (-1)^k P F_k/B_k = R H_k/D_k + (-1)^k T G_k/C_k.
  V south_outer(const Window& w, long k, long m, long n) {
    const long m0 = w.m0, n0 = w.n0, g = w.g;
    const F p = ring_.fdiv(frac(m0 - 1, n0), frac(m0 - 1, n0 - 1));
    const F q = ring_.fdiv(frac(m0, n0 - 1), frac(m0 - 1, n0 - 1));
    const F r = ring_.fdiv(frac(m0 - 1, n0 + g), frac(m0, n0 + g));
    F t = ring_.fdiv(ring_.fmul(q, r), p);  // PT/QR = (-1)^g
    if (g % 2 != 0) t = ring_.fneg(t);

    const F a = frac(m0 - 1, n0 - 1 + k);
    const F b = frac(m0 - 1 + k, n0 - 1);
    const F c = frac(m0 + g - k, n0 + g);
    const F d = frac(m0 + g, n0 + g - k);
    const F e = frac(m0 - 2, n0 - 1 + k);
    const F f = frac(m0 - 1 + k, n0 - 2);
    const F gg = frac(m0 + g - k, n0 + g + 1);

    F alt = ring_.fsub(ring_.fdiv(ring_.fmul(p, f), b), ring_.fdiv(ring_.fmul(t, gg), c));
    if (k % 2 != 0) alt = ring_.fneg(alt);
    const F lhs = ring_.fadd(ring_.fdiv(ring_.fmul(q, e), a), alt);
    const F h = ring_.fmul(ring_.fdiv(d, r), lhs);
    (void)m;
    (void)n;
    return ring_.from_fraction(h);
  }

  void note_new_windows() {
    const auto& wins = WallAccess::windows(wall_);
    for (; seen_ < wins.size(); ++seen_) {
      if (!wins[seen_].truncated) active_.push_back(seen_);
    }
  }

  bool nonzero_or_absent(long m, long n) const { return !wall_.contains(m, n) || !Ring::is_zero(get(m, n)); }

  // Checks that each open window stays a g x g square with a nonzero frame.
  void validate_active(long m) {
    const auto& wins = WallAccess::windows(wall_);
    std::size_t keep = 0;
    for (std::size_t idx : active_) {
      const Window& w = wins[idx];
      bool ok = true;
      if (m == w.m0) {
        for (long n = w.n0 - 1; n <= w.n0 + w.g; ++n) ok = ok && nonzero_or_absent(m - 1, n);
      }
      if (m <= w.m0 + w.g - 1) {
        ok = ok && nonzero_or_absent(m, w.n0 - 1) && nonzero_or_absent(m, w.n0 + w.g);
        for (long n = w.n0; n < w.n0 + w.g && ok; ++n) ok = !wall_.contains(m, n) || Ring::is_zero(get(m, n));
      } else if (m == w.m0 + w.g) {
        for (long n = w.n0 - 1; n <= w.n0 + w.g; ++n) ok = ok && nonzero_or_absent(m, n);
      }
      if (!ok) {
        throw Error(ErrorCode::InternalInconsistency, "window at (" + std::to_string(w.m0) + "," + std::to_string(w.n0) +
                                                          ") size " + std::to_string(w.g) + " is not a framed square at row " +
                                                          std::to_string(m));
      }
      if (m < w.m0 + w.g) active_[keep++] = idx;
    }
    active_.resize(keep);
  }

  Ring ring_;
  Wall& wall_;
  bool frame_;
  std::size_t seen_ = 0;
  std::vector<std::size_t> active_;
};

Wall build(const std::vector<DomainValue>& row0, Domain d, WallMode mode, long start, long max_row, bool frame,
           const WallOptions& opts) {
  if (max_row < 0) throw Error(ErrorCode::InvalidArgument, "max_row must be >= 0");
  if (row0.empty()) throw Error(ErrorCode::InvalidArgument, "empty sequence");
  const std::size_t width = row0.size();
  if (mode == WallMode::Segment) max_row = std::min(max_row, static_cast<long>((width - 1) / 2));
  if (d.is_integers()) max_row = std::min(max_row, opts.integer_row_cap);
  Wall wall;
  if (d.is_integers()) {
    WallAccess::init<mpz_class>(wall, d, mode, width, start, max_row);
    WallBuilder<IntegerRing>(IntegerRing(), wall, frame).run(row0);
  } else {
    WallAccess::init<std::uint32_t>(wall, d, mode, width, start, max_row);
    WallBuilder<PrimeField>(PrimeField(d), wall, frame).run(row0);
  }
  return wall;
}

Wall build_from_spec(const SequenceSpec& seq, long max_row, bool frame, const WallOptions& opts) {
  if (const auto* p = std::get_if<PeriodicWord>(&seq.source())) {
    return build(p->digits, seq.domain(), WallMode::Periodic, 0, max_row, frame, opts);
  }
  if (const auto* s = std::get_if<FiniteSegment>(&seq.source())) {
    return build(s->digits, seq.domain(), WallMode::Segment, s->start, max_row, frame, opts);
  }
  throw Error(ErrorCode::InvalidArgument, "sequence " + seq.describe() + " needs an explicit segment range");
}

}  // namespace

Wall wall_frame(const SequenceSpec& seq, long max_row, const WallOptions& opts) {
  return build_from_spec(seq, max_row, true, opts);
}

Wall wall_frame(const SequenceSpec& seq, long max_row, long start, std::size_t length, const WallOptions& opts) {
  return build(seq.terms(start, length), seq.domain(), WallMode::Segment, start, max_row, true, opts);
}

Wall wall_naive(const SequenceSpec& seq, long max_row, const WallOptions& opts) {
  return build_from_spec(seq, max_row, false, opts);
}

Wall wall_naive(const SequenceSpec& seq, long max_row, long start, std::size_t length, const WallOptions& opts) {
  return build(seq.terms(start, length), seq.domain(), WallMode::Segment, start, max_row, false, opts);
}

namespace {

mpz_class bareiss_determinant(std::vector<std::vector<mpz_class>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(a[k][k]) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && sgn(a[piv][k]) == 0) ++piv;
      if (piv == n) return 0;
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class v = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

std::uint32_t gauss_determinant(std::vector<std::vector<std::uint32_t>> a, const PrimeField& f) {
  const std::size_t n = a.size();
  std::uint32_t det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv][k] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      std::swap(a[k], a[piv]);
      det = f.neg(det);
    }
    det = f.mul(det, a[k][k]);
    const std::uint32_t inv = f.inverse(a[k][k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      const std::uint32_t factor = f.mul(a[i][k], inv);
      for (std::size_t j = k; j < n; ++j) a[i][j] = f.sub(a[i][j], f.mul(factor, a[k][j]));
    }
  }
  return det;
}

}  // namespace

DomainValue toeplitz_determinant(const std::vector<DomainValue>& terms) {
  if (terms.empty() || terms.size() % 2 == 0) {
    throw Error(ErrorCode::InvalidArgument, "Toeplitz determinant needs 2m+1 terms");
  }
  const Domain d = terms.front().domain();
  const std::size_t size = (terms.size() + 1) / 2;  // m + 1
  const std::size_t mid = size - 1;                  // index of S_n
  if (d.is_integers()) {
    std::vector<std::vector<mpz_class>> a(size, std::vector<mpz_class>(size));
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j) a[i][j] = terms[mid + j - i].value();
    return DomainValue(d, bareiss_determinant(std::move(a)));
  }
  PrimeField f(d);
  std::vector<std::vector<std::uint32_t>> a(size, std::vector<std::uint32_t>(size));
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) a[i][j] = f.from(terms[mid + j - i]);
  return DomainValue(d, static_cast<long>(gauss_determinant(std::move(a), f)));
}

DomainValue hankel_oracle(const SequenceSpec& seq, long m, long n) {
  if (m < -2) throw Error(ErrorCode::InvalidArgument, "row below -2");
  if (m == -2) return DomainValue(seq.domain(), 0L);
  if (m == -1) return DomainValue(seq.domain(), 1L);
  return toeplitz_determinant(seq.terms(n - m, static_cast<std::size_t>(2 * m + 1)));
}

Ratio::Ratio(Domain d, mpq_class v) : domain_(d), value_(std::move(v)) {
  value_.canonicalize();
  if (d.is_prime_field()) {
    mpz_class p(d.modulus());
    mpz_class num = value_.get_num() % p;
    mpz_class den = value_.get_den() % p;
    if (sgn(den) == 0) throw Error(ErrorCode::DivisionByZero, "ratio with zero denominator mod p");
    DomainValue q = exact_divide(DomainValue(d, num), DomainValue(d, den));
    value_ = mpq_class(q.value());
  }
}

Ratio Ratio::of(const DomainValue& num, const DomainValue& den) {
  if (!(num.domain() == den.domain())) throw Error(ErrorCode::DomainMismatch, "ratio across domains");
  if (den.is_zero()) throw Error(ErrorCode::DivisionByZero, "ratio with zero denominator");
  return Ratio(num.domain(), mpq_class(num.value(), den.value()));
}

Ratio operator*(const Ratio& a, const Ratio& b) {
  if (!(a.domain_ == b.domain_)) throw Error(ErrorCode::DomainMismatch, "ratio across domains");
  return Ratio(a.domain_, a.value_ * b.value_);
}

Ratio operator/(const Ratio& a, const Ratio& b) {
  if (!(a.domain_ == b.domain_)) throw Error(ErrorCode::DomainMismatch, "ratio across domains");
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "ratio division by zero");
  return Ratio(a.domain_, a.value_ / b.value_);
}

WindowFrames window_frames(const Wall& wall, const Window& w) {
  WindowFrames f;
  f.g = w.g;
  const long m0 = w.m0, n0 = w.n0, g = w.g;
  auto fetch = [&](long m, long n) -> std::optional<DomainValue> {
    if (!wall.contains(m, n)) return std::nullopt;
    return wall.at(m, n);
  };
  for (long k = 0; k <= g + 1; ++k) {
    f.a.push_back(fetch(m0 - 1, n0 - 1 + k));
    f.b.push_back(fetch(m0 - 1 + k, n0 - 1));
    f.c.push_back(fetch(m0 + g - k, n0 + g));
    f.d.push_back(fetch(m0 + g, n0 + g - k));
    f.e.push_back(fetch(m0 - 2, n0 - 1 + k));
    f.f.push_back(fetch(m0 - 1 + k, n0 - 2));
    f.gg.push_back(fetch(m0 + g - k, n0 + g + 1));
    f.h.push_back(fetch(m0 + g + 1, n0 + g - k));
  }
  return f;
}

WindowFrames block_frames(const Wall& wall, long m, long n) {
  return window_frames(wall, Window{m + 1, n + 1, 0, false});
}

namespace {

Ratio edge_ratio(const std::vector<std::optional<DomainValue>>& edge, const char* name) {
  for (std::size_t k = 0; k + 1 < edge.size(); ++k) {
    if (edge[k] && edge[k + 1]) {
      if (edge[k]->is_zero()) throw Error(ErrorCode::InternalInconsistency, std::string("zero on inner frame ") + name);
      return Ratio::of(*edge[k + 1], *edge[k]);
    }
  }
  throw Error(ErrorCode::IncompleteFrame, std::string("inner frame ") + name + " lacks two consecutive entries");
}

const DomainValue& need(const std::optional<DomainValue>& v, const char* name, long k) {
  if (!v) throw Error(ErrorCode::IncompleteFrame, std::string("missing ") + name + "_" + std::to_string(k));
  return *v;
}

}  // namespace

FrameRatios window_ratios(const WindowFrames& f) {
  return FrameRatios{edge_ratio(f.a, "A"), edge_ratio(f.b, "B"), edge_ratio(f.c, "C"), edge_ratio(f.d, "D")};
}

std::vector<DomainValue> cross_window(const WindowFrames& f) {
  const FrameRatios r = window_ratios(f);
  std::vector<DomainValue> h;
  for (long k = 0; k <= f.g + 1; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const DomainValue& a = need(f.a[i], "A", k);
    const DomainValue& b = need(f.b[i], "B", k);
    const DomainValue& c = need(f.c[i], "C", k);
    const DomainValue& d = need(f.d[i], "D", k);
    const DomainValue& e = need(f.e[i], "E", k);
    const DomainValue& ff = need(f.f[i], "F", k);
    const DomainValue& g = need(f.gg[i], "G", k);
    const Domain dom = a.domain();
    auto frac = [&](const DomainValue& v) { return Ratio(dom, mpq_class(v.value())); };
    Ratio alt = r.p * frac(ff) / frac(b);
    Ratio east = r.t * frac(g) / frac(c);
    mpq_class inner = (r.q * frac(e) / frac(a)).value();
    inner += (k % 2 == 0 ? 1 : -1) * (alt.value() - east.value());
    Ratio hk = Ratio(dom, inner) * frac(d) / r.r;
    if (hk.value().get_den() != 1) throw Error(ErrorCode::InexactDivision, "H_" + std::to_string(k) + " is not integral");
    h.emplace_back(dom, hk.value().get_num());
  }
  return h;
}

void write_wall(std::ostream& out, const Wall& wall) {
  out << "#wall mod=" << wall.domain().to_string() << " mode=" << (wall.periodic() ? "periodic " : "segment ")
      << wall.width();
  if (!wall.periodic() && wall.start() != 0) out << " start=" << wall.start();
  out << " rows=" << wall.max_row() << '\n';
  const long lo = wall.periodic() ? 0 : wall.start();
  const long hi = lo + static_cast<long>(wall.width());
  for (long m = -2; m <= wall.max_row(); ++m) {
    for (long n = lo; n < hi; ++n) {
      if (n != lo) out << ' ';
      if (wall.contains(m, n)) out << wall.at(m, n).value().get_str();
      else out << '.';
    }
    out << '\n';
  }
}

std::string format_wall(const Wall& wall) {
  std::ostringstream out;
  write_wall(out, wall);
  return out.str();
}

namespace {

template <class V>
void fill_from_tokens(Wall& wall, const std::vector<std::vector<std::string>>& lines, const Domain& d) {
  auto& rows = WallAccess::rows<V>(wall);
  const long lo = wall.periodic() ? 0 : wall.start();
  for (long m = -2; m <= wall.max_row(); ++m) {
    const auto& toks = lines[static_cast<std::size_t>(m + 2)];
    if (toks.size() != wall.width()) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(m) + " has " + std::to_string(toks.size()) + " entries");
    }
    for (std::size_t i = 0; i < toks.size(); ++i) {
      const long n = lo + static_cast<long>(i);
      const bool inside = wall.contains(m, n);
      if ((toks[i] == ".") == inside) {
        throw Error(ErrorCode::ParseError, "row " + std::to_string(m) + " column " + std::to_string(n) + ": '.' mismatch");
      }
      if (!inside) continue;
      mpz_class v;
      if (v.set_str(toks[i], 10) != 0) throw Error(ErrorCode::ParseError, "bad entry '" + toks[i] + "'");
      DomainValue dv(d, v);
      if (dv.value() != v) throw Error(ErrorCode::ParseError, "non-canonical entry '" + toks[i] + "'");
      if constexpr (std::is_same_v<V, std::uint32_t>) {
        rows[static_cast<std::size_t>(m + 2)][cell_index(wall, m, n)] = static_cast<std::uint32_t>(v.get_ui());
      } else {
        rows[static_cast<std::size_t>(m + 2)][cell_index(wall, m, n)] = v;
      }
    }
  }
  for (long m = 0; m <= wall.max_row(); ++m) {
    if (!WallAccess::scan_row<V>(wall, m)) {
      for (long r = m + 1; r <= wall.max_row(); ++r) {
        for (long n = wall.row_begin(r); n < wall.row_end(r); ++n) {
          if (!wall.is_zero(r, n)) throw Error(ErrorCode::ParseError, "nonzero entry below terminal zero row");
        }
      }
      break;
    }
  }
}

}  // namespace

Wall read_wall(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorCode::ParseError, "empty wall dump");
  std::istringstream hs(header);
  std::string tag, mod, mode;
  std::size_t width = 0;
  hs >> tag >> mod >> mode >> width;
  if (tag != "#wall" || mod.rfind("mod=", 0) != 0 || (mode != "mode=periodic" && mode != "mode=segment") || width == 0) {
    throw Error(ErrorCode::ParseError, "bad wall header '" + header + "'");
  }
  long start = 0;
  long rows = -1;
  std::string tok;
  while (hs >> tok) {
    if (tok.rfind("start=", 0) == 0) start = std::stol(tok.substr(6));
    else if (tok.rfind("rows=", 0) == 0) rows = std::stol(tok.substr(5));
    else throw Error(ErrorCode::ParseError, "unknown header field '" + tok + "'");
  }
  if (rows < 0) throw Error(ErrorCode::ParseError, "missing rows= in header");
  const Domain d = Domain::parse(mod.substr(4));
  const WallMode wm = mode == "mode=periodic" ? WallMode::Periodic : WallMode::Segment;

  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (static_cast<long>(lines.size()) < rows + 3 && std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> toks;
    while (ls >> tok) toks.push_back(tok);
    lines.push_back(std::move(toks));
  }
  if (static_cast<long>(lines.size()) != rows + 3) throw Error(ErrorCode::ParseError, "truncated wall dump");

  Wall wall;
  if (d.is_integers()) {
    WallAccess::init<mpz_class>(wall, d, wm, width, start, rows);
    fill_from_tokens<mpz_class>(wall, lines, d);
  } else {
    WallAccess::init<std::uint32_t>(wall, d, wm, width, start, rows);
    fill_from_tokens<std::uint32_t>(wall, lines, d);
  }
  return wall;
}

Wall parse_wall(const std::string& text) {
  std::istringstream in(text);
  return read_wall(in);
}

}  // namespace numwall
