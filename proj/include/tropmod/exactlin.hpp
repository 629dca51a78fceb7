#pragma once

#include <tropmod/arith.hpp>

#include <algorithm>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace tropmod {

// Dense row-major matrix over an exact coefficient type (Int, Rat or chk64).
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<std::size_t>(rows) * cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
  }
  Matrix(int rows, int cols, std::vector<T> entries) : r_(rows), c_(cols), a_(std::move(entries)) {
    if (a_.size() != static_cast<std::size_t>(rows) * cols)
      throw std::invalid_argument("Matrix: entry count does not match dimensions");
  }

  static Matrix identity(int k) {
    Matrix m(k, k);
    for (int i = 0; i < k; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }

  T& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * c_ + j]; }
  const T& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * c_ + j]; }

  void swap_rows(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < c_; ++k) std::swap((*this)(i, k), (*this)(j, k));
  }
  void swap_cols(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < r_; ++k) std::swap((*this)(k, i), (*this)(k, j));
  }

  T* data() { return a_.data(); }
  const T* data() const { return a_.data(); }

 private:
  int r_ = 0, c_ = 0;
  std::vector<T> a_;
};

using IntMatrix = Matrix<Int>;
using RatVector = std::vector<Rat>;

struct SNFResult {
  std::vector<Int> divisors;  // positive, each dividing the next
  int rank = 0;
};

namespace detail {

// Raised when the plain Smith reduction exceeds its pass budget; the caller
// then switches to the modular variant, whose entries stay bounded.
struct snf_budget_exhausted {};

// Reduce into the balanced residue system (-m/2, m/2], m > 0.
template <class T>
T balanced_mod(const T& x, const T& m) {
  T r = x % m;
  if (r < T(0)) r += m;
  if (m < r + r) r -= m;
  return r;
}

inline int bit_len(const Int& x) {
  if (x.is_zero()) return 0;
  return static_cast<int>(boost::multiprecision::msb(x < 0 ? Int(-x) : x)) + 1;
}

// In-place Smith reduction via gcd pivoting. |pivot| strictly decreases on
// every restart, so the dance terminates, but without a modulus the off-pivot
// entries can blow up doubly exponentially. `budget` caps the restarts and a
// bit-length watchdog aborts runaway bignum growth; on either trigger the
// caller falls back to the modular run (mod != nullptr), where every entry is
// kept balanced mod M and growth is impossible. Writes the diagonal values it
// froze (not yet gcd-adjusted for the modular case) and returns their count.
template <class T>
int snf_dance(T* a, int rows, int cols, std::vector<T>& diag, const T* mod, long budget) {
  auto at = [&](int i, int j) -> T& { return a[static_cast<std::size_t>(i) * cols + j]; };
  auto swap_rows = [&](int i, int j) {
    if (i != j)
      for (int k = 0; k < cols; ++k) std::swap(at(i, k), at(j, k));
  };
  auto swap_cols = [&](int i, int j) {
    if (i != j)
      for (int k = 0; k < rows; ++k) std::swap(at(k, i), at(k, j));
  };
  auto reduce = [&](T& x) {
    if (mod) x = balanced_mod(x, *mod);
  };

  if (mod)
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) reduce(at(i, j));

  // watchdog threshold for the unreduced bignum run; chk64 self-limits by
  // overflowing and the modular run is bounded by construction
  long size_limit = 0;
  if constexpr (std::is_same_v<T, Int>) {
    if (!mod) {
      int b0 = 1;
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) b0 = std::max(b0, bit_len(a[static_cast<std::size_t>(i) * cols + j]));
      size_limit = 256 + 8L * (b0 + 8) * std::min(rows, cols);
    }
  }
  auto oversized = [&](int k) {
    if constexpr (std::is_same_v<T, Int>) {
      if (!mod)
        for (int i = k; i < rows; ++i)
          for (int j = k; j < cols; ++j)
            if (bit_len(at(i, j)) > size_limit) return true;
    }
    return false;
  };

  diag.clear();
  const int kmax = std::min(rows, cols);
  for (int k = 0; k < kmax; ++k) {
    int pi = -1, pj = -1;
    for (int i = k; i < rows; ++i)
      for (int j = k; j < cols; ++j)
        if (!is_zero(at(i, j)) && (pi < 0 || abs_less(at(i, j), at(pi, pj)))) pi = i, pj = j;
    if (pi < 0) break;
    swap_rows(k, pi);
    swap_cols(k, pj);

    for (;;) {
      if (--budget < 0) throw snf_budget_exhausted{};
      bool moved = false;
      for (int i = k + 1; i < rows; ++i) {
        if (is_zero(at(i, k))) continue;
        T q = at(i, k) / at(k, k);
        if (!is_zero(q))
          for (int j = k; j < cols; ++j) {
            at(i, j) -= q * at(k, j);
            reduce(at(i, j));
          }
        if (!is_zero(at(i, k))) {
          swap_rows(i, k);  // remainder is a smaller pivot
          moved = true;
        }
      }
      for (int j = k + 1; j < cols; ++j) {
        if (is_zero(at(k, j))) continue;
        T q = at(k, j) / at(k, k);
        if (!is_zero(q))
          for (int i = k; i < rows; ++i) {
            at(i, j) -= q * at(i, k);
            reduce(at(i, j));
          }
        if (!is_zero(at(k, j))) {
          swap_cols(j, k);
          moved = true;
        }
      }
      if (oversized(k)) throw snf_budget_exhausted{};
      if (moved) continue;

      // pivot must divide the remaining block before it can be frozen
      int bi = -1;
      for (int i = k + 1; i < rows && bi < 0; ++i)
        for (int j = k + 1; j < cols; ++j)
          if (!is_zero(at(i, j) % at(k, k))) {
            bi = i;
            break;
          }
      if (bi < 0) break;
      for (int j = k; j < cols; ++j) {
        at(k, j) += at(bi, j);
        reduce(at(k, j));
      }
    }
    diag.push_back(abs_val(at(k, k)));
  }
  return static_cast<int>(diag.size());
}

inline bool fits_int64(const Int& x) {
  static const Int lo = std::numeric_limits<std::int64_t>::min();
  static const Int hi = std::numeric_limits<std::int64_t>::max();
  return x >= lo && x <= hi;
}

inline std::optional<Matrix<chk64>> to_chk64(const IntMatrix& a) {
  Matrix<chk64> m(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      if (!fits_int64(a(i, j))) return std::nullopt;
      m(i, j) = chk64(static_cast<std::int64_t>(a(i, j)));
    }
  return m;
}

// Fraction-free (Bareiss) row echelon. Pivots are chosen among the first
// `pivot_limit` columns only; later columns are carried along, which lets the
// same kernel run consistency checks on augmented systems. Entries after step
// k are (k+1)-minors of the input, so intermediate growth is bounded by the
// largest minor and every division is exact.
template <class T>
struct EchelonResult {
  Matrix<T> m;
  std::vector<int> pivot_cols;
  int rank = 0;
};

template <class T>
EchelonResult<T> bareiss(Matrix<T> m, int pivot_limit) {
  const int rows = m.rows(), cols = m.cols();
  T prev = T(1);
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < pivot_limit && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (!is_zero(m(i, c))) {
        p = i;
        break;
      }
    if (p < 0) continue;
    m.swap_rows(p, r);
    for (int i = r + 1; i < rows; ++i) {
      for (int j = c + 1; j < cols; ++j) m(i, j) = (m(i, j) * m(r, c) - m(i, c) * m(r, j)) / prev;
      m(i, c) = T(0);
    }
    prev = m(r, c);
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots), r};
}

template <class T>
Rat to_rat(const T& x);
template <>
inline Rat to_rat<Int>(const Int& x) {
  return Rat(x);
}
template <>
inline Rat to_rat<chk64>(const chk64& x) {
  return Rat(x.v);
}

// Kernel basis from an echelon form: one vector per free column, scaled to a
// primitive integer vector with positive leading entry.
template <class T>
std::vector<RatVector> kernel_from_echelon(const EchelonResult<T>& e, int ncols);

inline RatVector make_primitive(RatVector v) {
  Int l = 1;
  for (const Rat& x : v) l = boost::multiprecision::lcm(l, Int(denominator(x)));
  Int g = 0;
  for (Rat& x : v) {
    x *= l;
    g = boost::multiprecision::gcd(g, Int(numerator(x)));
  }
  if (!g.is_zero())
    for (Rat& x : v) x /= g;
  for (const Rat& x : v) {
    if (x.is_zero()) continue;
    if (x < 0)
      for (Rat& y : v) y = -y;
    break;
  }
  return v;
}

template <class T>
std::vector<RatVector> kernel_from_echelon(const EchelonResult<T>& e, int ncols) {
  std::vector<bool> is_pivot(ncols, false);
  for (int c : e.pivot_cols) is_pivot[c] = true;
  std::vector<RatVector> basis;
  for (int f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    RatVector x(ncols, Rat(0));
    x[f] = 1;
    for (int r = e.rank - 1; r >= 0; --r) {
      const int p = e.pivot_cols[r];
      if (p > f) continue;
      Rat s = 0;
      for (int j = p + 1; j < ncols; ++j)
        if (!x[j].is_zero()) s += to_rat(e.m(r, j)) * x[j];
      x[p] = -s / to_rat(e.m(r, p));
    }
    basis.push_back(make_primitive(std::move(x)));
  }
  return basis;
}

// Solves A x = b over Q; nullopt when inconsistent. Free variables are set to
// zero (all call sites have full column rank, making the solution unique).
template <class T>
std::optional<RatVector> solve_from_echelon(const EchelonResult<T>& e, int ncols) {
  for (int i = e.rank; i < e.m.rows(); ++i)
    if (!is_zero(e.m(i, ncols))) return std::nullopt;
  RatVector x(ncols, Rat(0));
  for (int r = e.rank - 1; r >= 0; --r) {
    const int p = e.pivot_cols[r];
    Rat s = to_rat(e.m(r, ncols));
    for (int j = p + 1; j < ncols; ++j)
      if (!x[j].is_zero()) s -= to_rat(e.m(r, j)) * x[j];
    x[p] = s / to_rat(e.m(r, p));
  }
  return x;
}

template <class Fn>
auto with_escalation(const IntMatrix& a, Fn&& fn) {
  if (auto small = to_chk64(a)) {
    try {
      return fn(*small);
    } catch (const overflow_escalation&) {
    }
  }
  IntMatrix copy = a;
  return fn(copy);
}

}  // namespace detail

// Rank plus |det| of one maximal independent square submatrix (a Bareiss
// byproduct: the last pivot entry is that determinant up to sign).
inline std::pair<int, Int> rank_and_witness_minor(const IntMatrix& a) {
  return detail::with_escalation(a, [&](auto m) -> std::pair<int, Int> {
    const int c = m.cols();
    auto e = detail::bareiss(std::move(m), c);
    if (e.rank == 0) return {0, Int(0)};
    auto v = abs_val(e.m(e.rank - 1, e.pivot_cols[e.rank - 1]));
    if constexpr (std::is_same_v<decltype(v), chk64>)
      return {e.rank, Int(v.v)};
    else
      return {e.rank, v};
  });
}

namespace detail {

// Smith form computed modulo M, where M is any positive multiple of the
// largest elementary divisor (a nonzero rank x rank minor qualifies, since the
// gcd of those minors is e_1*...*e_r). Adding M*Z^n to the row lattice turns
// its invariants into (e_1,...,e_r, M,...,M), and because M*Z^n absorbs any
// multiple of M, the dance may keep every entry balanced mod M: growth is
// structurally impossible. Divisors come back as gcd(diagonal, M) followed by
// a divisibility-chain normalisation.
inline SNFResult snf_modular(const IntMatrix& a, int rank, const Int& minor_abs) {
  SNFResult out;
  out.rank = rank;
  if (rank == 0) return out;
  if (minor_abs == 1) {
    out.divisors.assign(static_cast<std::size_t>(rank), Int(1));
    return out;
  }

  std::vector<Int> vals;
  bool done = false;
  if (minor_abs < (Int(1) << 30)) {
    if (auto small = to_chk64(a)) {
      try {
        chk64 mod{static_cast<std::int64_t>(minor_abs)};
        std::vector<chk64> diag;
        snf_dance(small->data(), small->rows(), small->cols(), diag, &mod,
                  std::numeric_limits<long>::max());
        for (const chk64& d : diag) vals.push_back(Int(d.v));
        done = true;
      } catch (const overflow_escalation&) {
      }
    }
  }
  if (!done) {
    IntMatrix m = a;
    std::vector<Int> diag;
    snf_dance(m.data(), m.rows(), m.cols(), diag, &minor_abs, std::numeric_limits<long>::max());
    vals = std::move(diag);
  }

  for (Int& v : vals) v = boost::multiprecision::gcd(v, minor_abs);
  while (static_cast<int>(vals.size()) < a.cols()) vals.push_back(minor_abs);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i + 1 < vals.size(); ++i)
      if (!is_zero(vals[i + 1] % vals[i])) {
        Int g = boost::multiprecision::gcd(vals[i], vals[i + 1]);
        vals[i + 1] = vals[i] / g * vals[i + 1];
        vals[i] = g;
        changed = true;
      }
  }
  vals.resize(static_cast<std::size_t>(rank));
  out.divisors = std::move(vals);
  return out;
}

}  // namespace detail

inline SNFResult snf(const IntMatrix& a) {
  // The plain dance wins on the typical small, well-conditioned input, but
  // adversarial matrices make its entries explode; once the watchdog or the
  // pass budget trips we redo the computation modulo a witness minor, which
  // cannot grow. The budget leaves room for worst-case gcd cascades (~90
  // restarts per pivot on 64-bit values).
  const long budget = 128 + 128L * std::min(a.rows(), a.cols());
  try {
    return detail::with_escalation(a, [&](auto m) {
      using CT = std::decay_t<decltype(m(0, 0))>;
      std::vector<CT> divs;
      detail::snf_dance(m.data(), m.rows(), m.cols(), divs, static_cast<const CT*>(nullptr), budget);
      SNFResult r;
      r.rank = static_cast<int>(divs.size());
      for (auto& d : divs) {
        if constexpr (std::is_same_v<std::decay_t<decltype(d)>, chk64>)
          r.divisors.push_back(Int(d.v));
        else
          r.divisors.push_back(d);
      }
      return r;
    });
  } catch (const detail::snf_budget_exhausted&) {
  }
  auto [rank, minor] = rank_and_witness_minor(a);
  return detail::snf_modular(a, rank, minor);
}

// Index of the lattice generated by the columns: the gcd of all maximal
// minors, equivalently the product of the elementary divisors. Zero when the
// columns are dependent.
inline Int d_of(const IntMatrix& a) {
  if (a.cols() > a.rows()) throw std::invalid_argument("d_of: more columns than rows");
  SNFResult s = snf(a);
  if (s.rank < a.cols()) return 0;
  Int p = 1;
  for (const Int& d : s.divisors) p *= d;
  return p;
}

inline int rank_q(const IntMatrix& a) {
  return detail::with_escalation(a, [&](auto m) {
    const int c = m.cols();
    return detail::bareiss(std::move(m), c).rank;
  });
}

inline std::vector<RatVector> nullspace_q(const IntMatrix& a) {
  return detail::with_escalation(a, [&](auto m) {
    const int c = m.cols();
    auto e = detail::bareiss(std::move(m), c);
    return detail::kernel_from_echelon(e, c);
  });
}

// Solves A x = b over Q; nullopt when inconsistent. Free variables are set to
// zero, so the result is the unique solution whenever A has full column rank.
inline std::optional<RatVector> solve_q(const IntMatrix& a, const std::vector<Int>& b) {
  if (static_cast<int>(b.size()) != a.rows()) throw std::invalid_argument("solve_q: size mismatch");
  IntMatrix aug(a.rows(), a.cols() + 1);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[static_cast<std::size_t>(i)];
  }
  return detail::with_escalation(aug, [&](auto m) {
    const int c = m.cols() - 1;
    auto e = detail::bareiss(std::move(m), c);
    return detail::solve_from_echelon(e, c);
  });
}

namespace detail {

inline IntMatrix columns_matrix(const std::vector<RatVector>& cols, const RatVector* extra = nullptr) {
  const std::size_t n = cols.size() + (extra ? 1 : 0);
  std::size_t dim = extra ? extra->size() : (cols.empty() ? 0 : cols[0].size());
  for (const auto& c : cols)
    if (c.size() != dim) throw std::invalid_argument("columns_matrix: mismatched vector lengths");
  if (extra && extra->size() != dim) throw std::invalid_argument("columns_matrix: mismatched vector lengths");

  // clear denominators per column; scaling columns changes neither rank nor span
  IntMatrix m(static_cast<int>(dim), static_cast<int>(n));
  auto put = [&](int j, const RatVector& v) {
    Int l = 1;
    for (const Rat& x : v) l = boost::multiprecision::lcm(l, Int(denominator(x)));
    for (std::size_t i = 0; i < dim; ++i) m(static_cast<int>(i), j) = Int(numerator(v[i] * l));
  };
  for (std::size_t j = 0; j < cols.size(); ++j) put(static_cast<int>(j), cols[j]);
  if (extra) put(static_cast<int>(cols.size()), *extra);
  return m;
}

}  // namespace detail

inline bool in_span_q(const RatVector& v, const std::vector<RatVector>& basis) {
  bool zero = true;
  for (const Rat& x : v) zero = zero && x.is_zero();
  if (zero) return true;
  IntMatrix without = detail::columns_matrix(basis);
  IntMatrix with = detail::columns_matrix(basis, &v);
  return rank_q(without) == rank_q(with);
}

}  // namespace tropmod
