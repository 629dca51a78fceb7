#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tropmod {

// Expression templates are switched off: these behave as ordinary value types,
// which keeps generic code over { Int, Rat, chk64 } free of proxy surprises.
using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Rat =
    boost::multiprecision::number<boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
                                  boost::multiprecision::et_off>;

// Signals that an int64 fast path left the representable range. Callers catch
// this and redo the computation with Int; it never escapes the library.
struct overflow_escalation : std::runtime_error {
  overflow_escalation() : std::runtime_error("int64 overflow, escalating to bignum") {}
};

// int64 with overflow-checked arithmetic. Quotients and remainders follow the
// C++ truncation rule, matching cpp_int, so the elimination kernels behave
// identically on both types.
struct chk64 {
  std::int64_t v = 0;

  chk64() = default;
  chk64(std::int64_t x) : v(x) {}

  friend chk64 operator+(chk64 a, chk64 b) {
    std::int64_t r;
    if (__builtin_add_overflow(a.v, b.v, &r)) throw overflow_escalation();
    return r;
  }
  friend chk64 operator-(chk64 a, chk64 b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a.v, b.v, &r)) throw overflow_escalation();
    return r;
  }
  friend chk64 operator*(chk64 a, chk64 b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a.v, b.v, &r)) throw overflow_escalation();
    return r;
  }
  friend chk64 operator/(chk64 a, chk64 b) {
    if (a.v == std::numeric_limits<std::int64_t>::min() && b.v == -1) throw overflow_escalation();
    return a.v / b.v;
  }
  friend chk64 operator%(chk64 a, chk64 b) {
    if (a.v == std::numeric_limits<std::int64_t>::min() && b.v == -1) return std::int64_t(0);
    return a.v % b.v;
  }
  chk64 operator-() const {
    if (v == std::numeric_limits<std::int64_t>::min()) throw overflow_escalation();
    return -v;
  }
  chk64& operator+=(chk64 b) { return *this = *this + b; }
  chk64& operator-=(chk64 b) { return *this = *this - b; }
  chk64& operator*=(chk64 b) { return *this = *this * b; }

  friend bool operator==(chk64 a, chk64 b) { return a.v == b.v; }
  friend bool operator!=(chk64 a, chk64 b) { return a.v != b.v; }
  friend bool operator<(chk64 a, chk64 b) { return a.v < b.v; }
};

inline bool is_zero(const Int& x) { return x.is_zero(); }
inline bool is_zero(chk64 x) { return x.v == 0; }
inline bool is_zero(const Rat& x) { return x.is_zero(); }

inline Int abs_val(const Int& x) { return x < 0 ? Int(-x) : x; }
inline chk64 abs_val(chk64 x) {
  if (x.v == std::numeric_limits<std::int64_t>::min()) throw overflow_escalation();
  return x.v < 0 ? -x.v : x.v;
}

// |a| < |b|, used for pivot selection in the Smith reduction.
inline bool abs_less(const Int& a, const Int& b) { return abs_val(a) < abs_val(b); }
inline bool abs_less(chk64 a, chk64 b) { return abs_val(a).v < abs_val(b).v; }

inline std::int64_t checked_add64(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw overflow_escalation();
  return r;
}
inline std::int64_t checked_mul64(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw overflow_escalation();
  return r;
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  if (a == std::numeric_limits<std::int64_t>::min() || b == std::numeric_limits<std::int64_t>::min())
    throw overflow_escalation();
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

}  // namespace tropmod
