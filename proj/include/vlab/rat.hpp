#pragma once
// Exact rational arithmetic helpers on top of GMP's C++ classes, plus
// directed-rounding bridges to double used by the fast filters.  Everything
// downstream treats mpq_class values as canonical (always canonicalized).

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace vlab {

using Int = mpz_class;
using Rat = mpq_class;

// Thrown when an operation would exceed a configured resource cap.
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an exact-arithmetic internal invariant fails.  The CLI maps
// this to exit code 3.
struct invariant_error : std::logic_error {
  using std::logic_error::logic_error;
};

inline Rat make_rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Rat make_rat(const Int& num, const Int& den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Parses "num" or "num/den" with optional sign; rejects everything else,
// including floating-point notation (exactness is part of the contract).
inline Rat parse_rat(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  const auto slash = text.find('/');
  const std::string ns = text.substr(0, slash);
  const std::string ds = slash == std::string::npos ? "1" : text.substr(slash + 1);
  auto check = [](const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  if (!check(ns) || !check(ds))
    throw std::invalid_argument("bad rational literal: " + text);
  // mpz_class(string) accepts '-' but not a leading '+'.
  auto strip = [](const std::string& s) { return s[0] == '+' ? s.substr(1) : s; };
  const Int n(strip(ns)), d(strip(ds));
  if (sgn(d) == 0) throw std::invalid_argument("zero denominator: " + text);
  Rat r(n, d);
  r.canonicalize();
  return r;
}

inline std::string rat_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Int floor_rat(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

inline Int ceil_rat(const Rat& r) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

inline Rat pow_rat(const Rat& base, unsigned long e) {
  Rat out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num().get_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den().get_mpz_t(), e);
  return out;  // canonical since base is
}

inline Int pow_int(const Int& base, unsigned long e) {
  Int out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

// floor(sqrt(n)) for n >= 0.
inline Int isqrt_floor(const Int& n) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

// floor(n^(1/k)) for n >= 0 (or the sign-symmetric value for odd k, n < 0).
inline Int iroot_floor(const Int& n, unsigned long k) {
  Int r;
  mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
  return r;
}

// Guaranteed enclosure lo <= r <= hi in double precision.  mpq_get_d truncates
// toward zero, so two outward ulp steps on each side are always enough.
inline std::pair<double, double> d_enclosure(const Rat& r) {
  const double d = r.get_d();
  double lo = std::nextafter(std::nextafter(d, -HUGE_VAL), -HUGE_VAL);
  double hi = std::nextafter(std::nextafter(d, HUGE_VAL), HUGE_VAL);
  return {lo, hi};
}

inline double d_lower(const Rat& r) { return d_enclosure(r).first; }
inline double d_upper(const Rat& r) { return d_enclosure(r).second; }

// Rational enclosure of sqrt(x) with width <= x^(1/2) * 2^-prec_bits (x >= 0).
inline std::pair<Rat, Rat> sqrt_enclosure(const Rat& x, unsigned prec_bits) {
  if (sgn(x) < 0) throw std::domain_error("sqrt_enclosure: negative argument");
  if (sgn(x) == 0) return {Rat(0), Rat(0)};
  // sqrt(n/d) = sqrt(n*d)/d; scale by 4^prec_bits so the integer sqrt carries
  // the requested precision.
  Int nd = x.get_num() * x.get_den();
  Int scaled = nd << (2 * prec_bits);
  Int r = isqrt_floor(scaled);
  Int den = x.get_den() << prec_bits;
  return {make_rat(r, den), make_rat(r + 1, den)};
}

// Rational enclosure of the real cube root of x (any sign).
inline std::pair<Rat, Rat> cbrt_enclosure(const Rat& x, unsigned prec_bits) {
  if (sgn(x) == 0) return {Rat(0), Rat(0)};
  if (sgn(x) < 0) {
    auto [lo, hi] = cbrt_enclosure(-x, prec_bits);
    return {-hi, -lo};
  }
  // cbrt(n/d) = cbrt(n*d^2)/d.
  Int nd2 = x.get_num() * x.get_den() * x.get_den();
  Int scaled = nd2 << (3 * prec_bits);
  Int r = iroot_floor(scaled, 3);
  Int den = x.get_den() << prec_bits;
  return {make_rat(r, den), make_rat(r + 1, den)};
}

// Fixed-point decimal rendering with `digits` fractional digits, rounding
// toward zero; used by the CSV exports (deterministic, locale-free).
inline std::string decimal_string(const Rat& r, int digits) {
  Int scale = pow_int(Int(10), digits);
  Int num = r.get_num() * scale;
  Int q;
  mpz_tdiv_q(q.get_mpz_t(), num.get_mpz_t(), r.get_den().get_mpz_t());
  const bool neg = sgn(q) < 0;
  Int a = abs(q);
  std::string s = a.get_str();
  if ((int)s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  if (neg) s.insert(0, "-");
  return s;
}

}  // namespace vlab
