#pragma once
// Integer 4-vectors q = (q0, q1, q2, q3) with exact arithmetic.  These are
// the approximant vectors and hyperplane normals used throughout.

#include <array>
#include <compare>
#include <cstdint>
#include <ostream>

#include "vlab/rat.hpp"

namespace vlab {

struct IntVec4 {
  std::array<Int, 4> c{};

  IntVec4() = default;
  IntVec4(Int a, Int b, Int d, Int e) : c{std::move(a), std::move(b), std::move(d), std::move(e)} {}
  static IntVec4 of(long a, long b, long d, long e) { return IntVec4(Int(a), Int(b), Int(d), Int(e)); }

  Int& operator[](int i) { return c[i]; }
  const Int& operator[](int i) const { return c[i]; }

  bool operator==(const IntVec4& o) const { return c == o.c; }

  bool is_zero() const { return sgn(c[0]) == 0 && sgn(c[1]) == 0 && sgn(c[2]) == 0 && sgn(c[3]) == 0; }

  IntVec4 operator-() const { return IntVec4(-c[0], -c[1], -c[2], -c[3]); }

  Int dot(const IntVec4& o) const {
    return c[0] * o.c[0] + c[1] * o.c[1] + c[2] * o.c[2] + c[3] * o.c[3];
  }

  Int content() const {
    Int g = abs(c[0]);
    for (int i = 1; i < 4; ++i) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c[i].get_mpz_t());
    return g;
  }

  bool is_primitive() const { return content() == 1; }

  // Divides out the content; zero vectors stay zero.
  IntVec4 primitive_part() const {
    Int g = content();
    if (sgn(g) == 0) return *this;
    return IntVec4(c[0] / g, c[1] / g, c[2] / g, c[3] / g);
  }

  Int sup_norm() const {
    Int m = abs(c[0]);
    for (int i = 1; i < 4; ++i)
      if (abs(c[i]) > m) m = abs(c[i]);
    return m;
  }

  // Sign-canonical form: first nonzero coordinate positive.
  IntVec4 sign_canonical() const {
    for (int i = 0; i < 4; ++i) {
      if (sgn(c[i]) > 0) return *this;
      if (sgn(c[i]) < 0) return -*this;
    }
    return *this;
  }
};

inline Int dot(const IntVec4& a, const IntVec4& b) { return a.dot(b); }
inline Int sup_norm(const IntVec4& v) { return v.sup_norm(); }
inline IntVec4 primitive_part(const IntVec4& v) { return v.primitive_part(); }
inline IntVec4 sign_canonical(const IntVec4& v) { return v.sign_canonical(); }

inline bool lex_less(const IntVec4& a, const IntVec4& b) {
  for (int i = 0; i < 4; ++i) {
    const int s = cmp(a[i], b[i]);
    if (s != 0) return s < 0;
  }
  return false;
}

inline std::ostream& operator<<(std::ostream& os, const IntVec4& v) {
  return os << "(" << v[0] << "," << v[1] << "," << v[2] << "," << v[3] << ")";
}

}  // namespace vlab
