// Exact cubic invariants and the unimodular substitution action.
#include <algorithm>
#include <array>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "vlab/cubic.hpp"

namespace vlab {

int CubicPoly::degree() const {
  for (int i = 3; i >= 0; --i)
    if (sgn(a[i]) != 0) return i;
  return -1;
}

Rat CubicPoly::eval(const Rat& x) const {
  Rat v(a[3]);
  for (int i = 2; i >= 0; --i) v = v * x + Rat(a[i]);
  return v;
}

int CubicPoly::sign_at(const Rat& x) const {
  // sum a_i n^i d^(3-i) with x = n/d, d > 0: same sign as the value.
  const Int& n = x.get_num();
  const Int& d = x.get_den();
  Int acc(0), np(1);
  std::array<Int, 4> dp;
  dp[0] = 1;
  for (int i = 1; i < 4; ++i) dp[i] = dp[i - 1] * d;
  for (int i = 0; i < 4; ++i) {
    acc += a[i] * np * dp[3 - i];
    np *= n;
  }
  return sgn(acc);
}

Int discriminant(const CubicPoly& P) {
  if (P.degree() != 3) throw std::domain_error("discriminant: degree 3 required");
  const Int &a0 = P[0], &a1 = P[1], &a2 = P[2], &a3 = P[3];
  return 18 * a3 * a2 * a1 * a0 - 4 * a2 * a2 * a2 * a0 + a2 * a2 * a1 * a1 -
         4 * a3 * a1 * a1 * a1 - 27 * a3 * a3 * a0 * a0;
}

Int d_height_pow4(const CubicPoly& P) {
  const Int &c0 = P[0], &c1 = P[1], &c2 = P[2], &c3 = P[3];
  Int best = abs(c2 * c2 * c2 * c2);
  auto take = [&best](Int v) {
    v = abs(v);
    if (v > best) best = v;
  };
  take(c3 * c3 * c3 * c3);
  take(c1 * c2 * c1 * c2);
  take(c0 * c2 * c2 * c2);
  take(c0 * c3 * c0 * c3);
  take(c1 * c1 * c1 * c3);
  take(c0 * c1 * c2 * c3);
  return best;
}

double d_height(const CubicPoly& P) {
  return std::pow(d_height_pow4(P).get_d(), 0.25);
}

MobiusMap::MobiusMap(Int a_, Int b_, Int c_, Int d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
  const Int det = a * d - b * c;
  if (det != 1 && det != -1)
    throw std::domain_error("MobiusMap: |ad - bc| = 1 required");
}

CubicPoly mobius_apply(const CubicPoly& P, const MobiusMap& m) {
  if (P.degree() != 3) throw std::domain_error("mobius_apply: degree 3 required");
  // powers of (b x - d) and of (c - a x), as coefficient arrays
  std::array<std::array<Int, 4>, 4> u{}, v{};
  u[0][0] = 1;
  v[0][0] = 1;
  for (int i = 1; i < 4; ++i) {
    for (int j = 0; j < i; ++j) {
      u[i][j] += u[i - 1][j] * -m.d;
      u[i][j + 1] += u[i - 1][j] * m.b;
      v[i][j] += v[i - 1][j] * m.c;
      v[i][j + 1] += v[i - 1][j] * -m.a;
    }
  }
  IntVec4 out;
  for (int i = 0; i < 4; ++i)
    for (int s = 0; s <= i; ++s)
      for (int t = 0; t <= 3 - i; ++t) out[s + t] += P[i] * u[i][s] * v[3 - i][t];
  CubicPoly Q(std::move(out));
  if (sgn(Q[3]) == 0)
    throw std::domain_error("mobius_apply: image degenerates to degree < 3");
  return Q;
}

namespace {

// (Q, -Q) give the same class; order first by d_height, then coefficients.
bool class_less(const Int& h4a, const CubicPoly& A, const Int& h4b, const CubicPoly& B) {
  if (h4a != h4b) return h4a < h4b;
  for (int i = 0; i < 4; ++i) {
    const int c = ::cmp(A[i], B[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

// ---- native-integer fast path ------------------------------------------
// The census reduces up to ~10^6 survivors, so the greedy walk also exists
// in plain machine integers.  Eligibility (radius <= 4, height <= 1024)
// keeps every intermediate inside the argued bounds: accepted walk members
// have |c_i| <= 2^20, candidate images |c_i| <= 2^31, and the seven height
// products fit __int128.  Both paths run the identical exact algorithm.

using Coeffs = std::array<long long, 4>;
using u128 = unsigned __int128;

std::vector<std::array<long, 4>> build_maps_ll(long r) {
  std::vector<std::array<long, 4>> out;
  for (long a = -r; a <= r; ++a)
    for (long b = -r; b <= r; ++b)
      for (long c = -r; c <= r; ++c)
        for (long d = -r; d <= r; ++d)
          if (std::labs(a * d - b * c) == 1) out.push_back({a, b, c, d});
  return out;
}

const std::vector<std::array<long, 4>>& cached_maps_ll(long r) {
  static const std::array<std::vector<std::array<long, 4>>, 4> cache = {
      build_maps_ll(1), build_maps_ll(2), build_maps_ll(3), build_maps_ll(4)};
  return cache[r - 1];
}

Coeffs apply_ll(const Coeffs& p, const std::array<long, 4>& m) {
  long long u[4][4] = {}, v[4][4] = {};
  u[0][0] = 1;
  v[0][0] = 1;
  for (int i = 1; i < 4; ++i)
    for (int j = 0; j < i; ++j) {
      u[i][j] += u[i - 1][j] * -m[3];
      u[i][j + 1] += u[i - 1][j] * m[1];
      v[i][j] += v[i - 1][j] * m[2];
      v[i][j + 1] += v[i - 1][j] * -m[0];
    }
  Coeffs out{};
  for (int i = 0; i < 4; ++i)
    for (int s = 0; s <= i; ++s)
      for (int t = 0; t <= 3 - i; ++t) out[s + t] += p[i] * u[i][s] * v[3 - i][t];
  return out;
}

u128 h4_ll(const Coeffs& c) {
  auto A = [](long long v) { return (u128)(v < 0 ? -v : v); };
  const u128 c0 = A(c[0]), c1 = A(c[1]), c2 = A(c[2]), c3 = A(c[3]);
  u128 best = c2 * c2 * c2 * c2;
  auto take = [&best](u128 v) {
    if (v > best) best = v;
  };
  take(c3 * c3 * c3 * c3);
  take(c1 * c2 * c1 * c2);
  take(c0 * c2 * c2 * c2);
  take(c0 * c3 * c0 * c3);
  take(c1 * c1 * c1 * c3);
  take(c0 * c1 * c2 * c3);
  return best;
}

bool lex_less_ll(const Coeffs& a, const Coeffs& b) {
  for (int i = 0; i < 4; ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

CubicPoly reduce_fast(const CubicPoly& P, long radius) {
  Coeffs cur;
  for (int i = 0; i < 4; ++i) cur[i] = mpz_get_si(P[i].get_mpz_t());
  if (cur[3] < 0)
    for (auto& v : cur) v = -v;
  const auto& maps = cached_maps_ll(radius);
  u128 bh = h4_ll(cur);
  bool improved = true;
  while (improved) {
    improved = false;
    for (const auto& m : maps) {
      Coeffs img = apply_ll(cur, m);
      if (img[3] == 0) continue;  // degree dropped
      if (img[3] < 0)
        for (auto& v : img) v = -v;
      const u128 ih = h4_ll(img);
      if (ih < bh || (ih == bh && lex_less_ll(img, cur))) {
        cur = img;
        bh = ih;
        improved = true;
      }
    }
  }
  return CubicPoly(
      IntVec4(Int((long)cur[0]), Int((long)cur[1]), Int((long)cur[2]), Int((long)cur[3])));
}

}  // namespace

CubicPoly reduce_class(const CubicPoly& P, long search_radius) {
  if (P.degree() != 3) throw std::domain_error("reduce_class: degree 3 required");
  if (sgn(discriminant(P)) == 0)
    throw std::domain_error("reduce_class: nonzero discriminant required");
  if (search_radius < 1) throw std::domain_error("reduce_class: search_radius >= 1");
  if (search_radius <= 4 && P.height() <= 1024) return reduce_fast(P, search_radius);

  std::vector<MobiusMap> maps;
  for (long a = -search_radius; a <= search_radius; ++a)
    for (long b = -search_radius; b <= search_radius; ++b)
      for (long c = -search_radius; c <= search_radius; ++c)
        for (long d = -search_radius; d <= search_radius; ++d)
          if (std::labs(a * d - b * c) == 1) maps.push_back(MobiusMap::of(a, b, c, d));

  // -Q always lies in the explored orbit (negate the map entries), so fold
  // the sign into the candidate directly to keep the walk canonical.
  auto canonical = [](CubicPoly Q) {
    for (int i = 3; i >= 0; --i) {
      if (sgn(Q[i]) > 0) break;
      if (sgn(Q[i]) < 0) return -Q;
    }
    return Q;
  };

  CubicPoly best = canonical(P);
  Int best_h4 = d_height_pow4(best);
  bool improved = true;
  while (improved) {
    improved = false;
    for (const auto& m : maps) {
      CubicPoly Q;
      try {
        Q = canonical(mobius_apply(best, m));
      } catch (const std::domain_error&) {
        continue;  // degree dropped; not a class member under this action
      }
      Int h4 = d_height_pow4(Q);
      if (class_less(h4, Q, best_h4, best)) {
        best = std::move(Q);
        best_h4 = std::move(h4);
        improved = true;
      }
    }
  }
  return best;
}

}  // namespace vlab
