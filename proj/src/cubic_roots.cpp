// Certified roots of integer cubics.  Zero discriminant is handled by exact
// rational factorization (Euclidean gcd with the derivative); otherwise the
// real roots are located by exact-sign bisection inside certified brackets
// and the complex pair, when present, is recovered from Vieta's formulas as
// a rational box.  Doubles appear only in the exported values; every
// enclosure is a rational interval, so the stated radii are guarantees.
#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "vlab/cubic.hpp"

namespace vlab {
namespace {

struct RIv {
  Rat lo, hi;  // lo <= value <= hi
};

RIv point(Rat v) { return {v, std::move(v)}; }

RIv add(const RIv& a, const RIv& b) { return {Rat(a.lo + b.lo), Rat(a.hi + b.hi)}; }
RIv sub(const RIv& a, const RIv& b) { return {Rat(a.lo - b.hi), Rat(a.hi - b.lo)}; }

RIv square(const RIv& a) {
  Rat l2 = Rat(a.lo * a.lo), h2 = Rat(a.hi * a.hi);
  if (sgn(a.lo) >= 0) return {l2, h2};
  if (sgn(a.hi) <= 0) return {h2, l2};
  return {Rat(0), std::max(l2, h2)};
}

RIv sqrt_iv(const RIv& a, unsigned prec) {
  return {sqrt_enclosure(a.lo, prec).first, sqrt_enclosure(a.hi, prec).second};
}

RIv max_iv(const RIv& a, const RIv& b) {
  return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Rat width(const RIv& a) { return Rat(a.hi - a.lo); }

RIv div_pos(const RIv& a, const Rat& c) {  // c > 0
  return {Rat(a.lo / c), Rat(a.hi / c)};
}

// Exact-sign bisection of a bracket with sign(P(lo)) = s_lo and
// sign(P(hi)) = -s_lo, both nonzero.  Stops when the width drops below tol
// or a midpoint is an exact rational root (point interval).
RIv bisect(const CubicPoly& P, Rat lo, Rat hi, int s_lo, const Rat& tol) {
  if (P.sign_at(lo) != s_lo || P.sign_at(hi) != -s_lo)
    throw invariant_error("cubic bisection: bracket signs wrong");
  while (Rat(hi - lo) > tol) {
    Rat mid = Rat((lo + hi) / 2);
    const int s = P.sign_at(mid);
    if (s == 0) return point(std::move(mid));
    if (s == s_lo)
      lo = std::move(mid);
    else
      hi = std::move(mid);
  }
  return {std::move(lo), std::move(hi)};
}

// Continue halving an existing bracket n more times.
void refine(const CubicPoly& P, RIv& iv, int s_lo, int n) {
  for (int i = 0; i < n && iv.lo != iv.hi; ++i) {
    Rat mid = Rat((iv.lo + iv.hi) / 2);
    const int s = P.sign_at(mid);
    if (s == 0) {
      iv = point(std::move(mid));
      return;
    }
    if (s == s_lo)
      iv.lo = std::move(mid);
    else
      iv.hi = std::move(mid);
  }
}

// Roots of c2 x^2 + c1 x + c0 with c2 != 0 and nonzero discriminant, as
// rational boxes re +- i*im.
void solve_quadratic(const Rat& c2, const Rat& c1, const Rat& c0, RIv re[2], RIv im[2]) {
  const Rat disc2 = Rat(c1 * c1 - 4 * c2 * c0);
  constexpr unsigned kPrec = 160;
  if (sgn(disc2) == 0) throw invariant_error("solve_quadratic: repeated root");
  if (sgn(disc2) > 0) {
    auto [sl, sh] = sqrt_enclosure(disc2, kPrec);
    RIv plus{Rat(-c1 + sl), Rat(-c1 + sh)};
    RIv minus{Rat(-c1 - sh), Rat(-c1 - sl)};
    const Rat den = Rat(2 * c2);
    auto scale = [&den](const RIv& v) {
      return sgn(den) > 0 ? RIv{Rat(v.lo / den), Rat(v.hi / den)}
                          : RIv{Rat(v.hi / den), Rat(v.lo / den)};
    };
    re[0] = scale(plus);
    re[1] = scale(minus);
    im[0] = im[1] = point(Rat(0));
    return;
  }
  const Rat alpha = Rat(-c1 / (2 * c2));
  const Rat beta2 = Rat(-disc2 / (4 * c2 * c2));
  auto [bl, bh] = sqrt_enclosure(beta2, kPrec);
  re[0] = re[1] = point(alpha);
  im[0] = {Rat(-bh), Rat(-bl)};
  im[1] = {bl, bh};
}

struct RootBoxes {
  std::array<RIv, 3> re, im;
};

// One exact rational root r is known: deflate exactly and solve the
// quadratic cofactor.  Only reached when the cubic discriminant is nonzero,
// so the cofactor has a nonzero discriminant too.
RootBoxes from_exact_root(const CubicPoly& P, const Rat& r) {
  const Rat q2 = Rat(P[3]);
  const Rat q1 = Rat(Rat(P[2]) + q2 * r);
  const Rat q0 = Rat(Rat(P[1]) + q1 * r);
  if (sgn(Rat(Rat(P[0]) + q0 * r)) != 0)
    throw invariant_error("cubic deflation: nonzero remainder");
  RootBoxes out;
  out.re[0] = point(r);
  out.im[0] = point(Rat(0));
  RIv re2[2], im2[2];
  solve_quadratic(q2, q1, q0, re2, im2);
  out.re[1] = re2[0];
  out.im[1] = im2[0];
  out.re[2] = re2[1];
  out.im[2] = im2[1];
  return out;
}

RootBoxes boxes_of(const CubicPoly& Pin) {
  if (Pin.degree() != 3) throw std::domain_error("cubic roots: degree 3 required");
  // Roots are unchanged under P -> -P; normalize to a positive leading
  // coefficient so the bracket signs below are fixed.
  const CubicPoly P = sgn(Pin[3]) > 0 ? Pin : -Pin;
  const Int disc = discriminant(P);

  if (sgn(disc) == 0) {
    const SquareLinearFactors f = square_linear_roots(P);
    RootBoxes out;
    out.re = {point(f.r), point(f.r), point(f.t)};
    out.im = {point(Rat(0)), point(Rat(0)), point(Rat(0))};
    return out;
  }
  if (sgn(P[0]) == 0) return from_exact_root(P, Rat(0));

  const Rat a0 = Rat(P[0]), a1 = Rat(P[1]), a2 = Rat(P[2]), a3 = Rat(P[3]);
  // Cauchy bound: every root lies strictly inside (-M, M).
  const Rat M =
      Rat(1 + std::max({Rat(abs(a0)), Rat(abs(a1)), Rat(abs(a2))}) / a3);
  const Rat tol = Rat(std::max(Rat(1), M) / pow_int(Int(2), 80));

  if (sgn(disc) > 0) {
    // Three distinct real roots; the derivative has two distinct real
    // critical points c1 < c2 with P(c1) > 0 > P(c2).
    const Rat sq = Rat(a2 * a2 - 3 * a3 * a1);
    if (sgn(sq) <= 0) throw invariant_error("cubic roots: critical points missing");
    const Rat den3 = Rat(3 * a3);
    for (unsigned prec = 64;; prec *= 2) {
      if (prec > (1u << 20))
        throw invariant_error("cubic roots: critical enclosure stalled");
      auto [sl, sh] = sqrt_enclosure(sq, prec);
      const Rat c1lo = Rat((-a2 - sh) / den3), c1hi = Rat((-a2 - sl) / den3);
      const Rat c2lo = Rat((-a2 + sl) / den3), c2hi = Rat((-a2 + sh) / den3);
      const int s1l = P.sign_at(c1lo), s1h = P.sign_at(c1hi);
      const int s2l = P.sign_at(c2lo), s2h = P.sign_at(c2hi);
      if (s1l == 0) return from_exact_root(P, c1lo);
      if (s1h == 0) return from_exact_root(P, c1hi);
      if (s2l == 0) return from_exact_root(P, c2lo);
      if (s2h == 0) return from_exact_root(P, c2hi);
      if (s1l > 0 && s1h > 0 && s2l < 0 && s2h < 0 && c1hi < c2lo) {
        RootBoxes out;
        out.re[0] = bisect(P, Rat(-M), c1lo, -1, tol);
        out.re[1] = bisect(P, c1hi, c2lo, +1, tol);
        out.re[2] = bisect(P, c2hi, M, -1, tol);
        out.im = {point(Rat(0)), point(Rat(0)), point(Rat(0))};
        return out;
      }
    }
  }

  // disc < 0: one real root x1 and a conjugate pair alpha +- i beta with
  // alpha = (-a2/a3 - x1)/2 and alpha^2 + beta^2 = (-a0/a3)/x1.
  RIv x1 = bisect(P, Rat(-M), M, -1, tol);
  const Rat sum_c = Rat(-a2 / a3), prod_c = Rat(-a0 / a3);
  for (;;) {
    if (x1.lo == x1.hi) return from_exact_root(P, x1.lo);
    if (sgn(x1.lo) <= 0 && sgn(x1.hi) >= 0) {  // need x1's sign for the division
      refine(P, x1, -1, 8);
      continue;
    }
    const RIv alpha = div_pos(sub(point(sum_c), x1), Rat(2));
    const Rat e1 = Rat(prod_c / x1.lo), e2 = Rat(prod_c / x1.hi);
    const RIv rho{std::min(e1, e2), std::max(e1, e2)};
    const RIv beta2 = sub(rho, square(alpha));
    if (sgn(beta2.lo) > 0) {
      const RIv beta = sqrt_iv(beta2, 128);
      if (width(alpha) <= tol && width(beta) <= tol) {
        RootBoxes out;
        out.re[0] = x1;
        out.im[0] = point(Rat(0));
        out.re[1] = alpha;
        out.im[1] = {Rat(-beta.hi), Rat(-beta.lo)};
        out.re[2] = alpha;
        out.im[2] = beta;
        return out;
      }
    }
    refine(P, x1, -1, 16);
  }
}

}  // namespace

SquareLinearFactors square_linear_roots(const CubicPoly& P) {
  if (P.degree() != 3)
    throw std::domain_error("square_linear_roots: degree 3 required");
  if (sgn(discriminant(P)) != 0)
    throw std::domain_error("square_linear_roots: zero discriminant required");

  using QP = std::array<Rat, 4>;
  auto qdeg = [](const QP& f) {
    for (int i = 3; i >= 0; --i)
      if (sgn(f[i]) != 0) return i;
    return -1;
  };
  auto qrem = [&qdeg](QP a, const QP& b) {
    const int db = qdeg(b);
    for (int da = qdeg(a); da >= db; da = qdeg(a)) {
      const Rat f = Rat(a[da] / b[db]);
      for (int i = 0; i <= db; ++i) a[da - db + i] -= f * b[i];
      a[da] = 0;  // cancels exactly; pin it
    }
    return a;
  };

  QP A{Rat(P[0]), Rat(P[1]), Rat(P[2]), Rat(P[3])};
  QP B{Rat(P[1]), Rat(2 * P[2]), Rat(3 * P[3]), Rat(0)};  // derivative
  while (qdeg(B) >= 0) {
    QP R = qrem(A, B);
    A = B;
    B = R;
  }

  const Rat a3 = Rat(P[3]);
  SquareLinearFactors out;
  switch (qdeg(A)) {
    case 2:
      out.r = Rat(-Rat(P[2]) / (3 * a3));
      out.t = out.r;
      out.triple = true;
      break;
    case 1:
      out.r = Rat(-A[0] / A[1]);
      out.t = Rat(-Rat(P[2]) / a3 - 2 * out.r);
      out.triple = (out.r == out.t);
      break;
    default:
      throw invariant_error("square_linear_roots: gcd degree unexpected");
  }
  // Exact verification: P == a3 (x - r)^2 (x - t).
  const Rat &r = out.r, &t = out.t;
  const bool ok = Rat(P[2]) == Rat(-a3 * (2 * r + t)) &&
                  Rat(P[1]) == Rat(a3 * (r * r + 2 * r * t)) &&
                  Rat(P[0]) == Rat(-a3 * r * r * t);
  if (!ok) throw invariant_error("square_linear_roots: verification failed");
  return out;
}

RootTriple roots_of(const CubicPoly& P) {
  const RootBoxes b = boxes_of(P);
  struct RD {
    double re, im, rad;
  };
  std::array<RD, 3> rd;
  for (int i = 0; i < 3; ++i) {
    const Rat rm = Rat((b.re[i].lo + b.re[i].hi) / 2);
    const Rat im = Rat((b.im[i].lo + b.im[i].hi) / 2);
    const double re_d = rm.get_d(), im_d = im.get_d();
    const double half_w = d_upper(Rat(width(b.re[i]) / 2)) + d_upper(Rat(width(b.im[i]) / 2));
    const double mag = std::max(1.0, std::hypot(re_d, im_d));
    // half_w covers the enclosure, 1e-15*mag the two double conversions.
    rd[i] = {re_d, im_d, half_w + 1e-15 * mag};
    if (rd[i].rad > 1e-12 * mag)
      throw invariant_error("roots_of: certified radius exceeds contract");
  }
  std::sort(rd.begin(), rd.end(), [](const RD& x, const RD& y) {
    return x.re != y.re ? x.re < y.re : x.im < y.im;
  });
  RootTriple out;
  for (int i = 0; i < 3; ++i) {
    out.x[i] = {rd[i].re, rd[i].im};
    out.radius[i] = rd[i].rad;
  }
  return out;
}

double root_spread(const CubicPoly& P) {
  if (P.degree() != 3) throw std::domain_error("root_spread: degree 3 required");
  if (sgn(discriminant(P)) == 0) {
    const SquareLinearFactors f = square_linear_roots(P);
    return f.triple ? 0.0 : std::fabs(Rat(f.r - f.t).get_d());
  }
  const RootBoxes b = boxes_of(P);
  RIv best = point(Rat(0));
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const RIv d2 = add(square(sub(b.re[i], b.re[j])), square(sub(b.im[i], b.im[j])));
      best = max_iv(best, sqrt_iv(d2, 128));
    }
  const Rat mid = Rat((best.lo + best.hi) / 2);
  const Rat half = Rat((best.hi - best.lo) / 2);
  // Demand half/mid <= 5e-10; with the double conversion this certifies the
  // advertised 1e-9 relative error.
  if (Rat(half * 2000000000L) > mid)
    throw invariant_error("root_spread: certification width exceeded");
  return mid.get_d();
}

}  // namespace vlab
