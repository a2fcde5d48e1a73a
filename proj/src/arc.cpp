// Arcs B_q: the subinterval of I on which max_i |q0 x^i - q_i| <= q0^{-lambda}.
// With I on one side of zero the per-power constraints are intervals whose
// endpoints are ((q_i +- s)/q0)^(1/i), s = q0^{-lambda}; endpoint comparisons
// cross-power to polynomials in s of degree <= 3 and are decided exactly by
// the RootPow sign kernel.  Reported endpoints are inward roundings on a
// dyadic millesimal grid; membership never depends on the rounding.
#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "vlab/approx.hpp"

namespace vlab {

namespace {

// Window endpoint: exact rational, or ((u + sg*s)/q0)^(1/i).  All endpoints
// handled here are >= 0, so t -> t^L is monotone and cross-powering is sound.
struct Endpt {
  bool rational = true;
  Rat r;
  int sg = 0;  // +-1
  Int u;
  int i = 1;
};

Endpt rat_pt(Rat v) {
  Endpt e;
  e.rational = true;
  e.r = std::move(v);
  return e;
}

Endpt root_pt(int sg, const Int& u, int i) {
  Endpt e;
  e.rational = false;
  e.sg = sg;
  e.u = u;
  e.i = i;
  return e;
}

// Coefficients of ((u + sg*s)^p) / q0^p * q0^m as a polynomial in s.
std::vector<Rat> power_poly(const Int& u, int sg, int p, int m, const Int& q0) {
  static const long binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  const Rat scale = make_rat(pow_int(q0, (unsigned long)(m - p)), Int(1));
  std::vector<Rat> c((std::size_t)p + 1);
  for (int t = 0; t <= p; ++t) {
    Rat v = Rat(binom[p][t]) * Rat(pow_int(u, (unsigned long)(p - t))) * scale;
    if (sg < 0 && (t & 1)) v = -v;
    c[(std::size_t)t] = v;
  }
  return c;
}

// Certified double enclosure of an endpoint value; the generous relative
// pad absorbs every rounding step, so interval-disjoint comparisons are
// decided without exact arithmetic and only near-ties fall through.
struct DEnc {
  double lo = 0.0, hi = 0.0;
};

double pad_dn(double x) { return x - (std::fabs(x) * 1e-14 + 1e-300); }
double pad_up(double x) { return x + (std::fabs(x) * 1e-14 + 1e-300); }

struct Ctx {
  const RootPow& s;
  const Int& q0;
  double s_lo = 0.0, s_hi = 0.0;  // certified double range of s
  double q0_d = 1.0;
};

DEnc enc_of(const Endpt& e, const Ctx& c) {
  if (e.rational) return {d_lower(e.r), d_upper(e.r)};
  const double ud = e.u.get_d();
  double tlo = pad_dn((pad_dn(ud) + (e.sg > 0 ? c.s_lo : -c.s_hi)) / c.q0_d);
  double thi = pad_up((pad_up(ud) + (e.sg > 0 ? c.s_hi : -c.s_lo)) / c.q0_d);
  if (tlo < 0) tlo = 0;
  if (thi < 0) thi = 0;
  switch (e.i) {
    case 1:
      return {tlo, thi};
    case 2:
      return {pad_dn(std::sqrt(tlo)), pad_up(std::sqrt(thi))};
    default:
      return {pad_dn(std::cbrt(tlo)), pad_up(std::cbrt(thi))};
  }
}

// Sign of u + sg*s.
int sign_linear(const Int& u, int sg, const Ctx& c) {
  const double ud = u.get_d();
  const double lo = pad_dn(pad_dn(ud) + (sg > 0 ? c.s_lo : -c.s_hi));
  const double hi = pad_up(pad_up(ud) + (sg > 0 ? c.s_hi : -c.s_lo));
  if (lo > 0) return 1;
  if (hi < 0) return -1;
  return c.s.sign_at({Rat(u), Rat(sg)});
}

// sign(a - b), exact.
int compare(const Endpt& a, const Endpt& b, const RootPow& s, const Int& q0) {
  if (a.rational && b.rational) return cmp(a.r, b.r) < 0 ? -1 : (cmp(a.r, b.r) > 0 ? 1 : 0);
  if (a.rational) return -compare(b, a, s, q0);
  if (b.rational) {
    // a^i vs rho^i: sign of (u - q0*rho^i) + sg*s
    const Rat c0 = Rat(a.u) - pow_rat(b.r, (unsigned long)a.i) * Rat(q0);
    return s.sign_at({c0, Rat(a.sg)});
  }
  const int L = std::lcm(a.i, b.i);
  const int p1 = L / a.i, p2 = L / b.i;
  const int m = std::max(p1, p2);
  std::vector<Rat> lhs = power_poly(a.u, a.sg, p1, m, q0);
  std::vector<Rat> rhs = power_poly(b.u, b.sg, p2, m, q0);
  std::vector<Rat> diff(std::max(lhs.size(), rhs.size()), Rat(0));
  for (std::size_t t = 0; t < lhs.size(); ++t) diff[t] += lhs[t];
  for (std::size_t t = 0; t < rhs.size(); ++t) diff[t] -= rhs[t];
  return s.sign_at(diff);
}

struct ArcCore {
  bool empty = true;
  Endpt A, B;
};

// Comparison via enclosures when they are disjoint, exact otherwise.
int compare_enc(const Endpt& a, const DEnc& ae, const Endpt& b, const DEnc& be,
                const Ctx& c) {
  if (ae.hi < be.lo) return -1;
  if (ae.lo > be.hi) return 1;
  return compare(a, b, c.s, c.q0);
}

// Exact arc of (q0, u1, u2, u3) inside positive I.
ArcCore arc_core(const Int& u1, const Int& u2, const Int& u3, const Ctx& c,
                 const Rat& Ilo, const Rat& Ihi) {
  ArcCore out;
  Endpt A = rat_pt(Ilo), B = rat_pt(Ihi);
  DEnc Ae = enc_of(A, c), Be = enc_of(B, c);
  const Int* us[3] = {&u1, &u2, &u3};
  for (int i = 1; i <= 3; ++i) {
    const Int& u = *us[i - 1];
    // x > 0 forces x^i <= (u + s)/q0 to have a nonnegative right side.
    if (sign_linear(u, +1, c) < 0) return out;
    Endpt up = root_pt(+1, u, i);
    DEnc upe = enc_of(up, c);
    if (compare_enc(up, upe, B, Be, c) < 0) {
      B = up;
      Be = upe;
    }
    // The lower window boundary constrains x > 0 only when u - s > 0.
    if (sign_linear(u, -1, c) > 0) {
      Endpt lo = root_pt(-1, u, i);
      DEnc loe = enc_of(lo, c);
      if (compare_enc(lo, loe, A, Ae, c) > 0) {
        A = lo;
        Ae = loe;
      }
    }
    if (compare_enc(A, Ae, B, Be, c) > 0) return out;
  }
  out.empty = false;
  out.A = std::move(A);
  out.B = std::move(B);
  return out;
}

// Rational enclosure of an endpoint value at the given s-precision.
std::pair<Rat, Rat> enclose(const Endpt& e, const RootPow& s, const Int& q0, unsigned prec) {
  if (e.rational) return {e.r, e.r};
  auto [slo, shi] = s.enclosure(prec);
  Rat tlo = (Rat(e.u) + (e.sg > 0 ? slo : -shi)) / Rat(q0);
  Rat thi = (Rat(e.u) + (e.sg > 0 ? shi : -slo)) / Rat(q0);
  if (sgn(tlo) < 0) tlo = Rat(0);  // value is >= 0; clamp the enclosure too
  if (sgn(thi) < 0) thi = Rat(0);
  switch (e.i) {
    case 1:
      return {tlo, thi};
    case 2:
      return {sqrt_enclosure(tlo, prec).first, sqrt_enclosure(thi, prec).second};
    default:
      return {cbrt_enclosure(tlo, prec).first, cbrt_enclosure(thi, prec).second};
  }
}

Rat snap_up(const Rat& v, const Int& D) { return make_rat(ceil_rat(v * Rat(D)), D); }
Rat snap_down(const Rat& v, const Int& D) { return make_rat(floor_rat(v * Rat(D)), D); }

// Inward-rounded reported arc for a certified nonempty core.
Arc finish(const ArcCore& core, const RootPow& s, const Int& q0, const Rat& lambda) {
  Arc arc;
  arc.empty = false;
  // Grid 1/D with D = 1000 * 2^ceil(k(1+lambda)), k = floor(log2 q0).
  const long k = (long)mpz_sizeinbase(q0.get_mpz_t(), 2) - 1;
  const long E = ceil_rat(Rat(k) * (lambda + 1)).get_si();
  const Int D = Int(1000) << (unsigned long)std::max(0L, E);
  const unsigned p0 = (unsigned)std::max(64L, E + 24);
  for (unsigned prec = p0; prec <= 16 * p0; prec *= 2) {
    auto [alo, ahi] = enclose(core.A, s, q0, prec);
    auto [blo, bhi] = enclose(core.B, s, q0, prec);
    const Rat lo = snap_up(ahi, D), hi = snap_down(blo, D);
    if (lo <= hi) {
      arc.lo = lo;
      arc.hi = hi;
      arc.diam_up = std::max(0.0, d_upper(bhi) - d_lower(alo));
      return arc;
    }
  }
  // Near-tangent arc thinner than the proof precision: certify a rational
  // sample point exactly (it lies in [A, B] by direct sign tests).
  auto [alo, ahi] = enclose(core.A, s, q0, 16 * p0);
  auto [blo, bhi] = enclose(core.B, s, q0, 16 * p0);
  arc.diam_up = std::max(0.0, d_upper(bhi) - d_lower(alo));
  Int D2 = D;
  for (int round = 0; round < 80; ++round) {
    const Rat c = snap_down((ahi + blo) / 2, D2);
    const Endpt cp = rat_pt(c);
    if (compare(cp, core.A, s, q0) >= 0 && compare(cp, core.B, s, q0) <= 0) {
      arc.lo = c;
      arc.hi = c;
      return arc;
    }
    D2 <<= 1;
  }
  // True tangency at an irrational point: report the enclosure midpoint
  // (membership stays exact; only the printed sample is approximate).
  arc.lo = arc.hi = snap_down((ahi + blo) / 2, D2);
  return arc;
}

}  // namespace

Arc arc_of_prepared(const IntVec4& q, const Rat& lambda, const Rat& I_lo, const Rat& I_hi,
                    const RootPow& s) {
  // Per-thread memo of the certified double range of s; block enumeration
  // issues long runs of candidates sharing one (q0, lambda).
  struct SMemo {
    bool valid = false;
    Int q0;
    Rat lambda;
    double lo = 0.0, hi = 0.0;
  };
  thread_local SMemo memo;
  if (!memo.valid || memo.q0 != q[0] || cmp(memo.lambda, lambda) != 0) {
    const auto [slo, shi] = s.enclosure(64);
    memo = {true, q[0], lambda, d_lower(slo), d_upper(shi)};
  }
  const Ctx c{s, q[0], memo.lo, memo.hi, q[0].get_d()};
  const ArcCore core = arc_core(q[1], q[2], q[3], c, I_lo, I_hi);
  if (core.empty) return Arc{};
  return finish(core, s, q[0], lambda);
}

Arc arc_of(const IntVec4& q, const Rat& lambda, const Rat& I_lo, const Rat& I_hi) {
  if (sgn(q[0]) <= 0) throw std::domain_error("arc_of: q0 must be >= 1");
  if (sgn(lambda) < 0) throw std::domain_error("arc_of: lambda must be >= 0");
  if (cmp(I_lo, I_hi) > 0) throw std::domain_error("arc_of: empty interval");
  if (sgn(I_lo) <= 0 && sgn(I_hi) >= 0)
    throw std::domain_error("arc_of: interval must exclude zero");
  if (sgn(I_hi) < 0) {
    // Reflect x -> -x: arcs of (q0,-q1,q2,-q3) on [-I_hi, -I_lo], negated.
    Arc a = arc_of(IntVec4(q[0], -q[1], q[2], -q[3]), lambda, -I_hi, -I_lo);
    if (!a.empty) {
      Rat lo = -a.hi, hi = -a.lo;
      a.lo = std::move(lo);
      a.hi = std::move(hi);
    }
    return a;
  }
  const RootPow s(q[0], lambda.get_num().get_si(), lambda.get_den().get_si());
  return arc_of_prepared(q, lambda, I_lo, I_hi, s);
}

}  // namespace vlab
