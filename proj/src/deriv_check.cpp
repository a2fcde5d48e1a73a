// Verifier for the small-derivative and small-discriminant inequalities on
// a window at scale Q = 2^k.  The four sample values and their divided
// differences are exact rationals; every threshold Q^e with rational e is
// compared through exact dyadic powers, so each verdict is a certificate.
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vlab/cubic.hpp"
#include "vlab/dyadic_pow.hpp"

namespace vlab {
namespace {

Rat rat_abs(const Rat& x) { return sgn(x) < 0 ? Rat(-x) : x; }

// Rigorous upper bound for sup_J |P|: endpoint values, plus each critical
// point of P inside J enclosed tightly and padded by a Lipschitz term.
Rat sup_abs_bound(const CubicPoly& P, const Rat& J_lo, const Rat& J_hi) {
  Rat sup = std::max(rat_abs(P.eval(J_lo)), rat_abs(P.eval(J_hi)));
  const Rat d2 = Rat(Rat(P[2]) * P[2] - 3 * Rat(P[3]) * P[1]);
  if (sgn(d2) < 0) return sup;  // no real critical points
  auto [sl, sh] = sqrt_enclosure(d2, 200);
  const Rat den = Rat(3 * Rat(P[3]));
  const Rat B = std::max(rat_abs(J_lo), rat_abs(J_hi));
  const Rat lip = Rat(3 * rat_abs(Rat(P[3])) * B * B +
                      2 * rat_abs(Rat(P[2])) * B + rat_abs(Rat(P[1])));
  for (int pm = -1; pm <= 1; pm += 2) {
    Rat lo = Rat((-Rat(P[2]) + (pm < 0 ? Rat(-sh) : sl)) / den);
    Rat hi = Rat((-Rat(P[2]) + (pm < 0 ? Rat(-sl) : sh)) / den);
    if (lo > hi) std::swap(lo, hi);
    const Rat cl = std::max(lo, J_lo), ch = std::min(hi, J_hi);
    if (cl > ch) continue;
    Rat val = std::max(rat_abs(P.eval(cl)), rat_abs(P.eval(ch)));
    val += lip * Rat(ch - cl);
    if (val > sup) sup = val;
  }
  return sup;
}

}  // namespace

DerivativeReport derivative_bounds_check(const CubicPoly& P, const Rat& J_lo,
                                         const Rat& J_hi, const Rat& w, const Rat& eta,
                                         int k, double c1, double cd) {
  if (P.degree() != 3)
    throw std::domain_error("derivative_bounds_check: degree 3 required");
  if (!(J_lo < J_hi))
    throw std::domain_error("derivative_bounds_check: empty interval");
  if (k < 1) throw std::domain_error("derivative_bounds_check: k >= 1 required");
  if (!std::isfinite(c1) || c1 <= 0 || !std::isfinite(cd) || cd <= 0)
    throw std::domain_error("derivative_bounds_check: positive constants required");

  DerivativeReport rep;
  const Rat len = Rat(J_hi - J_lo);
  const Rat a3_abs = rat_abs(Rat(P[3]));

  // |J| >= Q^(-w/2 - eta)
  rep.pre_interval_long_enough = q_pow(k, Rat(-w / 2 - eta)).cmp(len) <= 0;

  // sup_J |P| <= a3 Q^-w
  rep.pre_sup_small_enough =
      DyadicPow(sup_abs_bound(P, J_lo, J_hi)).cmp(q_pow(k, Rat(-w)) * a3_abs) <= 0;

  // Divided differences over the four equally spaced nodes (endpoints
  // included): b_i = P[y_0 .. y_i].
  const Rat h = Rat(len / 3);
  std::array<Rat, 4> y, dd;
  for (int j = 0; j < 4; ++j) {
    y[j] = Rat(J_lo + j * h);
    dd[j] = P.eval(y[j]);
  }
  for (int order = 1; order < 4; ++order)
    for (int j = 3; j >= order; --j)
      dd[j] = Rat((dd[j] - dd[j - 1]) / (y[j] - y[j - order]));
  for (int i = 0; i < 4; ++i) rep.b[i] = dd[i];

  // |b_i| <= c1 * (6^i / i!) * a3 * Q^(-w + i(w/2 + eta)); the i-th divided
  // difference over equally spaced nodes of gap h obeys
  // |b_i| <= sup|P| * h^-i * 2^i / i!, and h = |J|/3 >= Q^(-w/2-eta)/3.
  static const long kPow6[4] = {1, 6, 36, 216};
  static const long kFact[4] = {1, 1, 2, 6};
  const Rat c1_exact = Rat(mpq_class(c1));
  bool deriv_ok = true;
  double c1_need = 0.0;
  for (int i = 0; i < 4; ++i) {
    const DyadicPow bound =
        q_pow(k, Rat(-w + i * (w / 2 + eta))) * Rat(a3_abs * kPow6[i] / kFact[i]);
    const DyadicPow lhs = DyadicPow(rat_abs(rep.b[i]));
    if (lhs.cmp(bound * c1_exact) > 0) deriv_ok = false;
    c1_need = std::max(c1_need, (lhs / bound).to_double());
  }
  rep.deriv_bound_ok = deriv_ok;
  rep.c1_required = c1_need;

  // |disc| <= cd * a3^4 * spread^2 * Q^(-w + 2 eta), i.e. the bound with the
  // measured kappa = -log_Q(spread).
  const Int disc = discriminant(P);
  const double spread = root_spread(P);
  rep.kappa = spread > 0 ? -std::log2(spread) / k
                         : std::numeric_limits<double>::infinity();
  const Rat spread_exact = Rat(mpq_class(spread));  // doubles are dyadic
  const DyadicPow rhs = q_pow(k, Rat(-w + 2 * eta)) *
                        Rat(pow_rat(Rat(P[3]), 4) * spread_exact * spread_exact);
  const DyadicPow lhs = DyadicPow(Rat(Int(abs(disc))));
  rep.disc_bound_ok = lhs.cmp(rhs * Rat(mpq_class(cd))) <= 0;
  if (rhs.is_zero())
    rep.cd_required = sgn(disc) == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  else
    rep.cd_required = (lhs / rhs).to_double();
  return rep;
}

}  // namespace vlab
