#include "vlab/delta_box.hpp"

#include <algorithm>
#include <cmath>

namespace vlab {

namespace {

// Certified double enclosure of the square root of a DyadicPow (value >= 0).
std::pair<double, double> sqrt_enclosure_d(const DyadicPow& sq) {
  if (sq.sign() < 0) throw invariant_error("sqrt of negative half-width square");
  if (sq.is_zero()) return {0.0, 0.0};
  auto [rlo, rhi] = sq.enclosure(80);
  double lo = std::sqrt(d_lower(rlo));
  double hi = std::sqrt(d_upper(rhi));
  lo = std::nextafter(std::nextafter(lo, 0.0), 0.0);
  hi = std::nextafter(std::nextafter(hi, HUGE_VAL), HUGE_VAL);
  return {lo, hi};
}

// Integer candidates for |center - q| <= W screened in double precision:
// [outer_lo, outer_hi] is a superset of the true range, and candidates inside
// [inner_lo, inner_hi] are certainly in range.  Only the two narrow boundary
// bands need exact confirmation.  err bounds |center_d - center| plus the
// enclosure slack of W.
struct CandRange {
  long outer_lo, inner_lo, inner_hi, outer_hi;
};

CandRange cand_range(double center_d, double err, double wlo, double whi) {
  CandRange r;
  r.outer_lo = (long)std::ceil(center_d - whi - err);
  r.outer_hi = (long)std::floor(center_d + whi + err);
  r.inner_lo = (long)std::ceil(center_d - wlo + err);
  r.inner_hi = (long)std::floor(center_d + wlo - err);
  return r;
}

}  // namespace

void visit_box_points(const DeltaBox& box, const Rat& scale_sq, double work_cap,
                      const std::function<void(long, long, long, long)>& fn) {
  if (sgn(scale_sq) <= 0) throw std::domain_error("visit_box_points: scale must be positive");

  std::array<DyadicPow, 4> wsq;
  for (int i = 0; i < 4; ++i) wsq[i] = box.half_width_sq[i] * scale_sq;

  std::array<std::pair<double, double>, 4> w_d;
  for (int i = 0; i < 4; ++i) w_d[i] = sqrt_enclosure_d(wsq[i]);

  // The loops below visit at most (2*W0+3)(2*W1+3) pairs (q0,q1); refuse
  // work above the cap.
  const double pair_pred = (2.0 * w_d[0].second + 3.0) * (2.0 * w_d[1].second + 3.0);
  if (pair_pred > work_cap)
    throw resource_error("visit_box_points: predicted enumeration work exceeds cap");

  const double xm = box.x_m.get_d();
  const double xm2 = xm * xm, xm3 = xm2 * xm;
  const Rat& xr = box.x_m;
  const Rat xr2 = xr * xr;
  const Rat xr3 = xr2 * xr;

  // q0 bound: q0^2 <= wsq[0], fixed up exactly around the double estimate.
  long B0;
  {
    auto [rlo, rhi] = wsq[0].enclosure(80);
    (void)rlo;
    B0 = (long)std::floor(std::sqrt(d_upper(rhi)) + 0.5);
    auto fits = [&](long v) { return wsq[0].cmp(Rat(Int(v) * Int(v))) >= 0; };
    while (B0 > 0 && !fits(B0)) --B0;
    while (fits(B0 + 1)) ++B0;
  }

  // Window centers are degree-1 in (q0, q1); this margin dominates their
  // double rounding error for |q0| up to 2^27 plus the W enclosure slack.
  const double err = (std::fabs(xm) + 1.0) * ((double)B0 + 1.0) * 1e-14 + 1e-9;

  for (long q0 = -B0; q0 <= B0; ++q0) {
    const double c1d = xm * (double)q0;
    const auto r1 = cand_range(c1d, err, w_d[1].first, w_d[1].second);
    for (long q1 = r1.outer_lo; q1 <= r1.outer_hi; ++q1) {
      if (q1 < r1.inner_lo || q1 > r1.inner_hi) {
        const Rat d = xr * Rat((long)q0) - Rat(q1);
        if (wsq[1].cmp(d * d) < 0) continue;
      }
      const double c2d = -xm2 * (double)q0 + 2 * xm * (double)q1;
      const double c3d = -2 * xm3 * (double)q0 + 3 * xm2 * (double)q1;
      const auto r2 = cand_range(c2d, err, w_d[2].first, w_d[2].second);
      const auto r3 = cand_range(c3d, err, w_d[3].first, w_d[3].second);
      for (long q2 = r2.outer_lo; q2 <= r2.outer_hi; ++q2) {
        if (q2 < r2.inner_lo || q2 > r2.inner_hi) {
          const Rat d = -xr2 * Rat((long)q0) + 2 * xr * Rat((long)q1) - Rat(q2);
          if (wsq[2].cmp(d * d) < 0) continue;
        }
        for (long q3 = r3.outer_lo; q3 <= r3.outer_hi; ++q3) {
          if (q3 < r3.inner_lo || q3 > r3.inner_hi) {
            const Rat d = -2 * xr3 * Rat((long)q0) + 3 * xr2 * Rat((long)q1) - Rat(q3);
            if (wsq[3].cmp(d * d) < 0) continue;
          }
          fn(q0, q1, q2, q3);
        }
      }
    }
  }
}

std::vector<IntVec4> enumerate_box_points(const DeltaBox& box, const Rat& scale_sq, double cap) {
  std::vector<IntVec4> out;
  visit_box_points(box, scale_sq, cap, [&](long q0, long q1, long q2, long q3) {
    out.push_back(IntVec4::of(q0, q1, q2, q3));
    if ((double)out.size() > std::min(cap, 3e6))
      throw resource_error("enumerate_box_points: point storage exceeds cap");
  });
  return out;
}

}  // namespace vlab
