#pragma once
// The skewed convex boxes used to localize approximant vectors around a
// window center x_m at scale Q = 2^k.  A box is cut out by four linear forms
//   L0(q) = q0
//   L1(q) = q0*x_m - q1
//   Li(q) = (1-i)*x_m^i*q0 + i*x_m^(i-1)*q1 - q_i          (i = 2, 3)
// with half-widths (C*Q, C*Q^{(1-lambda)/2}, C*Q^{-lambda}, C*Q^{-lambda}).
// The box constant C is stored through its exact square C2 (default 12, i.e.
// C = 2*sqrt(3)), so every membership test compares squares of exact
// rationals against DyadicPow values and is decided exactly.

#include <array>
#include <functional>

#include "vlab/dyadic_pow.hpp"
#include "vlab/int_vec.hpp"

namespace vlab {

struct DeltaBox {
  Rat x_m;
  int k = 0;
  Rat lambda;
  Rat C2;  // C^2

  // Squares of the four half-widths.
  std::array<DyadicPow, 4> half_width_sq;

  // Exact volume (2C)^4 * Q^{(3-5*lambda)/2}; rational * dyadic power since
  // (2C)^4 = 16*C2^2.
  DyadicPow volume;

  std::array<Rat, 4> form_values(const IntVec4& q) const {
    const Rat x2 = x_m * x_m;
    const Rat x3 = x2 * x_m;
    std::array<Rat, 4> L;
    L[0] = Rat(q[0]);
    L[1] = x_m * Rat(q[0]) - Rat(q[1]);
    L[2] = -x2 * Rat(q[0]) + 2 * x_m * Rat(q[1]) - Rat(q[2]);
    L[3] = -2 * x3 * Rat(q[0]) + 3 * x2 * Rat(q[1]) - Rat(q[3]);
    return L;
  }

  // Membership of q in scale*box, decided exactly via squared comparisons.
  // scale_sq is the square of the dilation factor.
  bool contains(const IntVec4& q, const Rat& scale_sq = Rat(1)) const {
    const auto L = form_values(q);
    for (int i = 0; i < 4; ++i) {
      DyadicPow bound = half_width_sq[i] * scale_sq;
      if (bound.cmp(L[i] * L[i]) < 0) return false;
    }
    return true;
  }

  // Squared box norm of q: max_i L_i(q)^2 / w_i^2 (exact).
  DyadicPow norm_sq(const IntVec4& q) const {
    const auto L = form_values(q);
    DyadicPow best = DyadicPow(L[0] * L[0]) / half_width_sq[0];
    for (int i = 1; i < 4; ++i) {
      DyadicPow v = DyadicPow(L[i] * L[i]) / half_width_sq[i];
      if (best.cmp(v) < 0) best = v;
    }
    return best;
  }
};

// Builds the box; rejects lambda outside [1/3, 1], k < 0, C2 <= 0.
DeltaBox build_box(const Rat& x_m, int k, const Rat& lambda, const Rat& C2);

// Visits all integer points q with |L_i(q)| <= scale * half-width for all i,
// in lexicographic order on (q0,q1,q2,q3).  Exact membership; a conservative
// work prediction above `work_cap` raises resource_error.
void visit_box_points(const DeltaBox& box, const Rat& scale_sq, double work_cap,
                      const std::function<void(long, long, long, long)>& fn);

// Same, materialized; storage is additionally backstopped at min(cap, 3e6).
std::vector<IntVec4> enumerate_box_points(const DeltaBox& box, const Rat& scale_sq = Rat(1),
                                          double cap = 5e7);

}  // namespace vlab
