#pragma once
// Successive minima of a DeltaBox over the integer lattice.  The box norm of
// q is max_i |L_i(q)| / w_i; the minima are found by doubling a power-of-two
// dilation until four linearly independent lattice points are captured, then
// greedily selecting points in exact-norm order.  Everything that decides a
// value is exact; doubles appear only as search accelerators and in the
// reported tau approximations (relative error <= 1e-9).

#include <array>

#include "vlab/delta_box.hpp"

namespace vlab {

struct SuccessiveMinima {
  std::array<double, 4> tau;          // tau_1 <= ... <= tau_4, ~1e-9 relative
  std::array<DyadicPow, 4> tau_sq;    // exact squared minima
  std::array<IntVec4, 4> witnesses;   // linearly independent attaining vectors
  long dilation_log2 = 0;             // final search dilation T = 2^this
};

// Exact successive minima with witnesses.  Throws resource_error if the
// dilation needed exceeds 4 * C * Q^lambda (the a priori bound on tau_4).
SuccessiveMinima successive_minima(const DeltaBox& box);

// tau_1 * tau_2 * tau_3 * tau_4 * vol(box), as a double for reporting.
double minkowski_ratio(const DeltaBox& box, const SuccessiveMinima& m);

// Exact check of 2^4/4! <= tau_1*tau_2*tau_3*tau_4*vol <= 2^4 (closed bounds:
// both ends are attainable).
bool minkowski_in_bounds(const DeltaBox& box, const SuccessiveMinima& m);

}  // namespace vlab
