#pragma once
// Minimal-height rational hyperplanes through a set of integer points.  The
// orthogonal lattice is computed by integer column reduction (so it is
// saturated), then searched exactly for a sup-norm-minimal vector.

#include <vector>

#include "vlab/int_vec.hpp"
#include "vlab/rat.hpp"

namespace vlab {

struct Hyperplane {
  IntVec4 normal;   // primitive, leading nonzero coordinate positive
  Int height;       // sup-norm of the normal
  // True when the input span had dimension < 3, so the hyperplane is not
  // unique; the normal returned is then a minimal vector of the full
  // orthogonal lattice.
  bool under_determined = false;
};

// Returns the primitive integer normal of minimal sup-norm vanishing on all
// points.  Ties are broken by the lexicographically smallest normal with
// positive leading nonzero coordinate.  Throws std::domain_error if the
// points span all of Q^4 or if no nonzero point is given.
Hyperplane min_height_hyperplane(const std::vector<IntVec4>& points);

}  // namespace vlab
