#pragma once
// Shared integer-lattice utilities: unimodular column reduction (integer
// kernels with complements), basis reduction, and small exact determinants.

#include <array>
#include <vector>

#include "vlab/int_vec.hpp"
#include "vlab/rat.hpp"

namespace vlab {

using Mat4 = std::array<std::array<Int, 4>, 4>;

// Nearest-integer division (ties rounded up).
Int round_div(const Int& a, const Int& b);

// Integer kernel of the row set via unimodular column reduction: returns a
// basis of {x in Z^4 : row . x = 0 for every row}; this basis generates the
// full (saturated) orthogonal lattice.  If `complement` is non-null it
// receives the remaining columns of the unimodular transform, which extend
// the kernel basis to a basis of Z^4.  If `transform` is non-null it receives
// the full unimodular matrix U (columns: complement first, then kernel).
std::vector<IntVec4> kernel_basis(const std::vector<IntVec4>& rows,
                                  std::vector<IntVec4>* complement = nullptr,
                                  Mat4* transform = nullptr);

// Greedy pairwise reduction on the squared Euclidean norm (terminates: the
// norm sum is a strictly decreasing positive integer).
void reduce_basis(std::vector<IntVec4>& basis);

// Determinant / adjugate of small dense integer matrices (d <= 3), with
// adj[t][i] laid out so that M^{-1} = adj / det.
Int det_small(const std::vector<std::vector<Int>>& m);
std::vector<std::vector<Int>> adjugate(const std::vector<std::vector<Int>>& m);

// Inverse of a unimodular 4x4 integer matrix (det = +-1), exact.
Mat4 inverse_unimodular(const Mat4& u);

}  // namespace vlab
