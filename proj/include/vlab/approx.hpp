#pragma once
// Dyadic blocks of simultaneous rational approximants on the cubic Veronese
// curve: arcs B_q, block enumeration (fast + brute-force oracle), and the
// binary/CSV block cache.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vlab/int_vec.hpp"
#include "vlab/rat.hpp"
#include "vlab/root_pow.hpp"

namespace vlab {

// Closed subinterval of I on which max_i |q0 x^i - q_i| <= q0^{-lambda}.
// Emptiness (and tangency) is decided exactly through the algebraic sign
// kernel; the stored endpoints are inward-rounded rationals on a dyadic
// millesimal grid, so [lo, hi] is a certified subset of the true arc.
// diam_up is a certified upper bound on the true arc diameter.
struct Arc {
  bool empty = true;
  Rat lo, hi;
  double diam_up = 0.0;
};

// q0 >= 1 required; I must not contain zero.
Arc arc_of(const IntVec4& q, const Rat& lambda, const Rat& I_lo, const Rat& I_hi);

// Same, with a caller-prepared sign kernel for s = q0^{-lambda} (block
// enumeration reuses one kernel per q0).  Requires positive I.
Arc arc_of_prepared(const IntVec4& q, const Rat& lambda, const Rat& I_lo, const Rat& I_hi,
                    const RootPow& s);

struct ApproximantVector {
  IntVec4 q;  // q[0] >= 1
  Rat arc_lo, arc_hi;
  double diam_up = 0.0;
};

struct DyadicBlock {
  int k = 0;
  Rat lambda;
  Rat I_lo, I_hi;
  bool primitive_only = false;
  std::vector<ApproximantVector> members;  // lexicographically sorted by q
  double rho_plus = 0.0;  // max member diam_up (upper bound on max arc diameter)
};

// Aggregate view of one block: the raw count and arc-diameter bound, plus
// (when the block has been classified) per-label and per-cell tallies.
struct BlockSummary {
  int k = 0;
  std::size_t count = 0;
  double rho_plus = 0.0;
  std::map<std::string, std::size_t> per_label;
  std::map<std::string, std::size_t> per_cell;
};

// All q with 2^k <= q0 < 2^{k+1} and non-empty arc, in lexicographic order.
// k > k_cap raises resource_error (explicit override by passing a larger
// cap).  threads = 0 picks the hardware concurrency; enumeration shards by
// q0 sub-ranges and merges deterministically.
DyadicBlock enumerate_block(const Rat& I_lo, const Rat& I_hi, const Rat& lambda,
                            int k, bool primitive_only = false, int k_cap = 24,
                            int threads = 0);

// Independent test oracle: iterates the full bounding ranges
// q_i in [q0*min(I^i)-1, q0*max(I^i)+1], skipping only prefixes whose exact
// rational window is provably empty, and decides each survivor with arc_of.
// Refuses k > 12.
DyadicBlock brute_force_block(const Rat& I_lo, const Rat& I_hi, const Rat& lambda,
                              int k, bool primitive_only = false);

BlockSummary block_summary(const DyadicBlock& block);

// Count and diameter bound of a block without materializing its members;
// this is what large-k dimension sweeps run on.
BlockSummary enumerate_summary(const Rat& I_lo, const Rat& I_hi, const Rat& lambda,
                               int k, bool primitive_only = false, int k_cap = 24,
                               int threads = 0);

// Binary block cache: little-endian, magic "VLAB", version u16, header with
// I and lambda as numerator/denominator i64 pairs, then member records.
// Writes go through a temp file + rename; partial blocks are never visible.
void save_block(const DyadicBlock& block, const std::string& path);
DyadicBlock load_block(const std::string& path);

// Deterministic cache file name from the block key.
std::string block_cache_name(const Rat& I_lo, const Rat& I_hi, const Rat& lambda,
                             int k, bool primitive_only);

// CSV export: header then one line per member, columns
// q0,q1,q2,q3,arc_lo,arc_hi (decimal strings).
void export_csv(const DyadicBlock& block, const std::string& path);

}  // namespace vlab
