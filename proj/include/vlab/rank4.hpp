#pragma once
// Incremental exact rank tracking for vectors in Q^4 (row echelon with
// rational pivots).  Shared by the successive-minima greedy selection and the
// hyperplane span analysis.

#include <array>
#include <vector>

#include "vlab/int_vec.hpp"
#include "vlab/rat.hpp"

namespace vlab {

struct RankTracker {
  std::vector<std::array<Rat, 4>> rows;
  std::vector<int> pivots;

  int rank() const { return (int)rows.size(); }

  // Adds v if it is independent of the rows seen so far; returns whether the
  // rank grew.
  bool add(const IntVec4& v) {
    std::array<Rat, 4> r;
    for (int i = 0; i < 4; ++i) r[i] = Rat(v[i]);
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const int p = pivots[j];
      if (sgn(r[p]) == 0) continue;
      const Rat f = r[p] / rows[j][p];
      for (int i = 0; i < 4; ++i) r[i] -= f * rows[j][i];
    }
    int p = -1;
    for (int i = 0; i < 4; ++i)
      if (sgn(r[i]) != 0) {
        p = i;
        break;
      }
    if (p < 0) return false;
    rows.push_back(r);
    pivots.push_back(p);
    return true;
  }
};

}  // namespace vlab
