#include "vlab/hyperplane.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "vlab/kernel.hpp"
#include "vlab/rank4.hpp"

namespace vlab {

Hyperplane min_height_hyperplane(const std::vector<IntVec4>& points) {
  RankTracker rt;
  std::vector<IntVec4> span;
  for (const auto& p : points) {
    if (p.is_zero()) continue;
    if (rt.add(p)) span.push_back(p);
  }
  const int r = (int)span.size();
  if (r == 0) throw std::domain_error("min_height_hyperplane: no nonzero point given");
  if (r == 4) throw std::domain_error("min_height_hyperplane: points span all of Q^4");

  std::vector<IntVec4> basis = kernel_basis(span);
  const std::size_t d = basis.size();
  if (d != (std::size_t)(4 - r)) throw invariant_error("kernel rank mismatch");
  reduce_basis(basis);

  // Upper bound for the minimal height: the best basis vector.
  Int h = sup_norm(basis[0]);
  for (std::size_t i = 1; i < d; ++i) h = std::min(h, sup_norm(basis[i]));

  // Coefficient bounds from the best-conditioned d x d column minor.
  std::vector<std::size_t> best_cols;
  Int best_det = 0;
  {
    std::vector<std::size_t> cols;
    auto consider = [&](const std::vector<std::size_t>& J) {
      std::vector<std::vector<Int>> m(d, std::vector<Int>(d));
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t t = 0; t < d; ++t) m[i][t] = basis[i][(int)J[t]];
      Int dv = abs(det_small(m));
      if (dv > best_det) {
        best_det = dv;
        best_cols = J;
      }
    };
    for (std::size_t a = 0; a < 4; ++a) {
      if (d == 1) consider({a});
      for (std::size_t b = a + 1; b < 4 && d >= 2; ++b) {
        if (d == 2) consider({a, b});
        for (std::size_t c = b + 1; c < 4 && d >= 3; ++c) consider({a, b, c});
      }
    }
  }
  if (sgn(best_det) == 0) throw invariant_error("kernel basis is rank-deficient");

  std::vector<std::vector<Int>> m(d, std::vector<Int>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t t = 0; t < d; ++t) m[i][t] = basis[i][(int)best_cols[t]];
  const auto adj = adjugate(m);

  std::vector<long> bound(d);
  Int total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    Int s = 0;
    for (std::size_t t = 0; t < d; ++t) s += abs(adj[t][i]);
    Int b = (h * s) / best_det;
    if (b > 2000000) throw resource_error("min_height_hyperplane: search bound too large");
    bound[i] = b.get_si();
    total *= 2 * b + 1;
    if (total > 40000000) throw resource_error("min_height_hyperplane: search space too large");
  }

  IntVec4 best;
  Int best_h = 0;
  bool have = false;
  std::vector<long> c(d, 0);
  for (std::size_t i = 0; i < d; ++i) c[i] = -bound[i];
  for (;;) {
    bool all_zero = true;
    for (std::size_t i = 0; i < d; ++i)
      if (c[i] != 0) all_zero = false;
    if (!all_zero) {
      IntVec4 v;
      for (int t = 0; t < 4; ++t) {
        Int s = 0;
        for (std::size_t i = 0; i < d; ++i) s += Int(c[i]) * basis[i][t];
        v[t] = s;
      }
      if (!v.is_zero()) {
        const IntVec4 canon = sign_canonical(primitive_part(v));
        const Int ch = sup_norm(canon);
        if (!have || ch < best_h || (ch == best_h && lex_less(canon, best))) {
          best = canon;
          best_h = ch;
          have = true;
        }
      }
    }
    std::size_t pos = 0;
    while (pos < d && c[pos] == bound[pos]) {
      c[pos] = -bound[pos];
      ++pos;
    }
    if (pos == d) break;
    ++c[pos];
  }
  if (!have) throw invariant_error("min_height_hyperplane: empty search");

  Hyperplane out;
  out.normal = best;
  out.height = best_h;
  out.under_determined = r < 3;
  for (const auto& p : points)
    if (sgn(dot(out.normal, p)) != 0)
      throw invariant_error("min_height_hyperplane: normal fails orthogonality");
  return out;
}

}  // namespace vlab
