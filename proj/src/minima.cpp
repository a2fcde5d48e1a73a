#include "vlab/minima.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "vlab/kernel.hpp"
#include "vlab/rank4.hpp"

namespace vlab {

namespace {

Rat pow2_rat(long e) {
  if (e >= 0) return Rat(Int(1) << (unsigned long)e);
  return make_rat(Int(1), Int(1) << (unsigned long)(-e));
}

// Certified double bounds for sqrt of a nonnegative DyadicPow.
double sqrt_upper(const DyadicPow& sq) {
  if (sq.is_zero()) return 0.0;
  auto [lo, hi] = sq.enclosure(64);
  (void)lo;
  double h = std::sqrt(d_upper(hi));
  return std::nextafter(std::nextafter(h, HUGE_VAL), HUGE_VAL);
}

double sqrt_lower(const DyadicPow& sq) {
  if (sq.is_zero()) return 0.0;
  auto [lo, hi] = sq.enclosure(64);
  (void)hi;
  double l = std::sqrt(d_lower(lo));
  l = std::nextafter(std::nextafter(l, 0.0), 0.0);
  return l < 0.0 ? 0.0 : l;
}

// Predicted (q0,q1) loop iterations at squared dilation scale_sq.
double predict_pairs(const DeltaBox& box, const Rat& scale_sq) {
  const double f0 = 2.0 * sqrt_upper(box.half_width_sq[0] * scale_sq) + 3.0;
  const double f1 = 2.0 * sqrt_upper(box.half_width_sq[1] * scale_sq) + 3.0;
  return f0 * f1;
}

// ---------------------------------------------------------------------------
// Layer 1: streaming greedy minima over complete enumerations at doubling
// dilations.  By the matroid exchange property, the greedy minima system of
// S u {q} is computable from the greedy system of S plus q alone, so only the
// current witnesses are kept; a certified per-form double prefilter skips
// almost every visited point once four witnesses exist.  Rank-deficient boxes
// leave this layer early and are finished by the quotient solver below.
// ---------------------------------------------------------------------------

constexpr double kPairBudget = 2e7;   // (q0,q1) iterations per level
constexpr double kPairCeiling = 2e9;  // absolute bound while rank is 0

struct Selected {
  IntVec4 q;
  DyadicPow nsq;
};

struct GreedyState {
  std::vector<Selected> sel;  // sorted by (norm, lex); greedy-independent
  long level = 0;             // last fully enumerated dilation exponent

  void insert(const IntVec4& q, DyadicPow nsq) {
    std::vector<Selected> merged;
    bool placed = false;
    for (auto& s : sel) {
      if (!placed) {
        const int c = nsq.cmp(s.nsq);
        if (c < 0 || (c == 0 && lex_less(q, s.q))) {
          merged.push_back({q, nsq});
          placed = true;
        }
      }
      merged.push_back(s);
    }
    if (!placed) merged.push_back({q, nsq});
    sel.clear();
    RankTracker rank;
    for (auto& s : merged) {
      if (!rank.add(s.q)) continue;
      sel.push_back(std::move(s));
      if (sel.size() == 4) break;
    }
  }
};

// One complete enumeration level; the greedy state carries over (points from
// smaller dilations are a subset, so re-visits are skipped or idempotent).
//
// Filtering logic, all certified through double bounds with explicit error
// margins: a visited point that is strictly above the norms of the first r'
// selected witnesses and lies in their span can never enter the greedy
// system (it depends on strict predecessors, a property stable under any
// later insertion); with r' = 4 it is irrelevant outright.  Points certainly
// inside the previous, fully processed dilation level are skipped.  What
// survives takes the exact path; when that happens too often (degenerate
// boxes where many norms tie the current minima exactly), the level aborts
// and the caller falls back to the quotient solver.  Returns false on abort,
// leaving the state modified (the caller restores its snapshot).
constexpr long kLevelExactBudget = 100000;

struct AbortLevel {};

bool greedy_level(const DeltaBox& box, long j, double work_cap, bool has_prev,
                  GreedyState& st) {
  const Rat scale_sq = pow2_rat(2 * j);

  double w_hi[4], w1_hi[4], w_prev_lo[4];
  for (int i = 0; i < 4; ++i) {
    const DyadicPow wsq = box.half_width_sq[i] * scale_sq;
    w_hi[i] = sqrt_upper(wsq);
    w1_hi[i] = sqrt_upper(box.half_width_sq[i]);  // norms are T=1-normalized
    w_prev_lo[i] = has_prev ? 0.5 * sqrt_lower(wsq) : -1.0;
  }
  const double xm = box.x_m.get_d();
  const double xm2 = xm * xm, xm3 = xm2 * xm;
  // Absolute error of the double form values: each is a short sum of products
  // of x_m powers with |q0|,|q1| bounded by the first two windows.
  const double axm = std::fabs(xm) + 1.0;
  const double ferr = axm * axm * axm * (w_hi[0] + w_hi[1] + 2.0) * 1e-14 + 1e-12;
  // Coordinate magnitude bounds for the visited points (window centers plus
  // widths), used to certify the double dot products below.
  const double m0 = w_hi[0] + 2.0;
  const double m1 = std::fabs(xm) * m0 + w_hi[1] + 2.0;
  const double m2 = xm2 * m0 + 2.0 * std::fabs(xm) * m1 + w_hi[2] + 2.0;
  const double m3 = 2.0 * std::fabs(xm) * xm2 * m0 + 3.0 * xm2 * m1 + w_hi[3] + 2.0;
  const double mm[4] = {m0, m1, m2, m3};

  struct Normal {
    double n[4];
    IntVec4 v;
    bool exact_only;  // doubles cannot certify the sign: use exact dots
  };
  struct Prefix {
    double bound[4];              // upper(norm of sel[r'-1]) * w1_hi[i]
    std::vector<Normal> normals;  // kernel of the first r' witnesses (r' < 4)
  };
  std::vector<Prefix> prefixes;

  auto refresh = [&]() {
    prefixes.clear();
    std::vector<IntVec4> span;
    for (std::size_t rp = 1; rp <= st.sel.size(); ++rp) {
      span.push_back(st.sel[rp - 1].q);
      Prefix p;
      const double up = sqrt_upper(st.sel[rp - 1].nsq);
      for (int i = 0; i < 4; ++i) p.bound[i] = up * w1_hi[i];
      if (rp < 4) {
        for (const auto& nv : kernel_basis(span)) {
          Normal n;
          n.v = nv;
          double err = 0.0;
          bool big = false;
          for (int i = 0; i < 4; ++i) {
            n.n[i] = nv[i].get_d();
            if (std::fabs(n.n[i]) > 9e15) big = true;
            err += std::fabs(n.n[i]) * mm[i];
          }
          n.exact_only = big || err * 4e-16 > 0.4;
          p.normals.push_back(n);
        }
      }
      prefixes.push_back(std::move(p));
    }
  };
  refresh();

  long exact_evals = 0;
  const std::function<void(long, long, long, long)> visit = [&](long q0, long q1,
                                                                long q2, long q3) {
    if (q0 == 0 && q1 == 0 && q2 == 0 && q3 == 0) return;
    if (!st.sel.empty()) {
      const double d0 = (double)q0, d1 = (double)q1, d2 = (double)q2, d3 = (double)q3;
      const double L[4] = {d0, xm * d0 - d1, -xm2 * d0 + 2 * xm * d1 - d2,
                           -2 * xm3 * d0 + 3 * xm2 * d1 - d3};
      if (has_prev && std::fabs(L[0]) + ferr <= w_prev_lo[0] &&
          std::fabs(L[1]) + ferr <= w_prev_lo[1] &&
          std::fabs(L[2]) + ferr <= w_prev_lo[2] &&
          std::fabs(L[3]) + ferr <= w_prev_lo[3])
        return;  // certainly handled by the previous level
      int rp = 0;
      for (int r = (int)st.sel.size(); r >= 1; --r) {
        const Prefix& p = prefixes[(std::size_t)(r - 1)];
        if (std::fabs(L[0]) - ferr > p.bound[0] || std::fabs(L[1]) - ferr > p.bound[1] ||
            std::fabs(L[2]) - ferr > p.bound[2] || std::fabs(L[3]) - ferr > p.bound[3]) {
          rp = r;
          break;
        }
      }
      if (rp == 4) return;  // strictly worse than all four witnesses
      if (rp >= 1) {
        bool independent = false;
        for (const auto& n : prefixes[(std::size_t)(rp - 1)].normals) {
          if (!n.exact_only) {
            const double dd = n.n[0] * d0 + n.n[1] * d1 + n.n[2] * d2 + n.n[3] * d3;
            if (std::fabs(dd) < 0.5) continue;
            independent = true;
            break;
          }
          Int v = n.v[0] * q0 + n.v[1] * q1 + n.v[2] * q2 + n.v[3] * q3;
          if (sgn(v) != 0) {
            independent = true;
            break;
          }
        }
        if (!independent) return;  // depends on strict predecessors
      }
    }
    if (++exact_evals > kLevelExactBudget) throw AbortLevel{};
    const IntVec4 q = IntVec4::of(q0, q1, q2, q3);
    DyadicPow nsq = box.norm_sq(q);
    if (st.sel.size() == 4 && nsq.cmp(st.sel[3].nsq) >= 0) return;
    st.insert(q, std::move(nsq));
    refresh();
  };
  try {
    visit_box_points(box, scale_sq, work_cap, visit);
  } catch (const AbortLevel&) {
    return false;
  }
  st.level = j;
  return true;
}

// ---------------------------------------------------------------------------
// Layer 2: exact quotient-class refinement.  Given independent witnesses of
// the first r minima, the next minimum is the smallest box norm outside their
// span.  Writing Z^4 = S + <t_1..t_{4-r}> with S the saturated span, each
// candidate lives in a class  y != 0  of the quotient, and within a class the
// norm is a convex function of the S-coordinates; the innermost coordinate is
// minimized by exact integer ternary search, so no full dilation enumeration
// is ever needed.  Coordinate bounds come from dual functionals: writing an
// integer functional u as  u.q = sum_b gamma_b L_b(q)  gives
// |u.q| <= N(q) * sum_b |gamma_b| w_b.
// ---------------------------------------------------------------------------

class QuotientStep {
 public:
  QuotientStep(const DeltaBox& box, const std::vector<IntVec4>& witnesses, long* eval_budget)
      : box_(box), budget_(eval_budget) {
    const int r = (int)witnesses.size();
    const int m = 4 - r;
    std::vector<IntVec4> normals = kernel_basis(witnesses);
    if ((int)normals.size() != m)
      throw invariant_error("successive_minima: witness span has wrong rank");

    for (int i = 0; i < 4; ++i) w_up_[i] = sqrt_upper(box.half_width_sq[i]);

    // Reduce the normal basis under the functional bound h (pairwise greedy);
    // the class caps below scale with h of the dual rows, which are arranged
    // to be exactly these normals.
    for (int round = 0; round < 64; ++round) {
      bool improved = false;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          if (i == j) continue;
          for (;;) {
            const double h0 = functional_bound(normals[(std::size_t)i]);
            IntVec4 plus, minus;
            for (int c = 0; c < 4; ++c) {
              plus[c] = normals[(std::size_t)i][c] + normals[(std::size_t)j][c];
              minus[c] = normals[(std::size_t)i][c] - normals[(std::size_t)j][c];
            }
            const double hp = functional_bound(plus), hm = functional_bound(minus);
            if (hp < h0 && hp <= hm)
              normals[(std::size_t)i] = plus;
            else if (hm < h0)
              normals[(std::size_t)i] = minus;
            else
              break;
            improved = true;
          }
        }
      if (!improved) break;
    }

    std::vector<IntVec4> t_part;
    s_basis_ = kernel_basis(normals, &t_part);
    if ((int)s_basis_.size() != r || (int)t_part.size() != m)
      throw invariant_error("successive_minima: saturation failed");
    reduce_basis(s_basis_);
    whiten_reduce();

    // Re-pair the complement so that normals . t = identity; then the first
    // 4-r dual rows coincide with the reduced normals and the class caps
    // inherit their small functional bounds.
    {
      std::vector<std::vector<Int>> pairing((std::size_t)m, std::vector<Int>((std::size_t)m));
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          pairing[(std::size_t)i][(std::size_t)j] = dot(normals[(std::size_t)i], t_part[(std::size_t)j]);
      const Int det = det_small(pairing);
      if (det != 1 && det != -1)
        throw invariant_error("successive_minima: complement pairing not unimodular");
      std::vector<std::vector<Int>> adj = adjugate(pairing);  // pairing^{-1} = adj / det
      std::vector<IntVec4> t_new((std::size_t)m);
      for (int i = 0; i < m; ++i)
        for (int c = 0; c < 4; ++c) {
          Int v = 0;
          for (int kk = 0; kk < m; ++kk)
            v += t_part[(std::size_t)kk][c] * adj[(std::size_t)kk][(std::size_t)i];
          t_new[(std::size_t)i][c] = det == 1 ? v : Int(-v);
        }
      t_part = std::move(t_new);
    }

    // Babai-shorten the complement against the span basis in the whitened
    // form metric sum_c (L_c / w_c)^2: only span vectors are subtracted, so
    // the classes and the unimodularity of [t | s] survive, while the dual
    // functionals and the initial candidates improve.
    for (auto& t : t_part) babai_whiten(t);
    t_basis_ = t_part;

    for (const auto& s : s_basis_) s_forms_.push_back(box.form_values(s));
    for (const auto& t : t_basis_) t_forms_.push_back(box.form_values(t));

    // Dual functionals of the final basis: row j < m reads off the class
    // coordinate y_j (it equals the j-th reduced normal by the pairing
    // above), row m + i the span coordinate z_i.
    Mat4 u{};
    for (int col = 0; col < m; ++col)
      for (int row = 0; row < 4; ++row) u[(std::size_t)row][(std::size_t)col] = t_basis_[(std::size_t)col][row];
    for (int col = 0; col < r; ++col)
      for (int row = 0; row < 4; ++row)
        u[(std::size_t)row][(std::size_t)(m + col)] = s_basis_[(std::size_t)col][row];
    dual_ = inverse_unimodular(u);
    for (int j = 0; j < 4; ++j) {
      IntVec4 row;
      for (int c = 0; c < 4; ++c) row[c] = dual_[(std::size_t)j][(std::size_t)c];
      h_up_[j] = functional_bound(row);
    }
  }

  // Smallest box norm outside the span, with a witness.
  std::pair<DyadicPow, IntVec4> solve() {
    const int r = (int)s_basis_.size();
    const int m = 4 - r;

    // Initial upper bound from the complement vectors and unit vectors.
    bool have = false;
    for (const auto& t : t_basis_) consider(t, have);
    for (int i = 0; i < 4; ++i) {
      IntVec4 e;
      e[i] = 1;
      if (!in_span(e)) consider(e, have);
    }
    if (!have) throw invariant_error("successive_minima: no candidate outside span");

    // Class bounds from the initial upper bound: any class coordinate y_j
    // obeys |y_j| <= N * h(dual_j), so classes beyond these limits cannot
    // improve on the initial candidate.
    std::vector<long> y_cap((std::size_t)m);
    for (int j = 0; j < m; ++j) y_cap[(std::size_t)j] = bound_from(best_d_, h_up_[(std::size_t)j]);

    std::vector<long> y((std::size_t)m, 0);
    for (int j = 0; j < m; ++j) y[(std::size_t)j] = -y_cap[(std::size_t)j];
    for (;;) {
      // Skip y = 0 and one of each +-y pair (the norm is symmetric).
      int first_nz = -1;
      for (int j = m - 1; j >= 0; --j)
        if (y[(std::size_t)j] != 0) first_nz = j;
      if (first_nz >= 0 && y[(std::size_t)first_nz] > 0) {
        bool pruned = false;
        for (int j = 0; j < m; ++j)
          if ((double)std::labs(y[(std::size_t)j]) >
              best_d_ * h_up_[(std::size_t)j] + 1e-9) {
            pruned = true;
            break;
          }
        if (!pruned) solve_class(y);
      }
      int pos = 0;
      while (pos < m && y[(std::size_t)pos] == y_cap[(std::size_t)pos]) {
        y[(std::size_t)pos] = -y_cap[(std::size_t)pos];
        ++pos;
      }
      if (pos == m) break;
      ++y[(std::size_t)pos];
    }
    return {best_sq_, best_q_};
  }

 private:
  using Forms = std::array<Rat, 4>;

  double functional_bound(const IntVec4& u) const {
    // u.q = gamma0*L0 + gamma1*L1 + gamma2*L2 + gamma3*L3 with
    // gamma0 = u0 + u1 x + u2 x^2 + u3 x^3, gamma1 = -(u1 + 2x u2 + 3x^2 u3),
    // gamma2 = -u2, gamma3 = -u3.
    const Rat& x = box_.x_m;
    const Rat x2 = x * x;
    const Rat x3 = x2 * x;
    const Rat g0 = Rat(u[0]) + Rat(u[1]) * x + Rat(u[2]) * x2 + Rat(u[3]) * x3;
    const Rat g1 = Rat(u[1]) + 2 * x * Rat(u[2]) + 3 * x2 * Rat(u[3]);
    double h = 0.0;
    h += std::fabs(g0.get_d()) * w_up_[0];
    h += std::fabs(g1.get_d()) * w_up_[1];
    h += std::fabs(Rat(u[2]).get_d()) * w_up_[2];
    h += std::fabs(Rat(u[3]).get_d()) * w_up_[3];
    return h * 1.000000001 + 1e-12;
  }

  static long bound_from(double norm_up, double h_up) {
    const double b = norm_up * h_up + 1.0;
    if (b > 2e9) throw resource_error("successive_minima: coordinate bound too large");
    return (long)b;
  }

  bool in_span(const IntVec4& q) const {
    const int m = 4 - (int)s_basis_.size();
    for (int j = 0; j < m; ++j) {
      Int v = 0;
      for (int c = 0; c < 4; ++c) v += dual_[(std::size_t)j][(std::size_t)c] * q[c];
      if (sgn(v) != 0) return false;
    }
    return true;
  }

  void consider(const IntVec4& q, bool& have) {
    DyadicPow nsq = box_.norm_sq(q);
    if (!have || nsq.cmp(best_sq_) < 0) {
      best_sq_ = nsq;
      best_q_ = q;
      best_d_ = sqrt_upper(best_sq_);
      have = true;
    }
  }

  void charge(long n) {
    *budget_ -= n;
    if (*budget_ < 0) throw resource_error("successive_minima: refinement budget exceeded");
  }

  DyadicPow norm_sq_of(const Forms& f) const {
    DyadicPow best = DyadicPow(f[0] * f[0]) / box_.half_width_sq[0];
    for (int i = 1; i < 4; ++i) {
      DyadicPow v = DyadicPow(f[i] * f[i]) / box_.half_width_sq[i];
      if (best.cmp(v) < 0) best = v;
    }
    return best;
  }

  // --- whitened-metric basis conditioning.  Doubles only choose the basis;
  // every candidate the search accepts is still compared exactly, so a bad
  // rounding here can only cost time, never correctness. ---

  std::array<double, 4> whitened(const IntVec4& v) const {
    const Forms f = box_.form_values(v);
    std::array<double, 4> out;
    for (int c = 0; c < 4; ++c) out[(std::size_t)c] = f[(std::size_t)c].get_d() / w_up_[c];
    return out;
  }

  static double dot4(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    double s = 0;
    for (int c = 0; c < 4; ++c) s += a[(std::size_t)c] * b[(std::size_t)c];
    return s;
  }

  // LLL (delta = 0.75) on the span basis in the whitened metric.  The
  // Euclidean reduction done beforehand is the wrong geometry here: the form
  // weights span many orders of magnitude, and enumeration windows depend on
  // how short the basis is with respect to the forms, not the coordinates.
  void whiten_reduce() {
    const int r = (int)s_basis_.size();
    if (r < 2) return;
    for (int round = 0; round < 400; ++round) {
      std::vector<std::array<double, 4>> v((std::size_t)r), star((std::size_t)r);
      std::vector<std::vector<double>> mu((std::size_t)r, std::vector<double>((std::size_t)r, 0.0));
      std::vector<double> B((std::size_t)r, 0.0);
      for (int i = 0; i < r; ++i) v[(std::size_t)i] = whitened(s_basis_[(std::size_t)i]);
      for (int i = 0; i < r; ++i) {
        star[(std::size_t)i] = v[(std::size_t)i];
        for (int j = 0; j < i; ++j) {
          mu[(std::size_t)i][(std::size_t)j] =
              B[(std::size_t)j] > 0 ? dot4(v[(std::size_t)i], star[(std::size_t)j]) / B[(std::size_t)j] : 0.0;
          for (int c = 0; c < 4; ++c)
            star[(std::size_t)i][(std::size_t)c] -=
                mu[(std::size_t)i][(std::size_t)j] * star[(std::size_t)j][(std::size_t)c];
        }
        B[(std::size_t)i] = dot4(star[(std::size_t)i], star[(std::size_t)i]);
      }
      // One operation per round, everything recomputed afterwards.
      bool changed = false;
      for (int i = 1; i < r && !changed; ++i)
        for (int j = i - 1; j >= 0 && !changed; --j) {
          const double q = std::nearbyint(mu[(std::size_t)i][(std::size_t)j]);
          if (std::fabs(mu[(std::size_t)i][(std::size_t)j]) > 0.5001 && q != 0.0 &&
              std::fabs(q) < 9e18) {
            const Int qi(q);
            for (int c = 0; c < 4; ++c)
              s_basis_[(std::size_t)i][c] -= qi * s_basis_[(std::size_t)j][c];
            changed = true;
          }
        }
      for (int i = 1; i < r && !changed; ++i) {
        const double lhs = B[(std::size_t)i];
        const double rhs = (0.75 - mu[(std::size_t)i][(std::size_t)(i - 1)] *
                                       mu[(std::size_t)i][(std::size_t)(i - 1)]) *
                           B[(std::size_t)(i - 1)];
        if (lhs < rhs * (1.0 - 1e-9)) {
          std::swap(s_basis_[(std::size_t)i], s_basis_[(std::size_t)(i - 1)]);
          changed = true;
        }
      }
      if (!changed) break;
    }
  }

  // One whitened-metric Babai rounding of t against the span basis.
  void babai_whiten(IntVec4& t) const {
    const int r = (int)s_basis_.size();
    if (r == 0) return;
    for (int pass = 0; pass < 8; ++pass) {
      std::vector<std::array<double, 4>> vs((std::size_t)r);
      for (int i = 0; i < r; ++i) vs[(std::size_t)i] = whitened(s_basis_[(std::size_t)i]);
      const std::array<double, 4> vt = whitened(t);
      // Normal equations G z = b, solved by Gaussian elimination.
      double G[3][4];
      for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) G[i][j] = dot4(vs[(std::size_t)i], vs[(std::size_t)j]);
        G[i][r] = dot4(vs[(std::size_t)i], vt);
      }
      bool singular = false;
      for (int col = 0; col < r && !singular; ++col) {
        int piv = col;
        for (int i = col + 1; i < r; ++i)
          if (std::fabs(G[i][col]) > std::fabs(G[piv][col])) piv = i;
        if (std::fabs(G[piv][col]) < 1e-300) {
          singular = true;
          break;
        }
        for (int j = 0; j <= r; ++j) std::swap(G[col][j], G[piv][j]);
        for (int i = 0; i < r; ++i) {
          if (i == col) continue;
          const double f = G[i][col] / G[col][col];
          for (int j = col; j <= r; ++j) G[i][j] -= f * G[col][j];
        }
      }
      if (singular) return;
      bool moved = false;
      for (int i = 0; i < r; ++i) {
        const double zi = std::nearbyint(G[i][r] / G[i][i]);
        if (zi == 0.0 || !(std::fabs(zi) < 9e18)) continue;
        const Int q(zi);
        for (int c = 0; c < 4; ++c) t[c] -= q * s_basis_[(std::size_t)i][c];
        moved = true;
      }
      if (!moved) return;
    }
  }

  void finish_candidate(const std::vector<long>& y, const std::vector<long>& z) {
    IntVec4 q;
    const int m = (int)t_basis_.size();
    const int r = (int)s_basis_.size();
    for (int c = 0; c < 4; ++c) {
      Int v = 0;
      for (int j = 0; j < m; ++j) v += Int(y[(std::size_t)j]) * t_basis_[(std::size_t)j][c];
      for (int i = 0; i < r; ++i) v += Int(z[(std::size_t)i]) * s_basis_[(std::size_t)i][c];
      q[c] = v;
    }
    const DyadicPow nsq = box_.norm_sq(q);
    if (nsq.cmp(best_sq_) < 0) {
      best_sq_ = nsq;
      best_q_ = q;
      best_d_ = sqrt_upper(best_sq_);
    }
  }

  // Exact integer ternary search of the convex map
  //   t -> max_a |A_a + B_a t| / w_a   over [lo, hi].
  long ternary_min(const Forms& A, const Forms& B, long lo, long hi) {
    auto value = [&](long t) {
      Forms f;
      for (int a = 0; a < 4; ++a) f[(std::size_t)a] = A[(std::size_t)a] + Rat(t) * B[(std::size_t)a];
      return norm_sq_of(f);
    };
    while (lo < hi) {
      charge(2);
      const long mid = lo + (hi - lo) / 2;
      if (value(mid).cmp(value(mid + 1)) <= 0)
        hi = mid;
      else
        lo = mid + 1;
    }
    return lo;
  }

  // Enumerate one quotient class.  Every span coordinate z_i is bounded
  // absolutely by its dual functional, |z_i| <= N * h(dual_{m+i}); on top of
  // that, each form c restricts the depth-d coordinate to a window once the
  // worst-case contribution of the deeper coordinates is added to the form's
  // half-width.  With the whitened-LLL basis these windows are small; they
  // are never trusted for acceptance, only for pruning, and the convex
  // innermost coordinate is resolved by exact ternary search.
  void solve_class(const std::vector<long>& y) {
    const int r = (int)s_basis_.size();
    const int m = (int)t_basis_.size();
    Forms base;
    for (int a = 0; a < 4; ++a) {
      Rat v(0);
      for (int j = 0; j < m; ++j) v += Rat(y[(std::size_t)j]) * t_forms_[(std::size_t)j][(std::size_t)a];
      base[(std::size_t)a] = v;
    }

    std::vector<long> z_cap((std::size_t)r);
    for (int i = 0; i < r; ++i)
      z_cap[(std::size_t)i] = bound_from(best_d_, h_up_[(std::size_t)(m + i)]);
    // slack[d][c] bounds |sum_{i>d} z_i S_{i,c}| over the capped ranges.
    std::vector<std::array<double, 4>> slack((std::size_t)r);
    for (int c = 0; c < 4; ++c) slack[(std::size_t)(r - 1)][(std::size_t)c] = 0.0;
    for (int d = r - 2; d >= 0; --d)
      for (int c = 0; c < 4; ++c)
        slack[(std::size_t)d][(std::size_t)c] =
            slack[(std::size_t)(d + 1)][(std::size_t)c] +
            (double)z_cap[(std::size_t)(d + 1)] *
                (std::fabs(s_forms_[(std::size_t)(d + 1)][(std::size_t)c].get_d()) *
                     1.000000001 +
                 1e-12);

    std::vector<long> z((std::size_t)r, 0);
    std::function<void(int, const Forms&)> descend = [&](int depth, const Forms& partial) {
      long lo = -z_cap[(std::size_t)depth], hi = z_cap[(std::size_t)depth];
      for (int c = 0; c < 4 && lo <= hi; ++c) {
        const double S = s_forms_[(std::size_t)depth][(std::size_t)c].get_d();
        if (!(std::fabs(S) > 1e-300)) continue;
        const double P = partial[(std::size_t)c].get_d();
        const double U = best_d_ * w_up_[c] * 1.000000001 + 1e-12 +
                         slack[(std::size_t)depth][(std::size_t)c];
        const double e1 = (-U - P) / S, e2 = (U - P) / S;
        double lo_d = std::min(e1, e2), hi_d = std::max(e1, e2);
        const double pad = (std::fabs(lo_d) + std::fabs(hi_d)) * 1e-9 + 1e-6;
        lo_d -= pad;
        hi_d += pad;
        if (lo_d > (double)lo) lo = (long)std::ceil(lo_d);
        if (hi_d < (double)hi) hi = (long)std::floor(hi_d);
      }
      if (lo > hi) return;
      if (depth == r - 1) {
        charge(1);
        z[(std::size_t)depth] = ternary_min(partial, s_forms_[(std::size_t)depth], lo, hi);
        finish_candidate(y, z);
        return;
      }
      for (long vz = lo; vz <= hi; ++vz) {
        charge(1);
        z[(std::size_t)depth] = vz;
        Forms p;
        for (int a = 0; a < 4; ++a)
          p[(std::size_t)a] =
              partial[(std::size_t)a] + Rat(vz) * s_forms_[(std::size_t)depth][(std::size_t)a];
        descend(depth + 1, p);
      }
    };
    descend(0, base);
  }

  const DeltaBox& box_;
  long* budget_;
  std::vector<IntVec4> s_basis_, t_basis_;
  std::vector<Forms> s_forms_, t_forms_;
  Mat4 dual_{};
  double w_up_[4] = {0, 0, 0, 0};
  std::array<double, 4> h_up_{};  // dual bounds: first 4-r entries are class
                                  // functionals, the rest span coordinates
  DyadicPow best_sq_;
  IntVec4 best_q_;
  double best_d_ = 0.0;
};

}  // namespace

SuccessiveMinima successive_minima(const DeltaBox& box) {
  // Start the dilation search near the Minkowski balance point
  // (16 / vol)^(1/4); the loop below is correct from any starting point.
  long j = 0;
  {
    const double v = box.volume.to_double();
    if (v > 0.0 && std::isfinite(v)) {
      const double guess = 0.25 * std::log2(16.0 / v);
      j = (long)std::floor(guess);
      if (j > 0) j = 0;  // never skip the T=1 information
      if (j < -60) j = -60;
    }
  }

  // tau_4 <= C * Q^lambda (the dilated box contains the unit cube); refuse to
  // search past 4x that.
  const DyadicPow guard_sq = DyadicPow(box.C2 * 16) * q_pow(box.k, 2 * box.lambda);

  GreedyState st;
  bool has_prev = false;
  for (;; ++j) {
    if (DyadicPow::pow2(2 * j).cmp(guard_sq) > 0)
      throw resource_error("successive_minima: dilation guard exceeded");
    const double pairs = predict_pairs(box, pow2_rat(2 * j));
    if (st.sel.empty()) {
      if (pairs > kPairCeiling)
        throw resource_error("successive_minima: enumeration too large before rank 1");
    } else if (pairs > kPairBudget) {
      break;  // refine the remaining minima through the quotient solver
    }
    const GreedyState snapshot = st;
    if (!greedy_level(box, j, 2.0 * pairs + 64.0, has_prev, st)) {
      // The level flooded the exact path; its partial state may hold
      // non-minimal values, so restore the last completed level and refine
      // through the quotient solver instead.
      st = snapshot;
      if (st.sel.empty())
        throw resource_error("successive_minima: exact-path flood before rank 1");
      break;
    }
    has_prev = true;
    if (st.sel.size() == 4) break;
  }

  SuccessiveMinima out;
  out.dilation_log2 = st.level;
  std::vector<IntVec4> wit;
  std::vector<DyadicPow> tsq;
  for (auto& s : st.sel) {
    wit.push_back(s.q);
    tsq.push_back(s.nsq);
  }
  long eval_budget = 200000000;
  while ((int)wit.size() < 4) {
    QuotientStep step(box, wit, &eval_budget);
    auto [nsq, q] = step.solve();
    if (!tsq.empty() && nsq.cmp(tsq.back()) < 0)
      throw invariant_error("successive_minima: non-monotone minima");
    tsq.push_back(nsq);
    wit.push_back(q);
  }

  for (int i = 0; i < 4; ++i) {
    out.tau_sq[i] = tsq[(std::size_t)i];
    out.witnesses[i] = wit[(std::size_t)i];
    auto [lo, hi] = out.tau_sq[i].enclosure(96);
    out.tau[i] = std::sqrt(0.5 * (d_lower(lo) + d_upper(hi)));
  }
  return out;
}

double minkowski_ratio(const DeltaBox& box, const SuccessiveMinima& m) {
  double r = box.volume.to_double();
  for (int i = 0; i < 4; ++i) r *= m.tau[i];
  return r;
}

bool minkowski_in_bounds(const DeltaBox& box, const SuccessiveMinima& m) {
  // Compare the exact square of the product against [ (2/3)^2, 16^2 ].
  DyadicPow r2 = box.volume.squared();
  for (int i = 0; i < 4; ++i) r2 = r2 * m.tau_sq[i];
  return r2.cmp(make_rat(4, 9)) >= 0 && r2.cmp(Rat(256)) <= 0;
}

}  // namespace vlab
