#pragma once
// Integer cubic polynomials: exact discriminant and reduction height, the
// unimodular Mobius-substitution action and a greedy class reduction,
// certified roots and root spread, the desk-scale census with its class
// decomposition, and the derivative/discriminant bound checker.

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "vlab/int_vec.hpp"
#include "vlab/rat.hpp"

namespace vlab {

// a[i] is the coefficient of x^i; census operations require degree 3.
struct CubicPoly {
  IntVec4 a;

  CubicPoly() = default;
  explicit CubicPoly(IntVec4 v) : a(std::move(v)) {}
  static CubicPoly of(long a0, long a1, long a2, long a3) {
    return CubicPoly(IntVec4::of(a0, a1, a2, a3));
  }

  const Int& operator[](int i) const { return a[i]; }
  bool is_zero() const { return a.is_zero(); }
  int degree() const;     // -1 for the zero polynomial
  Int height() const { return a.sup_norm(); }
  Rat eval(const Rat& x) const;
  int sign_at(const Rat& x) const;  // exact sign of the value
  CubicPoly operator-() const { return CubicPoly(-a); }
  bool operator==(const CubicPoly& o) const { return a == o.a; }
};

// 18 a3 a2 a1 a0 - 4 a2^3 a0 + a2^2 a1^2 - 4 a3 a1^3 - 27 a3^2 a0^2,
// exact; rejects degree < 3.
Int discriminant(const CubicPoly& P);

// Fourth power of the seven-term reduction height
// max{|c2|, |c3|, |c1 c2|^(1/2), |c0 c2^3|^(1/4), |c0 c3|^(1/2),
//     |c1^3 c3|^(1/4), |c0 c1 c2 c3|^(1/4)}  — an exact integer, so class
// comparisons never touch floating point.  d_height is its real fourth root.
Int d_height_pow4(const CubicPoly& P);
double d_height(const CubicPoly& P);

// Unimodular integer Mobius map; |ad - bc| = 1 enforced at construction.
struct MobiusMap {
  Int a, b, c, d;
  MobiusMap(Int a_, Int b_, Int c_, Int d_);
  static MobiusMap of(long a_, long b_, long c_, long d_) {
    return MobiusMap(Int(a_), Int(b_), Int(c_), Int(d_));
  }
};

// Substitution-and-clear-denominators action
//   Q(x) = sum_i  a_i (b x - d)^i (c - a x)^(3-i),
// whose leading coefficient is -a0 a^3 + a1 a^2 b - a2 a b^2 + a3 b^3.
// The translation x -> x+1 is the map (0, 1, 1, -1) and the inversion
// x -> 1/x is (-1, 0, 0, -1).  Degree drop raises domain_error.
CubicPoly mobius_apply(const CubicPoly& P, const MobiusMap& m);

// Greedy search for the minimal-d_height class member over maps with
// entries bounded by search_radius, iterated to a fixed point; ties break
// to the lexicographically smallest coefficient vector.  Heuristic: the
// result is a canonical representative of the orbit as explored, not a
// certified global minimum.
CubicPoly reduce_class(const CubicPoly& P, long search_radius = 2);

// Three complex roots with certified error radii <= 1e-12 * max(1, |root|),
// sorted by (re, im).
struct RootTriple {
  std::complex<double> x[3];
  double radius[3] = {0, 0, 0};
};
RootTriple roots_of(const CubicPoly& P);

// Largest pairwise distance among the three roots, certified to relative
// error 1e-9.
double root_spread(const CubicPoly& P);

// Exact factorization a3 (x - r)^2 (x - t) of a degree-3 polynomial with
// zero discriminant; triple means r = t.
struct SquareLinearFactors {
  Rat r, t;
  bool triple = false;
};
SquareLinearFactors square_linear_roots(const CubicPoly& P);

// Exhaustive census of integer cubics with H(P) <= H, 0 < |disc| <= D and
// root spread >= 1/R (R = infinity admits every spread; a negative D lifts
// the discriminant cap), partitioned into reduce_class classes.  The class
// split inherits the heuristic flag.
struct CensusResult {
  long height_cap = 0;                    // the H of this census row
  Int disc_cap;                           // negative = unbounded
  double r_cap = 0.0;                     // the R filter, infinity allowed
  long total = 0;                         // survivors (vectors, both signs)
  std::map<std::string, long> classes;    // reduced representative -> count
  bool heuristic_classes = true;
};
CensusResult census(long H, const Int& D, double R, long height_cap = 60);

// (number of reduce_class classes with 0 < |disc| <= D found at height
// <= H_probe) / D.
double davenport_ratio(const Int& D, long H_probe);

// CSV export of census tables: header H,D,R,count,classes,constant_flag.
void census_csv(const std::vector<CensusResult>& rows, const std::string& path);

// Checker for the derivative / discriminant bounds on an interval J around
// a window at scale Q = 2^k: divided-difference coefficients b_i from four
// equally spaced samples, |b_1| against c1 * a3 * Q^(-w/2 + eta), and
// |disc| against cd * a3^4 * spread^2 * Q^(-w + 2 eta).  Preconditions are
// reported, not thrown.
struct DerivativeReport {
  bool pre_interval_long_enough = false;  // |J| >= Q^(-w/2 - eta)
  bool pre_sup_small_enough = false;      // max |P| on J <= a3 Q^(-w)
  Rat b[4];                               // divided differences at the samples
  bool deriv_bound_ok = false;            // |b_i| <= c1 (6^i/i!) a3 Q^(-w+i(w/2+eta))
  double c1_required = 0.0;               // smallest c1 that would pass
  double kappa = 0.0;                     // -log_Q root_spread
  bool disc_bound_ok = false;
  double cd_required = 0.0;               // smallest cd that would pass
  bool ok() const {
    return pre_interval_long_enough && pre_sup_small_enough && deriv_bound_ok &&
           disc_bound_ok;
  }
};
DerivativeReport derivative_bounds_check(const CubicPoly& P, const Rat& J_lo,
                                         const Rat& J_hi, const Rat& w, const Rat& eta,
                                         int k, double c1 = 8.0, double cd = 1000.0);

}  // namespace vlab
