#pragma once
// Exact sign decisions for polynomial expressions in  s = q0^(-p/r)  with
// q0 a positive integer and p/r a positive rational in lowest terms.  Arc
// membership tests cross-power to polynomials in s of small degree; their
// signs are decided by reducing modulo the minimal polynomial of s (which
// detects exact zeroes) and refining a rational enclosure otherwise.

#include <vector>

#include "vlab/rat.hpp"

namespace vlab {

class RootPow {
 public:
  // s = q0^(-p/r); requires q0 >= 1, p >= 0, r >= 1.  p/r need not be in
  // lowest terms; the constructor reduces it.
  RootPow(Int q0, long p, long r);

  const Int& q0() const { return q0_; }

  // Degree of the minimal polynomial of s over the rationals.
  int degree() const { return deg_; }

  // s as an exact rational; only valid when degree() == 1.
  const Rat& rational_value() const;

  // Sign of sum_i coeffs[i] * s^i, exactly (-1, 0, +1).
  int sign_at(const std::vector<Rat>& coeffs) const;

  // Rational enclosure lo <= s <= hi of relative width <= 2^-prec_bits.
  std::pair<Rat, Rat> enclosure(unsigned prec_bits) const;

 private:
  // Folds s^i for i >= deg_ using s^deg = w_, leaving a vector of length deg_.
  std::vector<Rat> reduce(const std::vector<Rat>& coeffs) const;

  Int q0_;
  long p_, r_;
  int deg_;   // degree of the minimal polynomial
  Rat w_;     // s^deg_ (exact rational)
  Rat value_; // s itself when deg_ == 1
};

// Smallest prime factor table used to factor q0 (q0 < 2^26 in practice).
// Exposed for tests.
std::vector<long> factor_trial(const Int& n);

}  // namespace vlab
