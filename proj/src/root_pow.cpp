#include "vlab/root_pow.hpp"

#include <algorithm>
#include <numeric>

namespace vlab {

std::vector<long> factor_trial(const Int& n) {
  std::vector<long> out;
  Int m = n;
  if (sgn(m) <= 0) throw std::domain_error("factor_trial: n must be positive");
  for (long d = 2; Int(d) * d <= m; d += (d == 2 ? 1 : 2)) {
    while (mpz_divisible_ui_p(m.get_mpz_t(), (unsigned long)d)) {
      out.push_back(d);
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), (unsigned long)d);
    }
  }
  if (m > 1) {
    if (!m.fits_slong_p()) throw std::domain_error("factor_trial: n too large");
    out.push_back(mpz_get_si(m.get_mpz_t()));
  }
  return out;
}

RootPow::RootPow(Int q0, long p, long r) : q0_(std::move(q0)), p_(p), r_(r) {
  if (sgn(q0_) <= 0) throw std::domain_error("RootPow: q0 must be positive");
  if (r_ <= 0 || p_ < 0) throw std::domain_error("RootPow: bad exponent");
  const long g = std::gcd(p_, r_);
  if (g > 1) {
    p_ /= g;
    r_ /= g;
  }
  if (q0_ == 1 || p_ == 0) {
    deg_ = 1;
    value_ = Rat(1);
    w_ = value_;
    return;
  }
  // Degree of q0^(-p/r): r/e where e is the largest divisor of r such that
  // q0^p is a perfect e-th power.  With q0 = prod primes^a_i this is
  // e = gcd(r, p * gcd_i(a_i)); x^d - c is then irreducible for positive
  // rational c not a perfect l-th power for any prime l | d (the degree-4
  // exception needs negative c and cannot occur here).
  auto primes = factor_trial(q0_);
  long a_gcd = 0;
  for (std::size_t i = 0; i < primes.size();) {
    std::size_t j = i;
    while (j < primes.size() && primes[j] == primes[i]) ++j;
    a_gcd = std::gcd(a_gcd, (long)(j - i));
    i = j;
  }
  const long e = std::gcd(r_, p_ * a_gcd);
  deg_ = (int)(r_ / e);
  // s^deg = q0^(-p*deg/r) = q0^(-p/e), an exact rational.
  Int root = iroot_floor(pow_int(q0_, (unsigned long)p_), (unsigned long)e);
  w_ = make_rat(Int(1), root);
  if (deg_ == 1) value_ = w_;
}

const Rat& RootPow::rational_value() const {
  if (deg_ != 1) throw std::logic_error("RootPow: irrational value");
  return value_;
}

std::vector<Rat> RootPow::reduce(const std::vector<Rat>& coeffs) const {
  std::vector<Rat> out((std::size_t)deg_, Rat(0));
  Rat wpow(1);
  for (std::size_t base = 0; base < coeffs.size(); base += (std::size_t)deg_) {
    for (std::size_t j = 0; j < (std::size_t)deg_ && base + j < coeffs.size(); ++j)
      out[j] += coeffs[base + j] * wpow;
    wpow *= w_;
  }
  return out;
}

std::pair<Rat, Rat> RootPow::enclosure(unsigned prec_bits) const {
  if (deg_ == 1) return {value_, value_};
  // s = 1 / t^(1/r) with t = q0^p: enclose t^(1/r) by scaled integer roots.
  Int t = pow_int(q0_, (unsigned long)p_);
  const unsigned B = prec_bits + 2;
  Int scaled = t << (unsigned long)((unsigned long)r_ * B);
  Int root = iroot_floor(scaled, (unsigned long)r_);
  // root <= t^(1/r) * 2^B <= root + 1
  return {make_rat(Int(1) << B, root + 1), make_rat(Int(1) << B, root)};
}

int RootPow::sign_at(const std::vector<Rat>& coeffs) const {
  std::vector<Rat> red = reduce(coeffs);
  bool all_zero = true;
  for (const auto& c : red)
    if (sgn(c) != 0) {
      all_zero = false;
      break;
    }
  if (all_zero) return 0;
  if (deg_ == 1) {
    // Only red[0] is populated.
    return sgn(red[0]);
  }
  // Nonzero polynomial of degree < deg(min poly): value is nonzero, so a
  // rational interval evaluation resolves the sign at a finite precision.
  for (unsigned prec = 96;; prec *= 2) {
    auto [lo, hi] = enclosure(prec);
    // Interval Horner evaluation, exact rational endpoints.
    Rat vlo(0), vhi(0);
    for (std::size_t i = red.size(); i-- > 0;) {
      // [vlo,vhi] * [lo,hi] (lo,hi >= 0 here) then + coeff
      Rat cands[4] = {vlo * lo, vlo * hi, vhi * lo, vhi * hi};
      Rat nlo = cands[0], nhi = cands[0];
      for (int j = 1; j < 4; ++j) {
        if (cands[j] < nlo) nlo = cands[j];
        if (cands[j] > nhi) nhi = cands[j];
      }
      vlo = nlo + red[i];
      vhi = nhi + red[i];
    }
    if (sgn(vlo) > 0) return 1;
    if (sgn(vhi) < 0) return -1;
    if (prec > 1u << 20)
      throw invariant_error("RootPow::sign_at failed to resolve a provably nonzero sign");
  }
}

}  // namespace vlab
