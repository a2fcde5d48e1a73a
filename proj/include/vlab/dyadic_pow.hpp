#pragma once
// Exact scaled dyadic powers: values of the form  c * 2^(num/den)  with c an
// exact rational and num/den an exact rational exponent.  Every 2^k-based
// threshold in the pipeline (half-width squares, Q^{-1-lambda}, case gates,
// spacing bounds, volumes) is exactly representable here, so comparisons are
// decided without floating point.  A double fast path handles the easy 99%.

#include <cstdlib>
#include <numeric>

#include "vlab/rat.hpp"

namespace vlab {

class DyadicPow {
 public:
  DyadicPow() : c_(0), num_(0), den_(1) {}
  explicit DyadicPow(Rat c) : c_(std::move(c)), num_(0), den_(1) {}

  // value = c * 2^(num/den)
  DyadicPow(Rat c, long num, long den) : c_(std::move(c)), num_(num), den_(den) {
    normalize();
  }

  static DyadicPow zero() { return DyadicPow(); }
  static DyadicPow one() { return DyadicPow(Rat(1)); }

  // 2^(num/den)
  static DyadicPow pow2(long num, long den = 1) { return DyadicPow(Rat(1), num, den); }

  const Rat& coeff() const { return c_; }
  long exp_num() const { return num_; }
  long exp_den() const { return den_; }

  int sign() const { return sgn(c_); }
  bool is_zero() const { return sign() == 0; }

  DyadicPow operator*(const DyadicPow& o) const {
    const long g = std::gcd(den_, o.den_);
    const long den = den_ / g * o.den_;
    const long num = num_ * (o.den_ / g) + o.num_ * (den_ / g);
    return DyadicPow(c_ * o.c_, num, den);
  }

  DyadicPow operator*(const Rat& r) const { return DyadicPow(c_ * r, num_, den_); }

  DyadicPow operator/(const DyadicPow& o) const {
    if (o.is_zero()) throw std::domain_error("DyadicPow: division by zero");
    const long g = std::gcd(den_, o.den_);
    const long den = den_ / g * o.den_;
    const long num = num_ * (o.den_ / g) - o.num_ * (den_ / g);
    return DyadicPow(c_ / o.c_, num, den);
  }

  DyadicPow squared() const { return DyadicPow(c_ * c_, 2 * num_, den_); }

  DyadicPow abs() const {
    DyadicPow r = *this;
    r.c_ = ::abs(r.c_);
    return r;
  }

  // Exact three-way comparison (-1, 0, +1).
  int cmp(const DyadicPow& o) const {
    const int sa = sign(), sb = o.sign();
    if (sa != sb) return sa < sb ? -1 : 1;
    if (sa == 0) return 0;
    // Same nonzero sign: compare log2 with certified margin first.
    const double la = log2_abs(), lb = o.log2_abs();
    const double margin = 1e-9;
    if (la < lb - margin) return -sa;  // |a| < |b|
    if (la > lb + margin) return sa;
    return sa * cmp_abs_exact(o);
  }

  int cmp(const Rat& r) const { return cmp(DyadicPow(r)); }

  bool operator<(const DyadicPow& o) const { return cmp(o) < 0; }
  bool operator<=(const DyadicPow& o) const { return cmp(o) <= 0; }
  bool operator==(const DyadicPow& o) const { return cmp(o) == 0; }

  // log2(|value|); -inf for zero.
  double log2_abs() const {
    if (is_zero()) return -HUGE_VAL;
    signed long ne, de;
    const double nm = mpz_get_d_2exp(&ne, c_.get_num().get_mpz_t());
    const double dm = mpz_get_d_2exp(&de, c_.get_den().get_mpz_t());
    return std::log2(std::fabs(nm)) + (double)ne - std::log2(dm) - (double)de +
           (double)num_ / (double)den_;
  }

  double to_double() const {
    if (is_zero()) return 0.0;
    return (sign() < 0 ? -1.0 : 1.0) * std::exp2(log2_abs());
  }

  // Rational enclosure [lo, hi] with relative width <= 2^-prec_bits.
  std::pair<Rat, Rat> enclosure(unsigned prec_bits) const {
    if (is_zero()) return {Rat(0), Rat(0)};
    // 2^(num/den) with 0 <= num < den: enclose via integer root of 2^num
    // scaled by 2^(den*B).
    const unsigned B = prec_bits + 2;
    Int scaled = Int(1) << (unsigned long)(num_ + (long)den_ * (long)B);
    Int r = iroot_floor(scaled, den_);
    Rat lo = make_rat(r, Int(1) << B);
    Rat hi = make_rat(r + 1, Int(1) << B);
    if (sign() >= 0) return {c_ * lo, c_ * hi};
    return {c_ * hi, c_ * lo};
  }

 private:
  void normalize() {
    if (sgn(c_) == 0) {
      num_ = 0;
      den_ = 1;
      return;
    }
    if (den_ < 0) {
      den_ = -den_;
      num_ = -num_;
    }
    if (den_ == 0) throw std::domain_error("DyadicPow: zero exponent denominator");
    const long g = std::gcd(std::labs(num_), den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    // Fold the integer part of the exponent into the coefficient so that
    // 0 <= num < den always holds.
    long q = num_ / den_;
    long r = num_ % den_;
    if (r < 0) {
      r += den_;
      --q;
    }
    if (q > 0)
      mpq_mul_2exp(c_.get_mpq_t(), c_.get_mpq_t(), (unsigned long)q);
    else if (q < 0)
      mpq_div_2exp(c_.get_mpq_t(), c_.get_mpq_t(), (unsigned long)(-q));
    num_ = r;
  }

  // Exact |a| vs |b| comparison by raising both to the lcm of the exponent
  // denominators: |c_a|^L * 2^(num_a*L/den_a) vs |c_b|^L * 2^(num_b*L/den_b),
  // all exact rationals.
  int cmp_abs_exact(const DyadicPow& o) const {
    const long L = std::lcm(den_, o.den_);
    Rat a = pow_rat(::abs(c_), L);
    Rat b = pow_rat(::abs(o.c_), L);
    const long ea = num_ * (L / den_);
    const long eb = o.num_ * (L / o.den_);
    if (ea >= eb)
      mpq_mul_2exp(a.get_mpq_t(), a.get_mpq_t(), (unsigned long)(ea - eb));
    else
      mpq_mul_2exp(b.get_mpq_t(), b.get_mpq_t(), (unsigned long)(eb - ea));
    return ::cmp(a, b) < 0 ? -1 : (::cmp(a, b) > 0 ? 1 : 0);
  }

  Rat c_;
  long num_;
  long den_;
};

// Q^(e) for Q = 2^k and exact rational exponent e: 2^(k * e_num / e_den).
inline DyadicPow q_pow(int k, const Rat& e) {
  const long num = mpz_get_si(e.get_num().get_mpz_t());
  const long den = mpz_get_si(e.get_den().get_mpz_t());
  return DyadicPow::pow2((long)k * num, den);
}

}  // namespace vlab
