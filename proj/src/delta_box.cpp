#include "vlab/delta_box.hpp"

namespace vlab {

DeltaBox build_box(const Rat& x_m, int k, const Rat& lambda, const Rat& C2) {
  if (k < 0) throw std::domain_error("build_box: k must be >= 0");
  if (sgn(C2) <= 0) throw std::domain_error("build_box: box constant must be positive");
  if (lambda < make_rat(1, 3) || lambda > Rat(1))
    throw std::domain_error("build_box: lambda outside [1/3, 1]");

  DeltaBox b;
  b.x_m = x_m;
  b.k = k;
  b.lambda = lambda;
  b.C2 = C2;

  // Half-width exponents (1, (1-lambda)/2, -lambda, -lambda); stored squared.
  b.half_width_sq[0] = DyadicPow(C2) * q_pow(k, Rat(2));
  b.half_width_sq[1] = DyadicPow(C2) * q_pow(k, Rat(1) - lambda);
  b.half_width_sq[2] = DyadicPow(C2) * q_pow(k, Rat(-2) * lambda);
  b.half_width_sq[3] = b.half_width_sq[2];

  b.volume = DyadicPow(Rat(16) * C2 * C2) * q_pow(k, (Rat(3) - 5 * lambda) / 2);
  return b;
}

}  // namespace vlab
