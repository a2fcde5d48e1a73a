// Exact-arithmetic foundation: rational helpers, dyadic powers, and the
// q0^(-p/r) sign kernel.
#include "doctest.h"
#include "vlab/dyadic_pow.hpp"
#include "vlab/int_vec.hpp"
#include "vlab/rat.hpp"
#include "vlab/root_pow.hpp"

using namespace vlab;

TEST_CASE("parse_rat accepts integers and fractions, canonicalized") {
  CHECK(parse_rat("3/4") == make_rat(3, 4));
  CHECK(parse_rat("-7") == Rat(-7));
  CHECK(parse_rat("+2/6") == make_rat(1, 3));
  CHECK(parse_rat("-10/4") == make_rat(-5, 2));
  CHECK(rat_string(parse_rat("21/20")) == "21/20");
  CHECK(rat_string(Rat(5)) == "5");
}

TEST_CASE("parse_rat rejects malformed literals") {
  CHECK_THROWS_AS(parse_rat(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("a"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("1/"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("/2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("1e3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("--2"), std::invalid_argument);
}

TEST_CASE("floor and ceil behave on negatives") {
  CHECK(floor_rat(make_rat(-7, 2)) == -4);
  CHECK(ceil_rat(make_rat(-7, 2)) == -3);
  CHECK(floor_rat(make_rat(7, 2)) == 3);
  CHECK(ceil_rat(make_rat(7, 2)) == 4);
  CHECK(floor_rat(Rat(5)) == 5);
  CHECK(ceil_rat(Rat(5)) == 5);
}

TEST_CASE("integer powers and roots") {
  CHECK(pow_int(Int(3), 5) == 243);
  CHECK(pow_rat(make_rat(2, 3), 3) == make_rat(8, 27));
  CHECK(isqrt_floor(Int(80)) == 8);
  CHECK(isqrt_floor(Int(81)) == 9);
  CHECK(iroot_floor(Int(26), 3) == 2);
  CHECK(iroot_floor(Int(27), 3) == 3);
}

TEST_CASE("double enclosures bracket the exact value") {
  const Rat xs[] = {make_rat(1, 3), make_rat(-355, 113), Rat(0), make_rat(1, 1 << 20),
                    make_rat(123456789, 1000003)};
  for (const Rat& x : xs) {
    auto [lo, hi] = d_enclosure(x);
    CHECK(Rat(lo) <= x);
    CHECK(x <= Rat(hi));
  }
}

TEST_CASE("rational sqrt and cbrt enclosures") {
  auto [slo, shi] = sqrt_enclosure(Rat(2), 40);
  CHECK(slo * slo <= Rat(2));
  CHECK(shi * shi >= Rat(2));
  CHECK(shi - slo <= make_rat(1, Int(1) << 38));

  auto [clo, chi] = cbrt_enclosure(make_rat(-27, 8), 30);
  CHECK(clo <= make_rat(-3, 2));
  CHECK(make_rat(-3, 2) <= chi);
  auto [c2lo, c2hi] = cbrt_enclosure(Rat(2), 40);
  CHECK(c2lo * c2lo * c2lo <= Rat(2));
  CHECK(c2hi * c2hi * c2hi >= Rat(2));
}

TEST_CASE("decimal_string is fixed-point toward zero") {
  CHECK(decimal_string(make_rat(1, 3), 6) == "0.333333");
  CHECK(decimal_string(make_rat(-22, 7), 3) == "-3.142");
  CHECK(decimal_string(Rat(2), 4) == "2.0000");
  CHECK(decimal_string(make_rat(1, 2), 1) == "0.5");
}

TEST_CASE("DyadicPow normalizes the exponent into [0,1)") {
  // 3 * 2^(5/2) = 12 * 2^(1/2)
  DyadicPow a(Rat(3), 5, 2);
  DyadicPow b(Rat(12), 1, 2);
  CHECK(a.cmp(b) == 0);
  CHECK(a.coeff() == Rat(12));
  CHECK(a.exp_num() == 1);
  CHECK(a.exp_den() == 2);

  DyadicPow neg(Rat(1), -1, 2);  // 2^(-1/2) = (1/2) * 2^(1/2)
  CHECK(neg.coeff() == make_rat(1, 2));
  CHECK(neg.exp_num() == 1);
}

TEST_CASE("DyadicPow arithmetic is exact") {
  DyadicPow r2 = DyadicPow::pow2(1, 2);  // sqrt(2)
  CHECK(r2.squared().cmp(Rat(2)) == 0);
  CHECK((r2 * r2).cmp(Rat(2)) == 0);
  CHECK((r2 / r2).cmp(Rat(1)) == 0);
  CHECK((DyadicPow(Rat(5)) * DyadicPow::pow2(3)).cmp(Rat(40)) == 0);
  // 2^(1/2) * 2^(1/3) = 2^(5/6)
  CHECK((DyadicPow::pow2(1, 2) * DyadicPow::pow2(1, 3)).cmp(DyadicPow::pow2(5, 6)) == 0);
  CHECK(DyadicPow(Rat(-3), 1, 2).abs().cmp(DyadicPow(Rat(3), 1, 2)) == 0);
  CHECK(DyadicPow(Rat(-3), 1, 2).sign() == -1);
}

TEST_CASE("DyadicPow comparisons: signs, fast path, exact fallback") {
  CHECK(DyadicPow(Rat(-1)).cmp(DyadicPow(Rat(1))) < 0);
  CHECK(DyadicPow::zero().cmp(DyadicPow(Rat(1))) < 0);
  CHECK(DyadicPow::pow2(1, 2).cmp(Rat(1)) > 0);
  CHECK(DyadicPow::pow2(1, 2).cmp(Rat(2)) < 0);
  // Pell near-tie: 665857/470832 exceeds sqrt(2) by ~1.6e-12, far below the
  // double fast-path margin, so this exercises the exact cross-powered path.
  CHECK(DyadicPow(make_rat(665857, 470832)).cmp(DyadicPow::pow2(1, 2)) > 0);
  CHECK(DyadicPow(make_rat(-665857, 470832)).cmp(DyadicPow(Rat(-1), 1, 2)) < 0);
  // Exact ties with different representations.
  CHECK(DyadicPow(Rat(2), 1, 3).cmp(DyadicPow(Rat(1), 4, 3)) == 0);
  CHECK(DyadicPow(make_rat(1, 4), 7, 3).cmp(DyadicPow(Rat(1), 1, 3)) == 0);
}

TEST_CASE("DyadicPow enclosure brackets tightly") {
  const DyadicPow vals[] = {DyadicPow::pow2(1, 2), DyadicPow(make_rat(-7, 3), 5, 7),
                            DyadicPow(Rat(1000), 11, 12)};
  for (const DyadicPow& v : vals) {
    auto [lo, hi] = v.enclosure(60);
    CHECK(DyadicPow(lo).cmp(v) <= 0);
    CHECK(v.cmp(DyadicPow(hi)) <= 0);
    // relative width
    Rat width = hi - lo;
    if (sgn(width) < 0) width = -width;
    Rat mag = lo;
    if (sgn(mag) < 0) mag = -mag;
    CHECK(width <= mag * make_rat(1, Int(1) << 58));
  }
  auto [zlo, zhi] = DyadicPow::zero().enclosure(10);
  CHECK(zlo == Rat(0));
  CHECK(zhi == Rat(0));
}

TEST_CASE("factor_trial returns the prime multiset") {
  CHECK(factor_trial(Int(12)) == std::vector<long>{2, 2, 3});
  CHECK(factor_trial(Int(1)).empty());
  CHECK(factor_trial(Int(97)) == std::vector<long>{97});
  CHECK(factor_trial(Int(1 << 20)) == std::vector<long>(20, 2));
}

TEST_CASE("RootPow recognizes rational values") {
  RootPow half(Int(4), 1, 2);  // 4^(-1/2) = 1/2
  CHECK(half.degree() == 1);
  CHECK(half.rational_value() == make_rat(1, 2));

  RootPow eighth(Int(8), 1, 3);  // 8^(-1/3) = 1/2
  CHECK(eighth.degree() == 1);
  CHECK(eighth.rational_value() == make_rat(1, 2));

  RootPow one(Int(1), 3, 5);
  CHECK(one.degree() == 1);
  CHECK(one.rational_value() == Rat(1));

  RootPow zero_exp(Int(7), 0, 1);
  CHECK(zero_exp.degree() == 1);
  CHECK(zero_exp.rational_value() == Rat(1));
}

TEST_CASE("RootPow degree follows the reduced radical") {
  CHECK(RootPow(Int(2), 1, 2).degree() == 2);
  CHECK(RootPow(Int(12), 1, 2).degree() == 2);
  CHECK(RootPow(Int(2), 1, 3).degree() == 3);
  CHECK(RootPow(Int(64), 1, 4).degree() == 2);  // 64^(-1/4) = 8^(-1/2)
  CHECK(RootPow(Int(16), 1, 2).degree() == 1);  // = 1/4
  CHECK(RootPow(Int(2), 2, 4).degree() == 2);   // reduces to 2^(-1/2)
}

TEST_CASE("RootPow sign_at detects exact zeroes") {
  RootPow s(Int(2), 1, 2);  // s = 2^(-1/2)
  // 2*s^2 - 1 = 0
  CHECK(s.sign_at({Rat(-1), Rat(0), Rat(2)}) == 0);
  // s^4 + s^2 - 3/4 = 0  (s^2 = 1/2)
  CHECK(s.sign_at({make_rat(-3, 4), Rat(0), Rat(1), Rat(0), Rat(1)}) == 0);
  CHECK(s.sign_at({}) == 0);
  CHECK(s.sign_at({Rat(0), Rat(0)}) == 0);

  RootPow t(Int(64), 1, 4);  // t^2 = 1/8
  CHECK(t.sign_at({make_rat(-1, 8), Rat(0), Rat(1)}) == 0);
}

TEST_CASE("RootPow sign_at decides tight irrational comparisons") {
  // s = 12^(-1/2) = sqrt(3)/6 = 0.2886751345...
  RootPow s(Int(12), 1, 2);
  CHECK(s.sign_at({make_rat(-265, 918), Rat(1)}) > 0);    // 265/918 < s
  CHECK(s.sign_at({make_rat(-1351, 4680), Rat(1)}) < 0);  // 1351/4680 > s
  CHECK(s.sign_at({Rat(0), Rat(1)}) > 0);
  CHECK(s.sign_at({Rat(0), Rat(-5)}) < 0);

  // cube-root case: u = 2^(-1/3), 1 - u - u^2 sign: u ~ 0.7937 -> negative
  RootPow u(Int(2), 1, 3);
  CHECK(u.sign_at({Rat(1), Rat(-1), Rat(-1)}) < 0);
  CHECK(u.sign_at({Rat(1), Rat(-1)}) > 0);  // 1 - u > 0
}

TEST_CASE("RootPow enclosure brackets s") {
  RootPow s(Int(12), 1, 2);
  auto [lo, hi] = s.enclosure(50);
  CHECK(s.sign_at({-lo, Rat(1)}) >= 0);  // s >= lo
  CHECK(s.sign_at({-hi, Rat(1)}) <= 0);  // s <= hi
  CHECK(hi - lo <= hi * make_rat(1, Int(1) << 48));

  RootPow r(Int(5), 2, 3);  // 5^(-2/3)
  auto [lo2, hi2] = r.enclosure(40);
  // check lo2^3 <= 1/25 <= hi2^3
  CHECK(pow_rat(lo2, 3) <= make_rat(1, 25));
  CHECK(pow_rat(hi2, 3) >= make_rat(1, 25));
}

TEST_CASE("IntVec4 basics") {
  IntVec4 v = IntVec4::of(6, -9, 12, 0);
  CHECK(v.content() == 3);
  CHECK_FALSE(v.is_primitive());
  CHECK(v.primitive_part() == IntVec4::of(2, -3, 4, 0));
  CHECK(v.sup_norm() == 12);
  CHECK(IntVec4::of(-2, 3, 0, 1).sign_canonical() == IntVec4::of(2, -3, 0, -1));
  CHECK(IntVec4::of(0, 0, 0, 0).is_zero());
  CHECK(dot(IntVec4::of(1, 2, 3, 4), IntVec4::of(4, 3, 2, 1)) == 20);
  CHECK(lex_less(IntVec4::of(0, 0, 1, -1), IntVec4::of(0, 1, -1, 0)));
  CHECK_FALSE(lex_less(IntVec4::of(1, 0, 0, 0), IntVec4::of(1, 0, 0, 0)));
}
