// Dyadic block enumeration.  The fast path walks, per q0, the integer
// lattice candidates produced by propagating the x-window of (q0, q1)
// through x^2 and x^3 with outward-padded double filters; every surviving
// vector is confirmed or rejected by the exact arc kernel, so the filters
// affect speed only.  The brute-force oracle iterates the full spec ranges
// and skips only prefixes whose exact rational window is provably empty.
#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

#include "vlab/approx.hpp"

namespace vlab {

namespace {

// Directed outward roundings; the relative pad covers every rounding step
// of the short chains below, including libm's cbrt being off by an ulp.
double pad_dn(double x) { return x - (std::fabs(x) * 1e-14 + 1e-12); }
double pad_up(double x) { return x + (std::fabs(x) * 1e-14 + 1e-12); }

double sqrt_lo(double t) { return t <= 0 ? 0.0 : pad_dn(std::sqrt(t)); }
double sqrt_hi(double t) { return pad_up(std::sqrt(t)); }
double cbrt_lo(double t) { return pad_dn(std::cbrt(t)); }
double cbrt_hi(double t) { return pad_up(std::cbrt(t)); }

struct ScanCtx {
  Rat I_lo, I_hi, lambda;
  long lam_p = 0, lam_r = 1;
  bool primitive_only = false;
  double Ilo_d = 0, Ihi_d = 0;
};

// All members with this q0, emitted in (q1, q2, q3) lexicographic order.
template <class Emit>
void scan_q0(long q0l, const ScanCtx& ctx, Emit&& emit) {
  const Int q0(q0l);
  const RootPow s(q0, ctx.lam_p, ctx.lam_r);
  const auto [s_lo, s_hi] = s.enclosure(96);
  const double shd = d_upper(s_hi);
  const double q0d = (double)q0l;

  const long q1_lo = ceil_rat(Rat(q0) * ctx.I_lo - s_hi).get_si();
  const long q1_hi = floor_rat(Rat(q0) * ctx.I_hi + s_hi).get_si();
  const double inv_q0 = 1.0 / q0d;
  // Absolute slack for range endpoints computed in q-units; double error
  // there stays below 2e-5 for q0 < 2^31 and window magnitudes < 2^5.
  const double sh_q = shd + 1e-4;
  for (long q1 = q1_lo; q1 <= q1_hi; ++q1) {
    double xlo = ((double)q1 - shd) * inv_q0;
    double xhi = ((double)q1 + shd) * inv_q0;
    if (xlo < ctx.Ilo_d) xlo = ctx.Ilo_d;
    if (xhi > ctx.Ihi_d) xhi = ctx.Ihi_d;
    xlo = pad_dn(xlo);
    xhi = pad_up(xhi);
    if (xlo < 0) xlo = 0;  // I is positive here; keeps x^2 monotone below
    if (xlo > xhi) continue;
    const long q2_lo = (long)std::ceil(q0d * (xlo * xlo) - sh_q);
    const long q2_hi = (long)std::floor(q0d * (xhi * xhi) + sh_q);
    for (long q2 = q2_lo; q2 <= q2_hi; ++q2) {
      const double t2lo = ((double)q2 - sh_q) * inv_q0;
      const double t2hi = ((double)q2 + sh_q) * inv_q0;
      if (t2hi < 0) continue;
      const double lo2 = std::max(xlo, sqrt_lo(t2lo));
      const double hi2 = std::min(xhi, sqrt_hi(t2hi));
      if (lo2 > hi2) continue;
      const long q3_lo = (long)std::ceil(q0d * (lo2 * lo2 * lo2) - sh_q);
      const long q3_hi = (long)std::floor(q0d * (hi2 * hi2 * hi2) + sh_q);
      for (long q3 = q3_lo; q3 <= q3_hi; ++q3) {
        // Outer x-window of the q3 constraint; disjoint from the outer
        // window of the first two constraints proves the arc empty.
        if (cbrt_lo(((double)q3 - sh_q) * inv_q0) > hi2) break;
        if (cbrt_hi(((double)q3 + sh_q) * inv_q0) < lo2) continue;
        IntVec4 q = IntVec4::of(q0l, q1, q2, q3);
        if (ctx.primitive_only && !q.is_primitive()) continue;
        Arc arc = arc_of_prepared(q, ctx.lambda, ctx.I_lo, ctx.I_hi, s);
        if (arc.empty) continue;
        emit(std::move(q), std::move(arc));
      }
    }
  }
}

void validate_block_args(const Rat& I_lo, const Rat& I_hi, const Rat& lambda, int k) {
  if (cmp(I_lo, I_hi) >= 0) throw std::domain_error("block: interval must have positive length");
  if (sgn(I_lo) <= 0 && sgn(I_hi) >= 0)
    throw std::domain_error("block: interval must exclude zero");
  if (sgn(lambda) < 0) throw std::domain_error("block: lambda must be >= 0");
  if (k < 0) throw std::domain_error("block: k must be >= 0");
}

ScanCtx make_ctx(const Rat& I_lo, const Rat& I_hi, const Rat& lambda, bool primitive_only) {
  ScanCtx ctx;
  ctx.I_lo = I_lo;
  ctx.I_hi = I_hi;
  ctx.lambda = lambda;
  ctx.lam_p = lambda.get_num().get_si();
  ctx.lam_r = lambda.get_den().get_si();
  ctx.primitive_only = primitive_only;
  ctx.Ilo_d = d_lower(I_lo);
  ctx.Ihi_d = d_upper(I_hi);
  return ctx;
}

// Runs per_q0(q0, part) over [2^k, 2^{k+1}) split into contiguous shards of
// roughly equal total cost (cost ~ q0, so boundaries follow equal increments
// of q0^2); parts come back in shard order for deterministic merging.
template <class Part, class PerQ0>
std::vector<Part> run_shards(int k, int threads, PerQ0&& per_q0) {
  const long A = 1L << k, B = 2L << k;
  long n_shards = threads > 0 ? threads : (long)std::thread::hardware_concurrency();
  if (n_shards < 1) n_shards = 1;
  if (n_shards > B - A) n_shards = B - A;

  std::vector<long> bounds;
  for (long j = 0; j <= n_shards; ++j) {
    const double t =
        (double)A * A + ((double)B * B - (double)A * A) * (double)j / (double)n_shards;
    long v = (long)std::llround(std::sqrt(t));
    v = std::max(A, std::min(B, v));
    if (!bounds.empty()) v = std::max(v, bounds.back());
    bounds.push_back(v);
  }
  bounds.front() = A;
  bounds.back() = B;

  std::vector<Part> parts((std::size_t)n_shards);
  std::vector<std::exception_ptr> errs((std::size_t)n_shards);
  auto run_shard = [&](long j) {
    try {
      for (long q0 = bounds[(std::size_t)j]; q0 < bounds[(std::size_t)j + 1]; ++q0)
        per_q0(q0, parts[(std::size_t)j]);
    } catch (...) {
      errs[(std::size_t)j] = std::current_exception();
    }
  };
  if (n_shards == 1) {
    run_shard(0);
  } else {
    std::vector<std::thread> pool;
    for (long j = 0; j < n_shards; ++j) pool.emplace_back(run_shard, j);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return parts;
}

DyadicBlock reflect_block(DyadicBlock b) {
  const Rat lo = -b.I_hi, hi = -b.I_lo;
  b.I_lo = lo;
  b.I_hi = hi;
  for (auto& m : b.members) {
    m.q = IntVec4(m.q[0], -m.q[1], m.q[2], -m.q[3]);
    Rat alo = -m.arc_hi, ahi = -m.arc_lo;
    m.arc_lo = std::move(alo);
    m.arc_hi = std::move(ahi);
  }
  std::sort(b.members.begin(), b.members.end(),
            [](const ApproximantVector& a, const ApproximantVector& c) {
              return lex_less(a.q, c.q);
            });
  return b;
}

void finalize(DyadicBlock& b) {
  b.rho_plus = 0.0;
  for (const auto& m : b.members) b.rho_plus = std::max(b.rho_plus, m.diam_up);
}

}  // namespace

DyadicBlock enumerate_block(const Rat& I_lo, const Rat& I_hi, const Rat& lambda,
                            int k, bool primitive_only, int k_cap, int threads) {
  validate_block_args(I_lo, I_hi, lambda, k);
  if (k > k_cap || k > 30)
    throw resource_error("enumerate_block: k exceeds the resource cap");
  if (sgn(I_hi) < 0)
    return reflect_block(enumerate_block(-I_hi, -I_lo, lambda, k, primitive_only,
                                         k_cap, threads));

  DyadicBlock block;
  block.k = k;
  block.lambda = lambda;
  block.I_lo = I_lo;
  block.I_hi = I_hi;
  block.primitive_only = primitive_only;

  const ScanCtx ctx = make_ctx(I_lo, I_hi, lambda, primitive_only);
  auto parts = run_shards<std::vector<ApproximantVector>>(
      k, threads, [&](long q0, std::vector<ApproximantVector>& part) {
        scan_q0(q0, ctx, [&](IntVec4&& q, Arc&& arc) {
          part.push_back({std::move(q), std::move(arc.lo), std::move(arc.hi), arc.diam_up});
        });
      });
  for (auto& p : parts)
    for (auto& m : p) block.members.push_back(std::move(m));
  finalize(block);
  return block;
}

BlockSummary enumerate_summary(const Rat& I_lo, const Rat& I_hi, const Rat& lambda,
                               int k, bool primitive_only, int k_cap, int threads) {
  validate_block_args(I_lo, I_hi, lambda, k);
  if (k > k_cap || k > 30)
    throw resource_error("enumerate_summary: k exceeds the resource cap");
  if (sgn(I_hi) < 0)
    return enumerate_summary(-I_hi, -I_lo, lambda, k, primitive_only, k_cap, threads);

  const ScanCtx ctx = make_ctx(I_lo, I_hi, lambda, primitive_only);
  struct Tally {
    std::size_t count = 0;
    double rho = 0.0;
  };
  auto parts = run_shards<Tally>(k, threads, [&](long q0, Tally& part) {
    scan_q0(q0, ctx, [&](IntVec4&&, Arc&& arc) {
      ++part.count;
      part.rho = std::max(part.rho, arc.diam_up);
    });
  });
  BlockSummary sum;
  sum.k = k;
  for (const auto& p : parts) {
    sum.count += p.count;
    sum.rho_plus = std::max(sum.rho_plus, p.rho);
  }
  return sum;
}

DyadicBlock brute_force_block(const Rat& I_lo, const Rat& I_hi, const Rat& lambda,
                              int k, bool primitive_only) {
  validate_block_args(I_lo, I_hi, lambda, k);
  if (k > 12) throw resource_error("brute_force_block: refuses k > 12");
  if (sgn(I_hi) < 0)
    return reflect_block(brute_force_block(-I_hi, -I_lo, lambda, k, primitive_only));

  DyadicBlock block;
  block.k = k;
  block.lambda = lambda;
  block.I_lo = I_lo;
  block.I_hi = I_hi;
  block.primitive_only = primitive_only;

  const long lam_p = lambda.get_num().get_si(), lam_r = lambda.get_den().get_si();
  for (long q0l = 1L << k; q0l < 2L << k; ++q0l) {
    const Int q0(q0l);
    const RootPow s(q0, lam_p, lam_r);
    const auto [s_lo, s_hi] = s.enclosure(96);
    // Full spec ranges for each coordinate: q_i in [q0 min(I^i)-1, q0 max(I^i)+1].
    Rat pmin[4], pmax[4];
    for (int i = 1; i <= 3; ++i) {
      const Rat a = pow_rat(I_lo, (unsigned long)i), b = pow_rat(I_hi, (unsigned long)i);
      pmin[i] = std::min(a, b);
      pmax[i] = std::max(a, b);
    }
    const long r1_lo = floor_rat(Rat(q0) * pmin[1]).get_si() - 1;
    const long r1_hi = ceil_rat(Rat(q0) * pmax[1]).get_si() + 1;
    for (long q1 = r1_lo; q1 <= r1_hi; ++q1) {
      // Exact outer x-window of (q0, q1); empty means arc_of would reject
      // every extension, so the prefix is skipped.
      const Rat w1lo = std::max(I_lo, Rat((Rat(q1) - s_hi) / Rat(q0)));
      const Rat w1hi = std::min(I_hi, Rat((Rat(q1) + s_hi) / Rat(q0)));
      if (cmp(w1lo, w1hi) > 0) continue;
      // x^2-window intersection, kept in squared coordinates (exact).
      const Rat sq_lo = w1lo * w1lo, sq_hi = w1hi * w1hi;
      long r2_lo = std::max(floor_rat(Rat(q0) * pmin[2]).get_si() - 1,
                            ceil_rat(Rat(q0) * sq_lo - s_hi).get_si());
      long r2_hi = std::min(ceil_rat(Rat(q0) * pmax[2]).get_si() + 1,
                            floor_rat(Rat(q0) * sq_hi + s_hi).get_si());
      const Rat cb_lo = sq_lo * w1lo, cb_hi = sq_hi * w1hi;
      for (long q2 = r2_lo; q2 <= r2_hi; ++q2) {
        const long r3_lo = std::max(floor_rat(Rat(q0) * pmin[3]).get_si() - 1,
                                    ceil_rat(Rat(q0) * cb_lo - s_hi).get_si());
        const long r3_hi = std::min(ceil_rat(Rat(q0) * pmax[3]).get_si() + 1,
                                    floor_rat(Rat(q0) * cb_hi + s_hi).get_si());
        for (long q3 = r3_lo; q3 <= r3_hi; ++q3) {
          IntVec4 q = IntVec4::of(q0l, q1, q2, q3);
          if (primitive_only && !q.is_primitive()) continue;
          Arc arc = arc_of_prepared(q, lambda, I_lo, I_hi, s);
          if (arc.empty) continue;
          block.members.push_back(
              {std::move(q), std::move(arc.lo), std::move(arc.hi), arc.diam_up});
        }
      }
    }
  }
  finalize(block);
  return block;
}

BlockSummary block_summary(const DyadicBlock& block) {
  BlockSummary sum;
  sum.k = block.k;
  sum.count = block.members.size();
  sum.rho_plus = block.rho_plus;
  return sum;
}

}  // namespace vlab
