// Exhaustive height-box census of integer cubics: discriminant window and
// root-spread filters, class decomposition under the greedy reduction, the
// Davenport class-count probe, and the CSV export.  The scan covers leading
// coefficients a3 >= 1 and doubles each survivor, since P and -P share
// discriminant, spread and reduced representative.
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "vlab/cubic.hpp"

namespace vlab {
namespace {

std::string class_key(const CubicPoly& Q) {
  return Q[0].get_str() + "," + Q[1].get_str() + "," + Q[2].get_str() + "," +
         Q[3].get_str();
}

}  // namespace

CensusResult census(long H, const Int& D, double R, long height_cap) {
  if (H < 1) throw std::domain_error("census: H >= 1 required");
  if (height_cap < 1) throw std::domain_error("census: height_cap >= 1 required");
  if (H > height_cap) throw resource_error("census: height cap exceeded");
  // 54 * H^4 bounds |disc|, so the int64 inner loop is safe far beyond any
  // feasible (2H+1)^4 scan; refuse the infeasible ones outright.
  if (H > 2000) throw resource_error("census: scan too large");
  if (std::isnan(R) || R <= 0) throw std::domain_error("census: R > 0 required");

  const bool d_unbounded = sgn(D) < 0;
  if (!d_unbounded && sgn(D) == 0)
    throw std::domain_error("census: D must be nonzero (negative = unbounded)");
  const long long dcap = d_unbounded          ? 0
                         : mpz_fits_slong_p(D.get_mpz_t()) ? (long long)D.get_si()
                                              : std::numeric_limits<long long>::max();
  const bool has_spread = std::isfinite(R);
  const double floor_val = has_spread ? 1.0 / R : 0.0;

  CensusResult res;
  res.height_cap = H;
  res.disc_cap = D;
  res.r_cap = R;

  for (long a3 = 1; a3 <= H; ++a3)
    for (long a2 = -H; a2 <= H; ++a2) {
      const long long t_lin0 = -4LL * a2 * a2 * a2;  // coefficient of a0
      for (long a1 = -H; a1 <= H; ++a1) {
        const long long lin = t_lin0 + 18LL * a3 * a2 * a1;
        const long long quad = -27LL * a3 * a3;
        const long long cst =
            (long long)a2 * a2 * a1 * a1 - 4LL * a3 * a1 * a1 * a1;
        for (long a0 = -H; a0 <= H; ++a0) {
          const long long d = cst + a0 * (lin + a0 * quad);
          if (d == 0) continue;
          const long long ad = d < 0 ? -d : d;
          if (!d_unbounded && ad > dcap) continue;
          const CubicPoly P = CubicPoly::of(a0, a1, a2, a3);
          if (has_spread && root_spread(P) < floor_val) continue;
          res.total += 2;
          res.classes[class_key(reduce_class(P))] += 2;
        }
      }
    }
  return res;
}

double davenport_ratio(const Int& D, long H_probe) {
  if (sgn(D) <= 0) throw std::domain_error("davenport_ratio: D > 0 required");
  const CensusResult c =
      census(H_probe, D, std::numeric_limits<double>::infinity());
  return (double)c.classes.size() / D.get_d();
}

void census_csv(const std::vector<CensusResult>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("census_csv: cannot open " + path);
  out << "H,D,R,count,classes,constant_flag\n";
  for (const auto& r : rows) {
    out << r.height_cap << ",";
    if (sgn(r.disc_cap) < 0)
      out << "inf";
    else
      out << r.disc_cap.get_str();
    out << ",";
    if (!std::isfinite(r.r_cap))
      out << "inf";
    else
      out << decimal_string(Rat(r.r_cap), 6);
    out << "," << r.total << "," << r.classes.size() << ","
        << (r.heuristic_classes ? "heuristic" : "exact") << "\n";
  }
  if (!out.flush()) throw std::runtime_error("census_csv: write failed: " + path);
}

}  // namespace vlab
