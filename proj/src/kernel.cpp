#include "vlab/kernel.hpp"

#include <algorithm>

namespace vlab {

Int round_div(const Int& a, const Int& b) {
  Int aa = a, bb = b;
  if (sgn(bb) < 0) {
    aa = -aa;
    bb = -bb;
  }
  Int q;
  Int num = 2 * aa + bb;
  Int den = 2 * bb;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

std::vector<IntVec4> kernel_basis(const std::vector<IntVec4>& rows,
                                  std::vector<IntVec4>* complement,
                                  Mat4* transform) {
  const int r = (int)rows.size();
  std::vector<std::array<Int, 4>> w((std::size_t)r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < 4; ++j) w[(std::size_t)i][(std::size_t)j] = rows[(std::size_t)i][j];
  Mat4 u{};  // u[row][col]; columns are tracked
  for (int i = 0; i < 4; ++i) u[(std::size_t)i][(std::size_t)i] = 1;

  auto col_swap = [&](int a, int b) {
    if (a == b) return;
    for (int i = 0; i < r; ++i) std::swap(w[(std::size_t)i][(std::size_t)a], w[(std::size_t)i][(std::size_t)b]);
    for (int i = 0; i < 4; ++i) std::swap(u[(std::size_t)i][(std::size_t)a], u[(std::size_t)i][(std::size_t)b]);
  };
  auto col_submul = [&](int dst, const Int& q, int src) {  // C_dst -= q * C_src
    if (sgn(q) == 0) return;
    for (int i = 0; i < r; ++i)
      w[(std::size_t)i][(std::size_t)dst] -= q * w[(std::size_t)i][(std::size_t)src];
    for (int i = 0; i < 4; ++i)
      u[(std::size_t)i][(std::size_t)dst] -= q * u[(std::size_t)i][(std::size_t)src];
  };

  int col = 0;
  for (int i = 0; i < r && col < 4; ++i) {
    for (;;) {
      int best = -1;
      for (int j = col; j < 4; ++j) {
        const Int& v = w[(std::size_t)i][(std::size_t)j];
        if (sgn(v) == 0) continue;
        if (best < 0 || abs(v) < abs(w[(std::size_t)i][(std::size_t)best])) best = j;
      }
      if (best < 0) break;  // row dependent on earlier pivots
      col_swap(col, best);
      bool clean = true;
      for (int j = col + 1; j < 4; ++j) {
        const Int& v = w[(std::size_t)i][(std::size_t)j];
        if (sgn(v) == 0) continue;
        Int q = round_div(v, w[(std::size_t)i][(std::size_t)col]);
        col_submul(j, q, col);
        if (sgn(w[(std::size_t)i][(std::size_t)j]) != 0) clean = false;
      }
      if (clean) {
        ++col;
        break;
      }
    }
  }

  std::vector<IntVec4> out;
  for (int j = col; j < 4; ++j) {
    IntVec4 v;
    for (int i = 0; i < 4; ++i) v[i] = u[(std::size_t)i][(std::size_t)j];
    out.push_back(v);
  }
  if (complement != nullptr) {
    complement->clear();
    for (int j = 0; j < col; ++j) {
      IntVec4 v;
      for (int i = 0; i < 4; ++i) v[i] = u[(std::size_t)i][(std::size_t)j];
      complement->push_back(v);
    }
  }
  if (transform != nullptr) *transform = u;
  return out;
}


void reduce_basis(std::vector<IntVec4>& basis) {
  // Exact LLL with delta = 3/4.  Pairwise greedy reduction is not enough
  // here: rank-3 kernel bases can stall with astronomically long vectors
  // whose pairwise rounded quotients all vanish, and downstream enumeration
  // bounds then explode.  The Gram-Schmidt data is recomputed from scratch
  // after every basis change; at dimension <= 4 that costs nothing and keeps
  // the update logic trivially correct.
  const std::size_t d = basis.size();
  if (d < 2) return;

  std::vector<std::vector<Rat>> mu(d, std::vector<Rat>(d, Rat(0)));
  std::vector<Rat> B(d, Rat(0));  // squared Gram-Schmidt lengths
  auto gso = [&]() {
    std::vector<std::array<Rat, 4>> star(d);
    for (std::size_t i = 0; i < d; ++i) {
      for (int c = 0; c < 4; ++c) star[i][(std::size_t)c] = Rat(basis[i][c]);
      for (std::size_t j = 0; j < i; ++j) {
        Rat num(0);
        for (int c = 0; c < 4; ++c) num += Rat(basis[i][c]) * star[j][(std::size_t)c];
        mu[i][j] = B[j] == 0 ? Rat(0) : Rat(num / B[j]);
        for (int c = 0; c < 4; ++c)
          star[i][(std::size_t)c] = star[i][(std::size_t)c] - mu[i][j] * star[j][(std::size_t)c];
      }
      Rat nn(0);
      for (int c = 0; c < 4; ++c) nn += star[i][(std::size_t)c] * star[i][(std::size_t)c];
      B[i] = nn;
    }
  };
  auto size_reduce = [&](std::size_t i, std::size_t j) {
    const Int q = round_div(mu[i][j].get_num(), mu[i][j].get_den());
    if (sgn(q) == 0) return;
    for (int c = 0; c < 4; ++c) basis[i][c] -= q * basis[j][c];
    gso();
  };

  gso();
  std::size_t k = 1;
  const Rat delta = make_rat(3, 4);
  for (long guard = 0; k < d; ++guard) {
    if (guard > 100000) throw invariant_error("reduce_basis: LLL failed to terminate");
    size_reduce(k, k - 1);
    if (B[k] >= Rat((delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1])) {
      for (std::size_t j = k >= 2 ? k - 2 : 0; j + 1 > 0; --j) {
        size_reduce(k, j);
        if (j == 0) break;
      }
      ++k;
    } else {
      std::swap(basis[k], basis[k - 1]);
      gso();
      k = k > 1 ? k - 1 : 1;
    }
  }
}

Int det_small(const std::vector<std::vector<Int>>& m) {
  const std::size_t d = m.size();
  if (d == 1) return m[0][0];
  if (d == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

std::vector<std::vector<Int>> adjugate(const std::vector<std::vector<Int>>& m) {
  const std::size_t d = m.size();
  std::vector<std::vector<Int>> adj(d, std::vector<Int>(d));
  if (d == 1) {
    adj[0][0] = 1;
    return adj;
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t t = 0; t < d; ++t) {
      std::vector<std::vector<Int>> minor;
      for (std::size_t a = 0; a < d; ++a) {
        if (a == i) continue;
        std::vector<Int> row;
        for (std::size_t b = 0; b < d; ++b) {
          if (b == t) continue;
          row.push_back(m[a][b]);
        }
        minor.push_back(row);
      }
      Int mv = det_small(minor);
      if (((i + t) & 1) != 0) mv = -mv;
      adj[t][i] = mv;
    }
  return adj;
}

Mat4 inverse_unimodular(const Mat4& u) {
  // Cofactor expansion; det must be +-1.
  auto minor3 = [&](int skip_r, int skip_c) {
    std::vector<std::vector<Int>> m;
    for (int i = 0; i < 4; ++i) {
      if (i == skip_r) continue;
      std::vector<Int> row;
      for (int j = 0; j < 4; ++j) {
        if (j == skip_c) continue;
        row.push_back(u[(std::size_t)i][(std::size_t)j]);
      }
      m.push_back(row);
    }
    return det_small(m);
  };
  Int det = 0;
  for (int j = 0; j < 4; ++j) {
    Int c = u[0][(std::size_t)j] * minor3(0, j);
    if ((j & 1) != 0) c = -c;
    det += c;
  }
  if (det != 1 && det != -1) throw invariant_error("inverse_unimodular: matrix is not unimodular");
  Mat4 inv{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Int c = minor3(j, i);  // adjugate: transposed cofactors
      if (((i + j) & 1) != 0) c = -c;
      inv[(std::size_t)i][(std::size_t)j] = (det == 1) ? c : Int(-c);
    }
  return inv;
}

}  // namespace vlab
