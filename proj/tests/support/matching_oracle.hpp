#pragma once

// Brute-force reference for the onion scatterer: assemble the node matching
// conditions as a dense linear system in (r, t, alpha, beta, delta) and solve
// it by Gaussian elimination.  Independent of the closed form in the library;
// exists so the closed form can be trusted.
//
// Unknowns, for a wave exp(-ikx) + r exp(ikx) entering one halfline:
//   r, t             halfline amplitudes
//   alpha, beta      exp(+-ikx) coefficients on links touching the entry node
//   delta            cos(kx) coefficient on links between the other nodes
// Conditions: value continuity at both node types and the delta-coupling
// derivative sum at both node types.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "qg/geoscatter.hpp"

namespace qg_test {

using complexd = std::complex<double>;

struct OnionSolution {
  complexd r, t, alpha, beta, delta;
};

template <std::size_t N>
std::array<complexd, N> solve_dense(std::array<std::array<complexd, N>, N> A,
                                    std::array<complexd, N> b) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t row = col + 1; row < N; ++row)
      if (std::abs(A[row][col]) > std::abs(A[piv][col])) piv = row;
    if (std::abs(A[piv][col]) == 0.0)
      throw std::runtime_error("singular matching system");
    std::swap(A[col], A[piv]);
    std::swap(b[col], b[piv]);
    for (std::size_t row = col + 1; row < N; ++row) {
      const complexd f = A[row][col] / A[col][col];
      for (std::size_t j = col; j < N; ++j) A[row][j] -= f * A[col][j];
      b[row] -= f * b[col];
    }
  }
  std::array<complexd, N> x{};
  for (std::size_t i = N; i-- > 0;) {
    complexd s = b[i];
    for (std::size_t j = i + 1; j < N; ++j) s -= A[i][j] * x[j];
    x[i] = s / A[i][i];
  }
  return x;
}

// `permute` relabels equations and unknowns before solving; the solution must
// not depend on the assembly order.
inline OnionSolution solve_matching(const qg::OnionGraph& g, double k,
                                    bool permute = false) {
  const complexd i(0.0, 1.0);
  const complexd eta = std::exp(i * (0.5 * k * g.ell));
  const complexd etab = std::conj(eta);
  const complexd gamma = g.c / (i * k);
  const double N = g.N;
  const double n = g.n;
  const double ch = std::cos(0.5 * k * g.ell);
  const double sh = std::sin(0.5 * k * g.ell);

  // columns: r, t, alpha, beta, delta
  std::array<std::array<complexd, 5>, 5> A{};
  std::array<complexd, 5> b{};

  // entry-node continuity: 1 + r = alpha etab + beta eta
  A[0] = {1.0, 0.0, -etab, -eta, 0.0};
  b[0] = -1.0;
  // far-node continuity with the halfline: t = alpha eta + beta etab
  A[1] = {0.0, 1.0, -eta, -etab, 0.0};
  b[1] = 0.0;
  // far-node continuity with the symmetric links: t = delta cos(k ell / 2)
  A[2] = {0.0, 1.0, 0.0, 0.0, -ch};
  b[2] = 0.0;
  // entry-node derivative sum: (r - 1) + N(n-1)(alpha etab - beta eta) = gamma (1 + r)
  A[3] = {1.0 - gamma, 0.0, N * (n - 1.0) * etab, -N * (n - 1.0) * eta, 0.0};
  b[3] = 1.0 + gamma;
  // far-node derivative sum:
  // t - N(alpha eta - beta etab) - iN(n-2) delta sin(k ell / 2) = gamma t
  A[4] = {0.0, 1.0 - gamma, -N * eta, N * etab, -i * N * (n - 2.0) * sh};
  b[4] = 0.0;

  if (permute) {
    // rows 0..4 -> reversed; columns (r,t,alpha,beta,delta) -> (beta,delta,r,t,alpha)
    std::array<std::array<complexd, 5>, 5> Ap{};
    std::array<complexd, 5> bp{};
    constexpr int colmap[5] = {2, 3, 4, 0, 1};  // new column of old unknown
    for (int row = 0; row < 5; ++row) {
      for (int col = 0; col < 5; ++col) Ap[4 - row][colmap[col]] = A[row][col];
      bp[4 - row] = b[row];
    }
    const auto xp = solve_dense(Ap, bp);
    return {xp[colmap[0]], xp[colmap[1]], xp[colmap[2]], xp[colmap[3]],
            xp[colmap[4]]};
  }
  const auto x = solve_dense(A, b);
  return {x[0], x[1], x[2], x[3], x[4]};
}

}  // namespace qg_test
