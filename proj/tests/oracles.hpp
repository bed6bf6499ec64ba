#ifndef LVPOP_TESTS_ORACLES_HPP
#define LVPOP_TESTS_ORACLES_HPP

// Independent oracles used by the test and acceptance suites. These stay
// deliberately decoupled from the engine code paths they check.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oracles {

// Absorption probability of the life-and-death birth-death chain: state is
// the count i of species 1; per step i -> i+1 with rate n_1 n_2 p21 and
// i -> i-1 with rate n_1 n_2 p12... the rates share the n_1 n_2 pair factor,
// so the embedded jump chain moves up with probability p21/(p12+p21). Solved
// as the tridiagonal harmonic system p_0 = 0, p_n = 1,
//   p_i = up_i p_{i+1} + down_i p_{i-1} + stay_i p_i
// by Gaussian elimination (Thomas algorithm), not by the closed form, so it
// can serve as an oracle for it.
inline double life_death_absorb_probability(std::int64_t n, std::int64_t start,
                                            double p12 = 1.0, double p21 = 1.0) {
  if (start <= 0) return 0.0;
  if (start >= n) return 1.0;
  const std::int64_t m = n - 1;  // unknowns p_1 .. p_{n-1}
  std::vector<double> diag(m), lower(m), upper(m), rhs(m);
  for (std::int64_t i = 1; i <= m; ++i) {
    // Conditioned on the pair (1,2) interacting, species 1 grows when 1 is
    // the initiator (prob 1/2) and wins (p12): up = p12/(p12+p21).
    double up = p12 / (p12 + p21);
    double down = 1.0 - up;
    diag[i - 1] = 1.0;
    lower[i - 1] = -down;
    upper[i - 1] = -up;
    rhs[i - 1] = (i == m) ? up : 0.0;  // p_n = 1 folded into the last row
    if (i == 1) lower[0] = 0.0;        // p_0 = 0
    if (i == m) upper[m - 1] = 0.0;
  }
  // Thomas algorithm.
  for (std::int64_t i = 1; i < m; ++i) {
    double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> p(m);
  p[m - 1] = rhs[m - 1] / diag[m - 1];
  for (std::int64_t i = m - 2; i >= 0; --i)
    p[i] = (rhs[i] - upper[i] * p[i + 1]) / diag[i];
  return p[start - 1];
}

}  // namespace oracles

#endif
