#ifndef LVPOP_POTENTIAL_HPP
#define LVPOP_POTENTIAL_HPP

#include <cstdint>
#include <vector>

#include "lvpop/protocol.hpp"
#include "lvpop/state.hpp"

namespace lvpop {

using Matrix = std::vector<std::vector<double>>;

// Nett interaction matrix A = P - P^T (skew-symmetric). LV-kind only.
Matrix nett_matrix(const ValidatedProtocol& vp);

// Potential-vector case tags:
//   conserved  (i): b >= 0, b != 0, b'A = 0   -- U constant along the flow
//   increasing (ii): b'A > 0                  -- U strictly increasing
enum class PotentialCase { conserved, increasing };

struct PotentialVector {
  std::vector<double> b;   // normalized so that max |b_i| = 1
  PotentialCase tag = PotentialCase::conserved;
  // case (i): max_j |(b'A)_j|; case (ii): min_j (b'A)_j
  double residual = 0.0;
};

// LP optimum below this counts as zero when deciding between cases.
inline constexpr double kCaseThreshold = 1e-9;

// Chooses b per the two-case construction. Case (i) is searched first with
// the LP {max sum b_i : b'A = 0, 0 <= b_i <= 1}; if its optimum is at the
// zero vector, b is taken from the feasibility LP {(b'A)_j >= 1 for all j}
// with b free, and rescaled to unit max-norm.
PotentialVector compute_b(const Matrix& a);

// U(x) = sum_i b_i ln x_i. Species with b_i = 0 are exempt from the
// positivity requirement; any other x_i <= 0 raises ZeroPopulation.
double potential_U(const std::vector<double>& b, const std::vector<double>& x);

// Exact expected one-step change of U from an aggregate state:
//   E delta = sum_{i,j} w_ij P_ij [ b_i(ln(n_i+1)-ln n_i) + b_j(ln(n_j-1)-ln n_j) ]
// with w_ij = n_i n_j / n^2 in paper mode and
// w_ij = n_i (n_j - [i==j]) / (n(n-1)) in exact mode. Zero-weight terms are
// skipped, so absorbing monochromatic states evaluate to 0. A species at
// count 1 facing a live predator makes the expectation -inf; this is
// reported as ZeroPopulation. LV-kind only.
double expected_delta_U(const AggregateState& state, const ValidatedProtocol& vp,
                        const std::vector<double>& b,
                        PairingMode mode = PairingMode::paper);

struct StarPotential {
  std::uint64_t product = 0;  // n1 * n2 * n3
  std::int64_t spread = 0;    // max count - min count
};

// Product potential of the star analysis; requires exactly 3 leaf counts.
StarPotential star_product_potential(const std::vector<std::int64_t>& leaf_counts);

}  // namespace lvpop

#endif
