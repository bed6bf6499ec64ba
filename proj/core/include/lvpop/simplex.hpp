#ifndef LVPOP_SIMPLEX_HPP
#define LVPOP_SIMPLEX_HPP

#include <vector>

namespace lvpop::detail {

// Dense two-phase simplex for toy instances:
//   maximize c'x  subject to  Ax <= b, x >= 0.
// Tableau formulation with Bland-style tie-breaking on indices; adequate for
// the handful-of-variables programs the potential construction produces.
struct LpResult {
  enum class Status { optimal, infeasible, unbounded } status;
  double objective = 0.0;
  std::vector<double> x;
};

LpResult solve_lp(const std::vector<std::vector<double>>& a,
                  const std::vector<double>& b, const std::vector<double>& c);

}  // namespace lvpop::detail

#endif
