#ifndef LVPOP_STATS_HPP
#define LVPOP_STATS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace lvpop {

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

// Wilson score interval for a binomial proportion; preferred over Wald for
// correctness next to 0 and 1.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                               double z);

// Regularized upper incomplete gamma Q(a, x); series for x < a+1 and
// continued fraction otherwise.
double gamma_q(double a, double x);

// Survival function of the chi-square distribution, Q(dof/2, x/2).
double chi_square_sf(double x, int dof);

struct Chi2Result {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::uint64_t pooled_cells = 0;
};

// Two-sample homogeneity test on category counts. Cells whose pooled
// expectation falls below min_expected are merged into a rest bucket.
Chi2Result chi2_two_sample(const std::vector<std::uint64_t>& a,
                           const std::vector<std::uint64_t>& b,
                           double min_expected = 5.0);

// One-sample goodness of fit against expected probabilities, with the same
// low-expectation pooling.
Chi2Result chi2_goodness(const std::vector<std::uint64_t>& counts,
                         const std::vector<double>& probs,
                         double min_expected = 5.0);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_ss = 0.0;
  std::vector<double> residuals;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

// Interpolated quantile (R-7); input need not be sorted.
double quantile(std::vector<double> values, double q);

// FNV-1a 64-bit, used for config fingerprints.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace lvpop

#endif
