#include "lvpop/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lvpop/errors.hpp"

namespace lvpop {

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                               double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // The endpoints equal 0 and 1 exactly at the boundary counts; keep them
  // exact under floating-point rounding.
  double low = successes == 0 ? 0.0 : std::max(0.0, center - half);
  double high = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {low, high};
}

// https://en.wikipedia.org/wiki/Incomplete_gamma_function; the classic
// series/continued-fraction split evaluated with lgamma.
double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw Error(Errc::BadConfig, "gamma_q domain");
  if (x == 0.0) return 1.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // P(a,x) by series, Q = 1 - P.
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    double p = sum * std::exp(-x + a * std::log(x) - lg);
    return 1.0 - p;
  }
  // Q(a,x) by Lentz's continued fraction.
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double f = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return f * std::exp(-x + a * std::log(x) - lg);
}

double chi_square_sf(double x, int dof) {
  if (dof <= 0) throw Error(Errc::BadConfig, "chi-square dof must be positive");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * x);
}

Chi2Result chi2_two_sample(const std::vector<std::uint64_t>& a,
                           const std::vector<std::uint64_t>& b,
                           double min_expected) {
  if (a.size() != b.size())
    throw Error(Errc::BadConfig, "chi2 samples must share categories");
  const double na = static_cast<double>(std::accumulate(a.begin(), a.end(), std::uint64_t{0}));
  const double nb = static_cast<double>(std::accumulate(b.begin(), b.end(), std::uint64_t{0}));
  if (na == 0.0 || nb == 0.0) throw Error(Errc::BadConfig, "empty chi2 sample");

  // Merge low-expectation categories into a rest bucket (cutoff on the
  // smaller sample's expected count).
  std::vector<std::pair<double, double>> cells;  // (a_c, b_c)
  double rest_a = 0.0, rest_b = 0.0;
  const double share = std::min(na, nb) / (na + nb);
  for (std::size_t c = 0; c < a.size(); ++c) {
    double tot = static_cast<double>(a[c] + b[c]);
    if (tot * share < min_expected) {
      rest_a += static_cast<double>(a[c]);
      rest_b += static_cast<double>(b[c]);
    } else {
      cells.emplace_back(static_cast<double>(a[c]), static_cast<double>(b[c]));
    }
  }
  Chi2Result res;
  if ((rest_a + rest_b) * share >= min_expected || cells.size() < 2) {
    cells.emplace_back(rest_a, rest_b);
    res.pooled_cells = 1;
  } else if (rest_a + rest_b > 0.0 && !cells.empty()) {
    // Rest bucket too small to stand alone; fold it into the smallest cell.
    auto smallest = std::min_element(cells.begin(), cells.end(),
                                     [](const auto& l, const auto& r) {
                                       return l.first + l.second < r.first + r.second;
                                     });
    smallest->first += rest_a;
    smallest->second += rest_b;
    res.pooled_cells = 1;
  }
  if (cells.size() < 2) {
    // Both samples concentrated on one category: no evidence of difference.
    res.dof = 0;
    res.p_value = 1.0;
    return res;
  }

  double stat = 0.0;
  for (const auto& [ca, cb] : cells) {
    double tot = ca + cb;
    if (tot == 0.0) continue;
    double ea = tot * na / (na + nb);
    double eb = tot * nb / (na + nb);
    stat += (ca - ea) * (ca - ea) / ea + (cb - eb) * (cb - eb) / eb;
  }
  res.statistic = stat;
  res.dof = static_cast<int>(cells.size()) - 1;
  res.p_value = chi_square_sf(stat, res.dof);
  return res;
}

Chi2Result chi2_goodness(const std::vector<std::uint64_t>& counts,
                         const std::vector<double>& probs, double min_expected) {
  if (counts.size() != probs.size())
    throw Error(Errc::BadConfig, "chi2 counts/probs size mismatch");
  const double n = static_cast<double>(
      std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
  if (n == 0.0) throw Error(Errc::BadConfig, "empty chi2 sample");

  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double rest_obs = 0.0, rest_exp = 0.0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    double e = probs[c] * n;
    if (e < min_expected) {
      rest_obs += static_cast<double>(counts[c]);
      rest_exp += e;
    } else {
      cells.emplace_back(static_cast<double>(counts[c]), e);
    }
  }
  Chi2Result res;
  if (rest_exp >= min_expected || cells.size() < 2) {
    cells.emplace_back(rest_obs, rest_exp);
    res.pooled_cells = 1;
  } else if (rest_exp > 0.0 && !cells.empty()) {
    cells.back().first += rest_obs;
    cells.back().second += rest_exp;
    res.pooled_cells = 1;
  }
  if (cells.size() < 2) {
    res.dof = 0;
    res.p_value = 1.0;
    return res;
  }
  double stat = 0.0;
  for (const auto& [obs, exp] : cells)
    if (exp > 0.0) stat += (obs - exp) * (obs - exp) / exp;
  res.statistic = stat;
  res.dof = static_cast<int>(cells.size()) - 1;
  res.p_value = chi_square_sf(stat, res.dof);
  return res;
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(Errc::BadConfig, "least squares needs >= 2 matched points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinearFit fit;
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw Error(Errc::BadConfig, "degenerate abscissae");
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.residuals.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    fit.residuals[i] = y[i] - (fit.slope * x[i] + fit.intercept);
    fit.residual_ss += fit.residuals[i] * fit.residuals[i];
  }
  return fit;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(Errc::BadConfig, "quantile of empty sample");
  std::sort(values.begin(), values.end());
  if (q <= 0.0) return values.front();
  if (q >= 1.0) return values.back();
  double pos = q * static_cast<double>(values.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace lvpop
