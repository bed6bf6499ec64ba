#include "lvpop/ode.hpp"

#include <algorithm>
#include <cmath>

namespace lvpop {

std::vector<double> lv_rhs(const std::vector<double>& x, const Matrix& a) {
  const std::size_t k = x.size();
  std::vector<double> v(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    double ax = 0.0;
    for (std::size_t j = 0; j < k; ++j) ax += a[i][j] * x[j];
    v[i] = x[i] * ax;
  }
  return v;
}

namespace {

void rhs_into(const std::vector<double>& x, const Matrix& a, std::vector<double>& v) {
  const std::size_t k = x.size();
  for (std::size_t i = 0; i < k; ++i) {
    double ax = 0.0;
    for (std::size_t j = 0; j < k; ++j) ax += a[i][j] * x[j];
    v[i] = x[i] * ax;
  }
}

struct Rk4Scratch {
  std::vector<double> k1, k2, k3, k4, tmp;
  explicit Rk4Scratch(std::size_t k) : k1(k), k2(k), k3(k), k4(k), tmp(k) {}
};

void rk4_step(std::vector<double>& x, const Matrix& a, double h, Rk4Scratch& s) {
  const std::size_t k = x.size();
  rhs_into(x, a, s.k1);
  for (std::size_t i = 0; i < k; ++i) s.tmp[i] = x[i] + 0.5 * h * s.k1[i];
  rhs_into(s.tmp, a, s.k2);
  for (std::size_t i = 0; i < k; ++i) s.tmp[i] = x[i] + 0.5 * h * s.k2[i];
  rhs_into(s.tmp, a, s.k3);
  for (std::size_t i = 0; i < k; ++i) s.tmp[i] = x[i] + h * s.k3[i];
  rhs_into(s.tmp, a, s.k4);
  for (std::size_t i = 0; i < k; ++i)
    x[i] += h / 6.0 * (s.k1[i] + 2.0 * s.k2[i] + 2.0 * s.k3[i] + s.k4[i]);
}

// Projects back onto the simplex and returns the pre-projection drift.
double project(std::vector<double>& x) {
  double sum = 0.0;
  for (double v : x) sum += v;
  double drift = std::fabs(sum - 1.0);
  for (double& v : x) v /= sum;
  return drift;
}

void check_positivity(const std::vector<double>& before,
                      const std::vector<double>& after, double h) {
  for (std::size_t i = 0; i < before.size(); ++i)
    if (before[i] > 0.0 && !(after[i] > 0.0))
      throw Error(Errc::StepSizeTooLarge,
                  "coordinate " + std::to_string(i) + " lost positivity at h = " +
                      std::to_string(h));
}

}  // namespace

Orbit rk4_integrate(const std::vector<double>& x0, const Matrix& a, double duration,
                    double h, const std::vector<double>* b,
                    std::uint64_t sample_every) {
  if (!(h > 0.0)) throw Error(Errc::BadConfig, "step size must be positive");
  if (duration < 0.0) throw Error(Errc::BadConfig, "duration must be non-negative");
  Orbit orbit;
  if (b) {
    orbit.u0 = potential_U(*b, x0);
    orbit.has_u0 = true;
  }
  std::vector<double> x = x0;
  orbit.samples.push_back({0.0, x});
  if (duration == 0.0) return orbit;

  const std::uint64_t steps = static_cast<std::uint64_t>(std::ceil(duration / h - 1e-12));
  Rk4Scratch scratch(x.size());
  std::vector<double> prev(x.size());
  for (std::uint64_t s = 1; s <= steps; ++s) {
    double step_h = std::min(h, duration - static_cast<double>(s - 1) * h);
    prev = x;
    rk4_step(x, a, step_h, scratch);
    check_positivity(prev, x, step_h);
    orbit.max_simplex_drift = std::max(orbit.max_simplex_drift, project(x));
    double t = (s == steps) ? duration : static_cast<double>(s) * h;
    if (sample_every != 0 && (s % sample_every == 0 || s == steps))
      orbit.samples.push_back({t, x});
  }
  if (sample_every == 0) orbit.samples.push_back({duration, x});
  return orbit;
}

double estimate_period(const std::vector<double>& x0, const Matrix& a, double h,
                       double max_duration) {
  std::vector<double> v = lv_rhs(x0, a);
  double vmax = 0.0;
  std::size_t sec = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::fabs(v[i]) > vmax) { vmax = std::fabs(v[i]); sec = i; }
  if (vmax < 1e-12)
    throw Error(Errc::FixedPoint, "starting point is stationary");

  const double c = x0[sec];
  const double dir0 = v[sec] > 0.0 ? 1.0 : -1.0;

  Rk4Scratch scratch(x0.size());
  std::vector<double> x = x0;
  double t = 0.0;
  double s_prev = 0.0;  // signed section offset at t
  std::vector<double> x_prev = x;
  while (t < max_duration) {
    x_prev = x;
    rk4_step(x, a, h, scratch);
    check_positivity(x_prev, x, h);
    project(x);
    t += h;
    double s_new = x[sec] - c;
    if (s_prev * s_new < 0.0 && (s_new - s_prev) * dir0 > 0.0) {
      // Same-direction crossing: bisect within [t-h, t] on a single RK4
      // sub-step from the bracketing state.
      double lo = 0.0, hi = h;
      std::vector<double> probe(x.size());
      for (int iter = 0; iter < 200 && hi - lo > 1e-9; ++iter) {
        double mid = 0.5 * (lo + hi);
        probe = x_prev;
        rk4_step(probe, a, mid, scratch);
        double s_mid = probe[sec] - c;
        if (s_prev * s_mid < 0.0) hi = mid; else lo = mid;
      }
      return t - h + 0.5 * (lo + hi);
    }
    s_prev = s_new;
  }
  throw Error(Errc::NoReturnWithinBound,
              "no return to the section within " + std::to_string(max_duration));
}

double d_U(const std::vector<double>& x, const std::vector<double>& y,
           const std::vector<double>& b) {
  return std::fabs(potential_U(b, x) - potential_U(b, y));
}

double d_infty(const std::vector<double>& x, const std::vector<double>& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    d = std::max(d, std::fabs(x[i] - y[i]));
  return d;
}

std::vector<double> linear_approx_rps(const std::vector<double>& x0, double t,
                                      double n) {
  std::vector<double> out(3);
  for (int a = 0; a < 3; ++a)
    out[a] = x0[a] * (1.0 + (t / n) * (x0[(a + 1) % 3] - x0[(a + 2) % 3]));
  return out;
}

}  // namespace lvpop
