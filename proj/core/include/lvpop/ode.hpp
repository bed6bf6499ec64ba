#ifndef LVPOP_ODE_HPP
#define LVPOP_ODE_HPP

#include <cstdint>
#include <vector>

#include "lvpop/potential.hpp"

namespace lvpop {

// Right-hand side of the mean-field dynamics dx_i/dt = x_i (A_i x).
// Components sum to zero by skew-symmetry. Time is normalized so that one
// continuous unit corresponds to n scheduler steps; the 1/n factor of the
// discrete-comparison form is deliberately dropped here and reintroduced
// only when comparing against simulation traces.
std::vector<double> lv_rhs(const std::vector<double>& x, const Matrix& a);

struct OrbitSample {
  double t;
  std::vector<double> x;
};

struct Orbit {
  std::vector<OrbitSample> samples;   // includes t = 0 and the final point
  double u0 = 0.0;                    // potential at x0 when b was supplied
  bool has_u0 = false;
  double max_simplex_drift = 0.0;     // max |sum x - 1| seen before projection
};

// Classical fixed-step RK4 with a per-step projection back onto the simplex
// (divide by the coordinate sum); the pre-projection drift is reported so
// tests can bound it. Throws StepSizeTooLarge if a positive coordinate is
// driven non-positive within one step. Coordinates starting at exactly zero
// stay zero (boundary faces are invariant).
Orbit rk4_integrate(const std::vector<double>& x0, const Matrix& a, double duration,
                    double h, const std::vector<double>* b = nullptr,
                    std::uint64_t sample_every = 1);

// Full-orbit return time for an interior non-stationary point, located as
// the first same-direction return to the hyperplane x_s = x0_s (s chosen as
// the fastest-moving coordinate at x0), refined by bisection to 1e-8.
// Throws FixedPoint at stationary points and NoReturnWithinBound if no
// return shows up within max_duration.
double estimate_period(const std::vector<double>& x0, const Matrix& a,
                       double h = 1e-3, double max_duration = 1e4);

// Distance along the potential axis: |U(x) - U(y)|.
double d_U(const std::vector<double>& x, const std::vector<double>& y,
           const std::vector<double>& b);
// Max-norm distance.
double d_infty(const std::vector<double>& x, const std::vector<double>& y);

// Short-horizon linear approximation of RPS after t scheduler steps:
//   x~_a(t) = x_a(0) (1 + (t/n)(x_{a+1}(0) - x_{a+2}(0)))
std::vector<double> linear_approx_rps(const std::vector<double>& x0, double t,
                                      double n);

}  // namespace lvpop

#endif
