#include "lvpop/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lvpop/simplex.hpp"

namespace lvpop {

Matrix nett_matrix(const ValidatedProtocol& vp) {
  if (vp.kind() != Kind::lv)
    throw Error(Errc::NotLvKind, "nett matrix is defined for LV protocols");
  const auto& p = vp.spec().matrix;
  const int k = vp.k();
  Matrix a(k, std::vector<double>(k, 0.0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) a[i][j] = p[i][j] - p[j][i];
  return a;
}

namespace {

std::vector<double> bt_a(const std::vector<double>& b, const Matrix& a) {
  const int k = static_cast<int>(a.size());
  std::vector<double> h(k, 0.0);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) h[j] += b[i] * a[i][j];
  return h;
}

}  // namespace

PotentialVector compute_b(const Matrix& a) {
  const int k = static_cast<int>(a.size());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (std::fabs(a[i][j] + a[j][i]) > 1e-12)
        throw Error(Errc::NumericallyIllConditioned, "matrix is not skew-symmetric");

  // Case (i): max sum b_i  s.t.  b'A = 0 (two inequalities per column),
  // 0 <= b_i <= 1.
  {
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (int j = 0; j < k; ++j) {
      std::vector<double> pos(k), neg(k);
      for (int i = 0; i < k; ++i) {
        pos[i] = a[i][j];
        neg[i] = -a[i][j];
      }
      rows.push_back(pos); rhs.push_back(0.0);
      rows.push_back(neg); rhs.push_back(0.0);
    }
    for (int i = 0; i < k; ++i) {
      std::vector<double> cap(k, 0.0);
      cap[i] = 1.0;
      rows.push_back(cap); rhs.push_back(1.0);
    }
    auto lp = detail::solve_lp(rows, rhs, std::vector<double>(k, 1.0));
    if (lp.status != detail::LpResult::Status::optimal)
      throw Error(Errc::LpInfeasible, "kernel LP did not solve");
    if (lp.objective > kCaseThreshold) {
      PotentialVector pv;
      pv.b = lp.x;
      double maxb = *std::max_element(pv.b.begin(), pv.b.end());
      for (double& v : pv.b) v /= maxb;
      pv.tag = PotentialCase::conserved;
      double res = 0.0;
      for (double h : bt_a(pv.b, a)) res = std::max(res, std::fabs(h));
      pv.residual = res;
      if (pv.residual > kCaseThreshold)
        throw Error(Errc::NumericallyIllConditioned, "case (i) residual too large");
      return pv;
    }
  }

  // Case (ii): b = u - v with u, v >= 0, (b'A)_j >= 1 for all j, minimizing
  // the l1 norm of (u, v). Rewritten for the solver as -(b'A)_j <= -1.
  {
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (int j = 0; j < k; ++j) {
      std::vector<double> row(2 * k, 0.0);
      for (int i = 0; i < k; ++i) {
        row[i] = -a[i][j];
        row[k + i] = a[i][j];
      }
      rows.push_back(std::move(row));
      rhs.push_back(-1.0);
    }
    auto lp = detail::solve_lp(rows, rhs, std::vector<double>(2 * k, -1.0));
    if (lp.status != detail::LpResult::Status::optimal)
      throw Error(Errc::LpInfeasible,
                  "case (ii) LP infeasible for a skew-symmetric matrix");
    PotentialVector pv;
    pv.b.resize(k);
    for (int i = 0; i < k; ++i) pv.b[i] = lp.x[i] - lp.x[k + i];
    double maxb = 0.0;
    for (double v : pv.b) maxb = std::max(maxb, std::fabs(v));
    if (maxb <= 0.0) throw Error(Errc::LpInfeasible, "case (ii) LP returned zero vector");
    for (double& v : pv.b) v /= maxb;
    pv.tag = PotentialCase::increasing;
    auto h = bt_a(pv.b, a);
    pv.residual = *std::min_element(h.begin(), h.end());
    if (pv.residual < kCaseThreshold)
      throw Error(Errc::NumericallyIllConditioned, "case (ii) residual too small");
    return pv;
  }
}

double potential_U(const std::vector<double>& b, const std::vector<double>& x) {
  double u = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] == 0.0) continue;
    if (!(x[i] > 0.0))
      throw Error(Errc::ZeroPopulation,
                  "x[" + std::to_string(i) + "] must be positive when b != 0");
    u += b[i] * std::log(x[i]);
  }
  return u;
}

double expected_delta_U(const AggregateState& state, const ValidatedProtocol& vp,
                        const std::vector<double>& b, PairingMode mode) {
  if (vp.kind() != Kind::lv)
    throw Error(Errc::NotLvKind, "drift oracle is defined for LV protocols");
  const int k = vp.k();
  const auto& p = vp.spec().matrix;
  const double n = static_cast<double>(state.n);
  if (state.n <= 0) throw Error(Errc::EmptyPopulation);

  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    const double ni = static_cast<double>(state.counts[i]);
    if (ni <= 0.0) continue;
    for (int j = 0; j < k; ++j) {
      if (j == i || p[i][j] <= 0.0) continue;
      const double nj = static_cast<double>(state.counts[j]);
      if (nj <= 0.0) continue;
      double w = (mode == PairingMode::paper) ? ni * nj / (n * n)
                                              : ni * nj / (n * (n - 1.0));
      double term = 0.0;
      if (b[i] != 0.0) term += b[i] * (std::log(ni + 1.0) - std::log(ni));
      if (b[j] != 0.0) {
        if (nj <= 1.0)
          throw Error(Errc::ZeroPopulation,
                      "species " + vp.names()[j] + " at count 1 with a live predator");
        term += b[j] * (std::log(nj - 1.0) - std::log(nj));
      }
      sum += w * p[i][j] * term;
    }
  }
  return sum;
}

StarPotential star_product_potential(const std::vector<std::int64_t>& leaf_counts) {
  if (leaf_counts.size() != 3)
    throw Error(Errc::BadConfig, "star product potential needs 3 species");
  StarPotential sp;
  sp.product = static_cast<std::uint64_t>(leaf_counts[0]) *
               static_cast<std::uint64_t>(leaf_counts[1]) *
               static_cast<std::uint64_t>(leaf_counts[2]);
  auto [mn, mx] = std::minmax_element(leaf_counts.begin(), leaf_counts.end());
  sp.spread = *mx - *mn;
  return sp;
}

}  // namespace lvpop
