#include "lvpop/simplex.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace lvpop::detail {

namespace {

constexpr double kEps = 1e-9;

// Tableau simplex in the style of the KACTL LPSolver: variables are column
// labels in N, basics are row labels in B, D is the dense tableau with the
// objective row at m and the artificial-phase row at m+1.
class Tableau {
 public:
  Tableau(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
          const std::vector<double>& c)
      : m_(static_cast<int>(b.size())), n_(static_cast<int>(c.size())),
        col_(n_ + 1), row_(m_),
        d_(m_ + 2, std::vector<double>(n_ + 2, 0.0)) {
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) d_[i][j] = a[i][j];
      row_[i] = n_ + i;
      d_[i][n_] = -1;
      d_[i][n_ + 1] = b[i];
    }
    for (int j = 0; j < n_; ++j) {
      col_[j] = j;
      d_[m_][j] = -c[j];
    }
    col_[n_] = -1;
    d_[m_ + 1][n_] = 1;
  }

  LpResult run() {
    LpResult res;
    int r = 0;
    for (int i = 1; i < m_; ++i)
      if (d_[i][n_ + 1] < d_[r][n_ + 1]) r = i;
    if (m_ > 0 && d_[r][n_ + 1] < -kEps) {
      pivot(r, n_);
      if (!simplex(2) || d_[m_ + 1][n_ + 1] < -kEps) {
        res.status = LpResult::Status::infeasible;
        return res;
      }
      for (int i = 0; i < m_; ++i)
        if (row_[i] == -1) {
          int s = 0;
          for (int j = 1; j <= n_; ++j)
            if (ltj(d_[i], s, j)) s = j;
          pivot(i, s);
        }
    }
    bool ok = simplex(1);
    res.x.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (row_[i] >= 0 && row_[i] < n_) res.x[row_[i]] = d_[i][n_ + 1];
    res.objective = d_[m_][n_ + 1];
    res.status = ok ? LpResult::Status::optimal : LpResult::Status::unbounded;
    return res;
  }

 private:
  bool ltj(const std::vector<double>& row, int s, int j) const {
    return s == -1 ||
           std::make_pair(row[j], col_[j]) < std::make_pair(row[s], col_[s]);
  }

  void pivot(int r, int s) {
    std::vector<double>& a = d_[r];
    double inv = 1.0 / a[s];
    for (int i = 0; i < m_ + 2; ++i)
      if (i != r && std::fabs(d_[i][s]) > kEps) {
        double inv2 = d_[i][s] * inv;
        for (int j = 0; j < n_ + 2; ++j) d_[i][j] -= a[j] * inv2;
        d_[i][s] = a[s] * inv2;
      }
    for (int j = 0; j < n_ + 2; ++j)
      if (j != s) d_[r][j] *= inv;
    for (int i = 0; i < m_ + 2; ++i)
      if (i != r) d_[i][s] *= -inv;
    d_[r][s] = inv;
    std::swap(row_[r], col_[s]);
  }

  bool simplex(int phase) {
    int x = m_ + phase - 1;
    for (;;) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (col_[j] == -phase) continue;  // phase 1 locks out the artificial column
        if (s == -1 || ltj(d_[x], s, j)) s = j;
      }
      if (d_[x][s] >= -kEps) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (d_[i][s] <= kEps) continue;
        if (r == -1 ||
            std::make_pair(d_[i][n_ + 1] / d_[i][s], row_[i]) <
                std::make_pair(d_[r][n_ + 1] / d_[r][s], row_[r]))
          r = i;
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  int m_, n_;
  std::vector<int> col_, row_;
  std::vector<std::vector<double>> d_;
};

}  // namespace

LpResult solve_lp(const std::vector<std::vector<double>>& a,
                  const std::vector<double>& b, const std::vector<double>& c) {
  return Tableau(a, b, c).run();
}

}  // namespace lvpop::detail
