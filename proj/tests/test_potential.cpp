#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lvpop/engine.hpp"
#include "lvpop/potential.hpp"
#include "lvpop/rng.hpp"

using namespace lvpop;

namespace {

ProtocolSpec random_lv_spec(Rng& rng, int k) {
  ProtocolSpec s;
  s.k = k;
  s.kind = Kind::lv;
  s.matrix.assign(k, std::vector<double>(k, 0.0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j && rng.uniform() < 0.5) s.matrix[i][j] = 0.05 + 0.95 * rng.uniform();
  for (int i = 0; i < k; ++i) {
    bool interacts = false;
    for (int j = 0; j < k; ++j)
      if (s.matrix[i][j] > 0 || s.matrix[j][i] > 0) interacts = true;
    if (!interacts) s.matrix[i][(i + 1) % k] = 0.5;
  }
  return s;
}

}  // namespace

TEST_CASE("nett matrix of the built-in protocols") {
  auto a = nett_matrix(validate(builtin("rps")));
  CHECK(a == Matrix{{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}});

  auto zero = nett_matrix(validate(builtin("life_death")));
  CHECK(zero == Matrix{{0, 0}, {0, 0}});

  ProtocolSpec dominant;
  dominant.k = 2;
  dominant.kind = Kind::lv;
  dominant.matrix = {{0, 1}, {0, 0}};
  CHECK(nett_matrix(validate(dominant)) == Matrix{{0, 1}, {-1, 0}});

  CHECK_THROWS_AS(nett_matrix(validate(builtin("counterexample"))), Error);
}

TEST_CASE("nett matrix is skew-symmetric for random LV specs") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    auto vp = validate(random_lv_spec(rng, 2 + static_cast<int>(rng.below(7))));
    auto a = nett_matrix(vp);
    for (int i = 0; i < vp.k(); ++i)
      for (int j = 0; j < vp.k(); ++j)
        CHECK(std::fabs(a[i][j] + a[j][i]) < 1e-12);
  }
}

TEST_CASE("compute_b on the worked cases") {
  SUBCASE("RPS is conserved with b = (1,1,1)") {
    // Direct multiplication oracle: (1,1,1)'A has components
    // column sums of A, all zero for the cyclic matrix.
    auto a = nett_matrix(validate(builtin("rps")));
    for (int j = 0; j < 3; ++j) {
      double col = a[0][j] + a[1][j] + a[2][j];
      CHECK(col == 0.0);
    }
    auto pv = compute_b(a);
    CHECK(pv.tag == PotentialCase::conserved);
    for (double v : pv.b) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(pv.residual < 1e-9);
  }
  SUBCASE("zero matrix is conserved with any non-negative b") {
    auto pv = compute_b(Matrix{{0, 0}, {0, 0}});
    CHECK(pv.tag == PotentialCase::conserved);
    CHECK(*std::max_element(pv.b.begin(), pv.b.end()) == doctest::Approx(1.0));
    for (double v : pv.b) CHECK(v >= 0.0);
  }
  SUBCASE("dominant 2-species protocol is increasing with b = (1,-1)") {
    // Oracle: b'A = (b_2*(-1)*-1, b_1*1) = (-b_2, b_1), so (1,-1) gives (1,1).
    Matrix a{{0, 1}, {-1, 0}};
    auto pv = compute_b(a);
    CHECK(pv.tag == PotentialCase::increasing);
    CHECK(pv.b[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(pv.b[1] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(pv.residual >= 1e-9);
  }
  SUBCASE("non-skew input is rejected") {
    CHECK_THROWS_AS(compute_b(Matrix{{0, 1}, {1, 0}}), Error);
  }
}

TEST_CASE("compute_b postconditions hold for random nett matrices up to k = 8") {
  Rng rng(22);
  for (int trial = 0; trial < 150; ++trial) {
    int k = 2 + static_cast<int>(rng.below(7));
    auto vp = validate(random_lv_spec(rng, k));
    auto a = nett_matrix(vp);
    auto pv = compute_b(a);
    double maxabs = 0.0;
    for (double v : pv.b) maxabs = std::max(maxabs, std::fabs(v));
    CHECK(maxabs == doctest::Approx(1.0).epsilon(1e-9));

    std::vector<double> h(k, 0.0);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < k; ++i) h[j] += pv.b[i] * a[i][j];
    if (pv.tag == PotentialCase::conserved) {
      for (double v : pv.b) CHECK(v >= -1e-12);
      for (double v : h) CHECK(std::fabs(v) <= 1e-9);
    } else {
      for (double v : h) CHECK(v >= 1e-9);
    }
  }
}

TEST_CASE("potential_U arithmetic") {
  std::vector<double> ones{1, 1, 1};
  CHECK(potential_U(ones, {1.0 / 3, 1.0 / 3, 1.0 / 3}) ==
        doctest::Approx(-3.295836866004329).epsilon(1e-12));
  CHECK(potential_U(ones, {0.5, 0.3, 0.2}) ==
        doctest::Approx(-3.506557897319982).epsilon(1e-12));
  // Zero-weight species are exempt from positivity.
  CHECK(potential_U({1, 0}, {1.0, 0.0}) == 0.0);
  CHECK_THROWS_AS(potential_U(ones, {0.5, 0.5, 0.0}), Error);
}

TEST_CASE("potential_U is invariant under simultaneous permutation") {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> b{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
    std::vector<double> x;
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) x.push_back(0.1 + rng.uniform()), sum += x.back();
    for (double& v : x) v /= sum;
    double base = potential_U(b, x);
    std::vector<int> perm{1, 3, 0, 2};
    std::vector<double> bp(4), xp(4);
    for (int i = 0; i < 4; ++i) {
      bp[i] = b[perm[i]];
      xp[i] = x[perm[i]];
    }
    CHECK(potential_U(bp, xp) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("expected_delta_U on worked states") {
  auto rps = validate(builtin("rps"));
  std::vector<double> b{1, 1, 1};

  SUBCASE("absorbing monochromatic states have zero drift") {
    CHECK(expected_delta_U(AggregateState::from_counts({9, 0, 0}), rps, b) == 0.0);
    CHECK(expected_delta_U(AggregateState::from_counts({0, 4, 0}), rps, b,
                           PairingMode::exact) == 0.0);
  }
  SUBCASE("RPS (2,2,2) matches the closed-form enumeration") {
    auto state = AggregateState::from_counts({2, 2, 2});
    // Three symmetric terms of (1/9) ln(3/4) under the n^2 pair weights.
    CHECK(expected_delta_U(state, rps, b, PairingMode::paper) ==
          doctest::Approx(-0.09589402415059363).epsilon(1e-12));
    CHECK(expected_delta_U(state, rps, b, PairingMode::exact) ==
          doctest::Approx(-0.1150728289807123).epsilon(1e-12));
  }
  SUBCASE("interior RPS drift is strictly negative") {
    Rng rng(24);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<std::int64_t> counts{2 + static_cast<std::int64_t>(rng.below(40)),
                                       2 + static_cast<std::int64_t>(rng.below(40)),
                                       2 + static_cast<std::int64_t>(rng.below(40))};
      CHECK(expected_delta_U(AggregateState::from_counts(counts), rps, b) < 0.0);
    }
  }
  SUBCASE("count 1 facing a live predator is rejected") {
    CHECK_THROWS_AS(
        expected_delta_U(AggregateState::from_counts({2, 1, 2}), rps, b), Error);
  }
}

namespace {

// Monte Carlo mean of single-step potential changes from a fixed state.
struct DriftSample {
  double mean, se;
};

DriftSample mc_drift(const AggregateState& base, const ValidatedProtocol& vp,
                     const std::vector<double>& b, PairingMode mode, int samples,
                     Rng& rng) {
  const double n = static_cast<double>(base.n);
  std::vector<double> x(base.counts.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = static_cast<double>(base.counts[i]) / n;
  const double u0 = potential_U(b, x);
  double sum = 0.0, sumsq = 0.0;
  for (int s = 0; s < samples; ++s) {
    AggregateState st = base;
    step_aggregate(st, vp, rng, mode);
    double du = 0.0;
    if (st.counts != base.counts) {
      for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = static_cast<double>(st.counts[i]) / n;
      du = potential_U(b, x) - u0;
    }
    sum += du;
    sumsq += du * du;
  }
  double mean = sum / samples;
  double var = sumsq / samples - mean * mean;
  return {mean, std::sqrt(var / samples)};
}

}  // namespace

TEST_CASE("expected_delta_U agrees with the Monte Carlo mean of one-step changes") {
  auto rps = validate(builtin("rps"));
  std::vector<double> b{1, 1, 1};
  const auto base = AggregateState::from_counts({2, 2, 2});
  const double predicted = expected_delta_U(base, rps, b, PairingMode::paper);
  Rng rng(25);
  auto mc = mc_drift(base, rps, b, PairingMode::paper, 1'000'000, rng);
  CHECK(std::fabs(mc.mean - predicted) < 3.0 * mc.se);
}

TEST_CASE("drift oracle matches simulation on random interior states") {
  Rng rng(26);
  for (int trial = 0; trial < 3; ++trial) {
    auto vp = validate(random_lv_spec(rng, 3 + static_cast<int>(rng.below(3))));
    auto pv = compute_b(nett_matrix(vp));
    std::vector<std::int64_t> counts(vp.k());
    for (auto& c : counts) c = 5 + static_cast<std::int64_t>(rng.below(30));
    auto base = AggregateState::from_counts(counts);
    auto mode = trial % 2 ? PairingMode::exact : PairingMode::paper;
    double predicted = expected_delta_U(base, vp, pv.b, mode);
    auto mc = mc_drift(base, vp, pv.b, mode, 1'000'000, rng);
    if (mc.se > 0.0)
      CHECK(std::fabs(mc.mean - predicted) < 4.0 * mc.se);
    else
      CHECK(mc.mean == doctest::Approx(predicted));  // frozen protocol, no moves
  }
}

TEST_CASE("star product potential") {
  auto sp = star_product_potential({100, 100, 100});
  CHECK(sp.product == 1'000'000);
  CHECK(sp.spread == 0);
  CHECK(star_product_potential({42, 0, 0}).product == 0);
  auto sp2 = star_product_potential({99, 100, 101});
  CHECK(sp2.product == 999'900);
  CHECK(sp2.spread == 2);
}
