#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "aicn/objective.hpp"
#include "aicn/rng.hpp"
#include "aicn/theory.hpp"
#include "support.hpp"

using aicn::Matrix;
using aicn::PairSampler;
using aicn::Vector;

TEST_CASE("averaging weights and their cumulative products") {
  CHECK(aicn::eta(0) == 1.0);
  CHECK(aicn::a_seq(0) == 1.0);
  CHECK(aicn::eta(1) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(aicn::eta(3) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(aicn::a_seq(1) == doctest::Approx(0.25).epsilon(1e-15));

  // Closed form vs the defining recurrence A_t = A_{t-1} (1 - eta_t).
  double running = 1.0;
  for (int t = 1; t <= 1000; ++t) {
    running *= 1.0 - aicn::eta(t);
    CHECK(std::abs(aicn::a_seq(t) - running) <= 1e-12 * running);
  }
  CHECK_THROWS_AS(aicn::eta(-1), aicn::ConfigError);
  CHECK_THROWS_AS(aicn::a_seq(-1), aicn::ConfigError);
}

TEST_CASE("weighted stepsize sums obey the cubic tail bound") {
  // sum_{t<=k} (A_k / A_t) eta_t^3 <= 27 (k+1) / (k+3)^3, with equality at
  // k = 0 where both sides are 1.
  for (int k = 0; k <= 1000; ++k) {
    const double a_k = aicn::a_seq(k);
    double sum = 0.0;
    for (int t = 0; t <= k; ++t) {
      const double e = aicn::eta(t);
      sum += a_k / aicn::a_seq(t) * e * e * e;
    }
    const double bound = 27.0 * (k + 1) / std::pow(k + 3.0, 3);
    CHECK(sum <= bound * (1.0 + 1e-12));
    if (k == 0) CHECK(std::abs(sum - bound) <= 1e-15);
  }
}

TEST_CASE("global envelope formula and shape") {
  CHECK(aicn::global_envelope(2.0, 3.0, 1) == doctest::Approx(9.0 * 2.0 * 27.0).epsilon(1e-15));
  CHECK(aicn::global_envelope(1.0, 1.0, 3) == doctest::Approx(1.0).epsilon(1e-15));
  for (int k = 1; k < 50; ++k) {
    CHECK(aicn::global_envelope(1.0, 1.0, k + 1) < aicn::global_envelope(1.0, 1.0, k));
  }
  CHECK_THROWS_AS(aicn::global_envelope(1.0, 1.0, 0), aicn::ConfigError);
  CHECK_THROWS_AS(aicn::global_envelope(0.0, 1.0, 1), aicn::ConfigError);
}

TEST_CASE("quadratic-phase radius, general and optimized form") {
  CHECK(aicn::local_neighborhood(3.0) == doctest::Approx(8.0 / 27.0).epsilon(1e-15));
  // The one-parameter family evaluated at its maximizer c = 1/3 recovers it.
  CHECK(aicn::local_neighborhood(3.0, 1.0 / 3.0) ==
        doctest::Approx(aicn::local_neighborhood(3.0)).epsilon(1e-15));
  for (double c = 0.02; c < 1.0; c += 0.02) {
    const double lhs = std::pow(2.0 - c, 2) - 1.0;
    const double rhs = std::pow(2.0 * c + 1.0, 2) - 1.0;
    CHECK(aicn::local_neighborhood(2.0, c) ==
          doctest::Approx(std::min(lhs, rhs) / 4.0).epsilon(1e-14));
    CHECK(aicn::local_neighborhood(2.0, c) <= aicn::local_neighborhood(2.0) * (1 + 1e-14));
  }
  CHECK_THROWS_AS(aicn::local_neighborhood(1.0, 0.0), aicn::ConfigError);
  CHECK_THROWS_AS(aicn::local_neighborhood(1.0, 1.0), aicn::ConfigError);
}

TEST_CASE("one-step decrease cases agree at boundaries and compose") {
  // At G = 4 the small- and large-gradient cases meet at the value 4.
  const auto at4 = aicn::one_step_global_cases(4.0, 1.0);
  CHECK(at4.small_grad == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(at4.large_grad == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(at4.guaranteed == doctest::Approx(4.0).epsilon(1e-15));

  for (double c1 : {0.1, 0.5, 1.0}) {
    for (double g = 0.0; g <= 20.0; g += 0.25) {
      const auto cases = aicn::one_step_global_cases(g, c1);
      CHECK(cases.small_grad == doctest::Approx(g * g / 4.0).epsilon(1e-14));
      CHECK(cases.large_grad == doctest::Approx(std::pow(g, 1.5) / 2.0).epsilon(1e-14));
      CHECK(cases.interpolated ==
            doctest::Approx(std::sqrt(c1) * std::pow(g, 1.5) / 2.0).epsilon(1e-14));
      // The guarantee is the best case whose validity region contains G.
      double best = 0.0;
      if (g <= 4.0) best = std::max(best, cases.small_grad);
      if (g >= 4.0) best = std::max(best, cases.large_grad);
      if (g >= 4.0 * c1) best = std::max(best, cases.interpolated);
      CHECK(cases.guaranteed == doctest::Approx(best).epsilon(1e-14));
    }
  }

  // Objective-unit version divides by L^2.
  const double gd = 0.7;
  const double l = 2.0;
  CHECK(aicn::one_step_decrease_bound(gd, l) ==
        doctest::Approx(aicn::one_step_global_cases(l * gd, 1.0).guaranteed / (l * l))
            .epsilon(1e-14));
  CHECK_THROWS_AS(aicn::one_step_global_cases(-1.0, 1.0), aicn::ConfigError);
  CHECK_THROWS_AS(aicn::one_step_global_cases(1.0, 0.0), aicn::ConfigError);
}

TEST_CASE("pair sampler is deterministic with stable prefixes") {
  const Vector lo = Vector::Constant(3, -1.0);
  const Vector hi = Vector::Constant(3, 2.0);
  const PairSampler a(lo, hi, 99);
  const PairSampler b(lo, hi, 99);
  const PairSampler other(lo, hi, 100);

  bool any_differs = false;
  for (int i = 0; i < 32; ++i) {
    const auto [x1, y1] = a.pair(i);
    const auto [x2, y2] = b.pair(i);
    CHECK((x1 - x2).norm() == 0.0);
    CHECK((y1 - y2).norm() == 0.0);
    const auto [x3, y3] = other.pair(i);
    any_differs = any_differs || (x1 - x3).norm() > 0.0 || (y1 - y3).norm() > 0.0;

    for (int j = 0; j < 3; ++j) {
      CHECK(x1[j] >= lo[j]);
      CHECK(x1[j] <= hi[j]);
    }
    const double dist = (y1 - x1).norm();
    CHECK(dist >= a.radius_lo * a.box_diameter() * (1.0 - 1e-12));
    CHECK(dist <= a.radius_hi * a.box_diameter() * (1.0 + 1e-12));
  }
  CHECK(any_differs);

  // The radius ladder actually spans scales rather than collapsing to one.
  double dmin = 1e300;
  double dmax = 0.0;
  for (int i = 0; i < 64; ++i) {
    const auto [x, y] = a.pair(i);
    dmin = std::min(dmin, (y - x).norm());
    dmax = std::max(dmax, (y - x).norm());
  }
  CHECK(dmax / dmin >= 50.0);
  CHECK_THROWS_AS(a.pair(-1), aicn::ConfigError);
}

TEST_CASE("bounding-box construction around a point cloud") {
  std::vector<Vector> pts;
  Vector p(2);
  p << 0.0, 1.0;
  pts.push_back(p);
  p << 4.0, 1.0;
  pts.push_back(p);
  const PairSampler s = PairSampler::around_points(pts, 0.5, 7);
  // Width 4 in the first coordinate inflated by 0.5 per side, and the flat
  // second coordinate gets the 1e-2 floor.
  CHECK(s.box_diameter() ==
        doctest::Approx(std::sqrt(8.0 * 8.0 + 0.01 * 0.01)).epsilon(1e-12));
  CHECK_THROWS_AS(PairSampler::around_points({}, 0.5, 7), aicn::ConfigError);
}

TEST_CASE("constant Hessian probes to zero") {
  aicn::Rng rng(61);
  const aicn::QuadraticObjective obj(testsupport::random_spd(3, 25.0, rng),
                                     rng.gaussian_vector(3));
  const PairSampler sampler(Vector::Constant(3, -2.0), Vector::Constant(3, 2.0), 5);
  const auto est = aicn::probe_concordance(obj, sampler, 64);
  CHECK(est.samples == 64);
  CHECK(est.l_semi_hat <= 1e-10);
  // The cubic remainder is pure roundoff here, but it gets divided by the
  // cube of the shortest sampled distance, so the floor is higher.
  CHECK(est.l_alt_hat <= 1e-6);
  CHECK(est.sandwich_violations == 0);
}

TEST_CASE("operator ratio matches the one-dimensional closed form") {
  // In one dimension with f = |x|^3 - x + (mu/2) x^2 the Hessian is
  // 6|x| + mu, so for 0 < x < y the ratio is 6 / (6x + mu)^(3/2).
  const double mu = 1e-3;
  const aicn::LowerBoundObjective obj(1, mu);
  const Vector x = Vector::Constant(1, 0.5);
  const Vector y = Vector::Constant(1, 0.8);
  const double want = 6.0 / std::pow(6.0 * 0.5 + mu, 1.5);
  CHECK(aicn::semi_strong_ratio(obj, x, y) == doctest::Approx(want).epsilon(1e-12));
  CHECK_THROWS_AS(aicn::semi_strong_ratio(obj, x, x), aicn::ConfigError);
}

TEST_CASE("probe estimates are invariant under coordinate substitution") {
  aicn::Rng rng(71);
  const auto inner = testsupport::ExpQuadObjective::random(3, 3, 10.0, rng);
  Matrix a = testsupport::random_orthogonal(3, rng);
  a.col(0) *= 4.0;
  a.col(2) *= 0.2;
  const aicn::LinearChangeOfVariables phi(inner, a);

  std::vector<std::pair<Vector, Vector>> pairs_y;
  std::vector<std::pair<Vector, Vector>> pairs_x;
  const PairSampler sampler(Vector::Constant(3, -1.0), Vector::Constant(3, 1.0), 11);
  for (int i = 0; i < 24; ++i) {
    const auto [y1, y2] = sampler.pair(i);
    pairs_y.emplace_back(y1, y2);
    pairs_x.emplace_back(a * y1, a * y2);
    const double r_sub = aicn::semi_strong_ratio(phi, y1, y2);
    const double r_inner = aicn::semi_strong_ratio(inner, a * y1, a * y2);
    CHECK(r_sub == doctest::Approx(r_inner).epsilon(1e-8));
  }
  const auto est_y = aicn::probe_concordance(phi, pairs_y);
  const auto est_x = aicn::probe_concordance(inner, pairs_x);
  CHECK(est_y.l_semi_hat == doctest::Approx(est_x.l_semi_hat).epsilon(1e-8));
  CHECK(est_y.l_alt_hat == doctest::Approx(est_x.l_alt_hat).epsilon(1e-8));
}

TEST_CASE("probe internal consistency on a smooth objective") {
  aicn::Rng rng(81);
  const auto obj = testsupport::ExpQuadObjective::random(4, 3, 20.0, rng);
  const PairSampler sampler(Vector::Constant(4, -1.5), Vector::Constant(4, 1.5), 13);
  const auto est = aicn::probe_concordance(obj, sampler, 128);
  CHECK(est.samples == 128);
  CHECK(est.l_semi_hat > 0.0);
  CHECK(est.l_alt_hat > 0.0);
  CHECK(est.l_alt_hat <= est.l_semi_hat * (1.0 + 1e-9));
  CHECK(est.sandwich_violations == 0);

  // More samples can only push the max-estimates up.
  const auto est_small = aicn::probe_concordance(obj, sampler, 32);
  CHECK(est_small.l_semi_hat <= est.l_semi_hat);
  CHECK(est_small.l_alt_hat <= est.l_alt_hat);
}

TEST_CASE("trajectory radius and level-set proxy on a constant metric") {
  aicn::Rng rng(91);
  const Matrix h0 = testsupport::random_spd(3, 9.0, rng);
  const aicn::QuadraticObjective obj(h0, Vector::Zero(3));
  const Vector x_star = Vector::Zero(3);

  std::vector<Vector> iterates;
  double want_d = 0.0;
  for (int t = 0; t < 6; ++t) {
    const Vector x = rng.gaussian_vector(3);
    iterates.push_back(x);
    want_d = std::max(want_d, std::sqrt(x.dot(h0 * x)));
  }
  const double d_hat = aicn::trajectory_diameter(obj, iterates, x_star);
  CHECK(d_hat == doctest::Approx(want_d).epsilon(1e-12));

  const double l = 2.0;
  double want_r = 0.0;
  for (const Vector& x : iterates) {
    const double n = std::sqrt(x.dot(h0 * x));
    want_r = std::max(want_r, std::sqrt(n * n + l * n * n * n));
  }
  const double r_hat = aicn::level_radius_bound(obj, iterates, x_star, l);
  CHECK(r_hat == doctest::Approx(want_r).epsilon(1e-12));
  CHECK(r_hat >= d_hat);
}

TEST_CASE("envelope excess finds the worst iteration") {
  const double l = 2.0;
  const double d = 1.5;
  std::vector<double> exact(8);
  exact[0] = 1e6;  // ignored, the bound starts at k = 1
  for (int k = 1; k < 8; ++k) exact[k] = aicn::global_envelope(l, d, k);
  CHECK(std::abs(aicn::envelope_excess(exact, 0.0, l, d)) <= 1e-12);

  std::vector<double> above = exact;
  above[3] += 0.5;
  CHECK(aicn::envelope_excess(above, 0.0, l, d) == doctest::Approx(0.5).epsilon(1e-12));

  std::vector<double> below(5);
  below[0] = 100.0;
  for (int k = 1; k < 5; ++k) below[k] = 0.5 * aicn::global_envelope(l, d, k);
  CHECK(aicn::envelope_excess(below, 0.0, l, d) < 0.0);

  // Shifting f and f* together leaves the excess unchanged.
  std::vector<double> shifted = above;
  for (double& v : shifted) v += 3.25;
  CHECK(aicn::envelope_excess(shifted, 3.25, l, d) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(aicn::envelope_excess({1.0}, 0.0, l, d), aicn::ConfigError);
}

TEST_CASE("stepsize inequalities used by the one-step analysis") {
  // 1 + c >= sqrt(1 + 2c) and sqrt(c)/sqrt(2) + 1/sqrt(2) <= sqrt(c + 1)
  // <= sqrt(c) + 1 across many scales.
  for (double c = 0.0; c <= 1e6; c = c == 0.0 ? 1e-9 : c * 3.7) {
    CHECK(1.0 + c >= std::sqrt(1.0 + 2.0 * c));
    const double s = std::sqrt(c + 1.0);
    CHECK((std::sqrt(c) + 1.0) / std::sqrt(2.0) <= s * (1.0 + 1e-15));
    CHECK(s <= std::sqrt(c) + 1.0);
  }
}
