#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "aicn/linalg.hpp"
#include "aicn/objective.hpp"

namespace aicn {

// Averaging weight eta_t = 3/(t+3); eta_0 = 1 exactly.
double eta(int t);

// A_t = prod_{i<=t} weights = 6/((t+1)(t+2)(t+3)) in closed form; A_0 = 1.
double a_seq(int t);

// Global convergence envelope 9 L_est D^3 / k^2 for k >= 1.
double global_envelope(double l_est, double d_hat, int k);

// Radius of the quadratic-convergence region, ||g||*_x <= 8/(9 L_est).
double local_neighborhood(double l_est);

// General form min((2-c)^2 - 1, (2c+1)^2 - 1) / (2 L_est) for c in (0, 1);
// maximized at c = 1/3 where it equals 8/(9 L_est).
double local_neighborhood(double l_est, double c);

// Guaranteed one-step decrease of the damped method with G = L_est ||g||*_x,
// stated dimensionlessly: multiply any case value by 1/L_est^2 to get the
// decrease in f. Cases overlap; `guaranteed` is the best applicable one.
struct OneStepCases {
  double large_grad;    // G^{3/2} / 2,           valid when G >= 4
  double small_grad;    // G^2 / 4,               valid when G <= 4
  double interpolated;  // sqrt(c1) G^{3/2} / 2,  valid when G >= 4 c1
  double guaranteed;
};
OneStepCases one_step_global_cases(double g_value, double c1);

// The same guarantee in objective units for a gradient with dual norm
// `grad_dual`: f(x) - f(x_next) >= this.
double one_step_decrease_bound(double grad_dual, double l_est, double c1 = 1.0);

// Deterministic stream of point pairs (x, y = x + r u) with x uniform in a
// box, u a uniform direction and r running over a log-spaced ladder between
// radius_lo and radius_hi times the box diameter. pair(i) depends only on
// (seed, i), so prefixes of the stream are stable as the sample count grows.
class PairSampler {
 public:
  PairSampler(Vector box_lo, Vector box_hi, std::uint64_t seed);

  // Bounding box of a point cloud, each side padded by `inflate` times its
  // width (floored at 1e-2 so degenerate directions still get volume).
  static PairSampler around_points(const std::vector<Vector>& points, double inflate,
                                   std::uint64_t seed);

  std::pair<Vector, Vector> pair(int index) const;
  int dim() const { return static_cast<int>(lo_.size()); }
  double box_diameter() const { return (hi_ - lo_).norm(); }

  double radius_lo = 1e-3;  // fractions of the box diameter
  double radius_hi = 1.0;
  static constexpr int kRadiusRungs = 16;

 private:
  Vector lo_;
  Vector hi_;
  std::uint64_t seed_;
};

struct ConcordanceEstimate {
  // Largest observed ratio ||H(y) - H(x)||_{H(x)} / ||y - x||_x. For each
  // sampled pair the ratio is also taken at eight points along the segment,
  // which sharpens the estimate near the base point.
  double l_semi_hat = 0.0;
  // Largest observed one-sided cubic remainder ratio
  //   6 (f(y) - f(x) - <g(x), y-x> - 1/2 ||y-x||_x^2)_+ / ||y-x||_x^3.
  // Always <= the operator ratio of the same pair in the limit, so
  // l_alt_hat <= l_semi_hat up to sampling noise.
  double l_alt_hat = 0.0;
  int samples = 0;
  // Pairs whose quadratic-model error exceeded (l_semi_hat/6)||h||^3 by more
  // than 5% plus a roundoff floor; nonzero values indicate the two-sided
  // model sandwich failed on this sample set.
  int sandwich_violations = 0;
};

// Operator-ratio for a single pair, measured in the metric of H(x).
double semi_strong_ratio(const Objective& obj, const Vector& x, const Vector& y);

// Runs both estimators over the first n pairs of the sampler.
ConcordanceEstimate probe_concordance(const Objective& obj, const PairSampler& sampler,
                                      int n);
// Same estimators over an explicit pair list.
ConcordanceEstimate probe_concordance(const Objective& obj,
                                      const std::vector<std::pair<Vector, Vector>>& pairs);

// D_hat = max_t ||x_t - x*||_{x_t}, the trajectory radius in the moving metric.
double trajectory_diameter(const Objective& obj, const std::vector<Vector>& iterates,
                           const Vector& x_star);

// R_hat = max_t sqrt(||x_t - x*||^2_{x*} + l_est ||x_t - x*||^3_{x*}),
// an upper proxy for the level-set radius; always >= D_hat on a trajectory
// with monotone objective values.
double level_radius_bound(const Objective& obj, const std::vector<Vector>& iterates,
                          const Vector& x_star, double l_est);

// Worst signed violation of f(x_k) - f* <= 9 l_est d_hat^3 / k^2 over k >= 1;
// values <= 0 mean the envelope holds everywhere. f_values[k] = f(x_k).
double envelope_excess(const std::vector<double>& f_values, double f_star, double l_est,
                       double d_hat);

}  // namespace aicn
