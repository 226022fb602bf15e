#include "aicn/theory.hpp"

#include <cmath>

#include "aicn/rng.hpp"

namespace aicn {

double eta(int t) {
  if (t < 0) throw ConfigError("eta needs t >= 0");
  return 3.0 / (t + 3.0);
}

double a_seq(int t) {
  if (t < 0) throw ConfigError("a_seq needs t >= 0");
  const double tp = t;
  return 6.0 / ((tp + 1.0) * (tp + 2.0) * (tp + 3.0));
}

double global_envelope(double l_est, double d_hat, int k) {
  if (k < 1) throw ConfigError("global_envelope needs k >= 1");
  if (!(l_est > 0.0) || !(d_hat >= 0.0)) {
    throw ConfigError("global_envelope needs l_est > 0 and d_hat >= 0");
  }
  return 9.0 * l_est * d_hat * d_hat * d_hat / (static_cast<double>(k) * k);
}

double local_neighborhood(double l_est) {
  if (!(l_est > 0.0)) throw ConfigError("local_neighborhood needs l_est > 0");
  return 8.0 / (9.0 * l_est);
}

double local_neighborhood(double l_est, double c) {
  if (!(l_est > 0.0)) throw ConfigError("local_neighborhood needs l_est > 0");
  if (!(c > 0.0) || !(c < 1.0)) throw ConfigError("local_neighborhood needs c in (0, 1)");
  const double left = (2.0 - c) * (2.0 - c) - 1.0;
  const double right = (2.0 * c + 1.0) * (2.0 * c + 1.0) - 1.0;
  return std::min(left, right) / (2.0 * l_est);
}

OneStepCases one_step_global_cases(double g_value, double c1) {
  if (!(g_value >= 0.0)) throw ConfigError("one_step_global_cases needs G >= 0");
  if (!(c1 > 0.0) || c1 > 1.0) throw ConfigError("one_step_global_cases needs c1 in (0, 1]");
  OneStepCases out;
  const double g15 = g_value * std::sqrt(g_value);
  out.large_grad = 0.5 * g15;
  out.small_grad = 0.25 * g_value * g_value;
  out.interpolated = 0.5 * std::sqrt(c1) * g15;
  // On (4 c1, 4] the quadratic case dominates the interpolated one, so the
  // best applicable bound only switches branches at G = 4.
  out.guaranteed = g_value <= 4.0 ? out.small_grad : out.large_grad;
  return out;
}

double one_step_decrease_bound(double grad_dual, double l_est, double c1) {
  if (!(l_est > 0.0)) throw ConfigError("one_step_decrease_bound needs l_est > 0");
  if (!(grad_dual >= 0.0)) throw ConfigError("one_step_decrease_bound needs grad_dual >= 0");
  const OneStepCases cases = one_step_global_cases(l_est * grad_dual, c1);
  return cases.guaranteed / (l_est * l_est);
}

PairSampler::PairSampler(Vector box_lo, Vector box_hi, std::uint64_t seed)
    : lo_(std::move(box_lo)), hi_(std::move(box_hi)), seed_(seed) {
  if (lo_.size() != hi_.size() || lo_.size() == 0) {
    throw DimensionMismatch("pair sampler box corners disagree");
  }
  for (int j = 0; j < lo_.size(); ++j) {
    if (!(lo_[j] <= hi_[j])) throw ConfigError("pair sampler box has lo > hi");
  }
}

PairSampler PairSampler::around_points(const std::vector<Vector>& points, double inflate,
                                       std::uint64_t seed) {
  if (points.empty()) throw ConfigError("pair sampler needs at least one point");
  Vector lo = points.front();
  Vector hi = points.front();
  for (const Vector& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  for (int j = 0; j < lo.size(); ++j) {
    const double pad = inflate * std::max(hi[j] - lo[j], 1e-2);
    lo[j] -= pad;
    hi[j] += pad;
  }
  return PairSampler(std::move(lo), std::move(hi), seed);
}

std::pair<Vector, Vector> PairSampler::pair(int index) const {
  if (index < 0) throw ConfigError("pair sampler index must be >= 0");
  // splitmix-style hash decorrelates per-index streams from a shared seed.
  std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  Rng rng(z ^ (z >> 31));

  const int d = dim();
  Vector x(d);
  for (int j = 0; j < d; ++j) x[j] = lo_[j] + (hi_[j] - lo_[j]) * rng.uniform();
  Vector u = rng.gaussian_vector(d);
  double n = u.norm();
  while (n == 0.0) {
    u = rng.gaussian_vector(d);
    n = u.norm();
  }
  u /= n;
  const double rung = static_cast<double>(index % kRadiusRungs) / (kRadiusRungs - 1);
  const double r = radius_lo * std::pow(radius_hi / radius_lo, rung) * box_diameter();
  return {x, x + r * u};
}

double semi_strong_ratio(const Objective& obj, const Vector& x, const Vector& y) {
  const Matrix hx = obj.hessian(x);
  const CholeskyFactor factor = cholesky(hx);
  const double dist = hessian_norm(y - x, factor);
  if (dist == 0.0) throw ConfigError("semi_strong_ratio needs distinct points");
  return metric_operator_norm(obj.hessian(y) - hx, factor) / dist;
}

namespace {

struct PairStats {
  double remainder_abs;  // |f(y) - quadratic model at x|
  double dist_cubed;     // ||y - x||_x^3
  double scale;          // max(1, |f(x)|, |f(y)|) for the roundoff floor
};

}  // namespace

ConcordanceEstimate probe_concordance(const Objective& obj,
                                      const std::vector<std::pair<Vector, Vector>>& pairs) {
  ConcordanceEstimate est;
  std::vector<PairStats> stats;
  stats.reserve(pairs.size());

  for (const auto& [x, y] : pairs) {
    const double fx = obj.value(x);
    const Vector gx = obj.gradient(x);
    const Matrix hx = obj.hessian(x);
    const CholeskyFactor factor = cholesky(hx);
    const Vector h = y - x;
    const double dist = hessian_norm(h, factor);
    if (dist == 0.0) continue;

    for (int step = 1; step <= 8; ++step) {
      const double tau = step / 8.0;
      const Matrix diff = obj.hessian(x + tau * h) - hx;
      const double ratio = metric_operator_norm(diff, factor) / (tau * dist);
      est.l_semi_hat = std::max(est.l_semi_hat, ratio);
    }

    const double fy = obj.value(y);
    const double remainder = fy - fx - gx.dot(h) - 0.5 * dist * dist;
    est.l_alt_hat =
        std::max(est.l_alt_hat, 6.0 * std::max(remainder, 0.0) / (dist * dist * dist));
    stats.push_back({std::abs(remainder), dist * dist * dist,
                     std::max({1.0, std::abs(fx), std::abs(fy)})});
    ++est.samples;
  }

  for (const PairStats& s : stats) {
    const double allowance = 1.05 * (est.l_semi_hat / 6.0) * s.dist_cubed + 1e-10 * s.scale;
    if (s.remainder_abs > allowance) ++est.sandwich_violations;
  }
  return est;
}

ConcordanceEstimate probe_concordance(const Objective& obj, const PairSampler& sampler,
                                      int n) {
  if (n < 1) throw ConfigError("probe needs at least one sample");
  std::vector<std::pair<Vector, Vector>> pairs;
  pairs.reserve(n);
  for (int i = 0; i < n; ++i) pairs.push_back(sampler.pair(i));
  return probe_concordance(obj, pairs);
}

double trajectory_diameter(const Objective& obj, const std::vector<Vector>& iterates,
                           const Vector& x_star) {
  if (iterates.empty()) throw ConfigError("trajectory_diameter needs iterates");
  double d_hat = 0.0;
  for (const Vector& x : iterates) {
    d_hat = std::max(d_hat, hessian_norm(x - x_star, obj.hessian(x)));
  }
  return d_hat;
}

double level_radius_bound(const Objective& obj, const std::vector<Vector>& iterates,
                          const Vector& x_star, double l_est) {
  if (iterates.empty()) throw ConfigError("level_radius_bound needs iterates");
  if (!(l_est > 0.0)) throw ConfigError("level_radius_bound needs l_est > 0");
  const Matrix h_star = obj.hessian(x_star);
  double r_hat = 0.0;
  for (const Vector& x : iterates) {
    const double d = hessian_norm(x - x_star, h_star);
    r_hat = std::max(r_hat, std::sqrt(d * d + l_est * d * d * d));
  }
  return r_hat;
}

double envelope_excess(const std::vector<double>& f_values, double f_star, double l_est,
                       double d_hat) {
  if (f_values.size() < 2) throw ConfigError("envelope_excess needs at least one step");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < f_values.size(); ++k) {
    const double bound = global_envelope(l_est, d_hat, static_cast<int>(k));
    worst = std::max(worst, (f_values[k] - f_star) - bound);
  }
  return worst;
}

}  // namespace aicn
