#include "coopsense/optimizer.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <utility>

namespace coopsense {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kConvexSlack = 1e-9;

OptimizationResult make_result(Objective& objective, int n_opt, std::vector<std::pair<int, double>> trace) {
  const auto& best = objective.evaluate(n_opt);
  OptimizationResult result;
  result.n_opt = n_opt;
  result.lambda_opt = best.lambda;
  result.q_d = best.q_d;
  result.objective_trace = std::move(trace);
  return result;
}

// Slopes between consecutive evaluated points of a convex sequence never
// decrease.
bool trace_consistent_with_convexity(const std::vector<std::pair<int, double>>& trace) {
  std::map<int, double> points(trace.begin(), trace.end());
  double prev_slope = -kInf;
  auto it = points.begin();
  if (it == points.end()) return true;
  for (auto next = std::next(it); next != points.end(); it = next, ++next) {
    if (std::isinf(it->second) || std::isinf(next->second)) continue;
    const double slope = (next->second - it->second) / (next->first - it->first);
    if (slope < prev_slope - kConvexSlack) return false;
    prev_slope = slope;
  }
  return true;
}

}  // namespace

Objective::Objective(const SensingConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

Objective::Objective(int num_users, std::function<double(int)> values)
    : cfg_{num_users, 1, 1.0, 0.5}, synthetic_(std::move(values)) {
  cfg_.validate();
  if (!synthetic_) throw std::invalid_argument("synthetic objective needs a value function");
}

const ObjectiveEvaluation& Objective::evaluate(int n) {
  if (auto it = memo_.find(n); it != memo_.end()) return it->second;
  const int N = cfg_.num_users;
  if (n < 1 || n > N) throw std::domain_error("objective: n outside [1, N]");
  ObjectiveEvaluation e;
  if (synthetic_) {
    e.value = synthetic_(n);
    e.q_d = std::exp(-e.value);
    return memo_.emplace(n, e).first->second;
  }
  e.lambda = lambda_for_alpha(cfg_.alpha, n, N, cfg_.num_samples);
  e.p_d_avg = avg_pd(cfg_.num_samples, e.lambda, cfg_.avg_snr);
  e.q_d = global_qd(n, N, e.p_d_avg);
  if (e.q_d > 0.5) {
    e.value = -std::log1p(-global_miss(n, N, e.p_d_avg));
  } else {
    e.value = e.q_d > 0.0 ? -std::log(e.q_d) : kInf;
  }
  return memo_.emplace(n, e).first->second;
}

double objective(int n, const SensingConfig& cfg) {
  Objective f(cfg);
  return f(n);
}

OptimizationResult binary_search_opt(Objective& f) {
  const int N = f.config().num_users;
  std::vector<std::pair<int, double>> trace;
  std::map<int, double> seen;
  auto F = [&](int n) {
    if (auto it = seen.find(n); it != seen.end()) return it->second;
    const double value = f(n);
    seen.emplace(n, value);
    trace.emplace_back(n, value);
    return value;
  };

  int lo = 1;
  int hi = N;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (F(mid + 1) >= F(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  // The smallest n with a nonnegative forward difference must also improve
  // on its left neighbour.
  if (N == 1) F(1);
  const bool consistent = (lo == 1 || F(lo - 1) > F(lo)) && trace_consistent_with_convexity(trace);
  if (consistent) return make_result(f, lo, std::move(trace));

  std::clog << "coopsense: objective not convex for N=" << N;
  if (!f.synthetic()) {
    std::clog << " M=" << f.config().num_samples << " snr=" << f.config().avg_snr << " alpha=" << f.config().alpha;
  }
  std::clog << "; falling back to exhaustive search\n";
  auto result = exhaustive_opt(f);
  result.used_fallback = true;
  return result;
}

OptimizationResult binary_search_opt(const SensingConfig& cfg) {
  Objective f(cfg);
  return binary_search_opt(f);
}

OptimizationResult exhaustive_opt(Objective& f) {
  const int N = f.config().num_users;
  std::vector<std::pair<int, double>> trace;
  trace.reserve(N);
  int best = 1;
  for (int n = 1; n <= N; ++n) {
    const double value = f(n);
    trace.emplace_back(n, value);
    if (value < f(best)) best = n;
  }
  return make_result(f, best, std::move(trace));
}

OptimizationResult exhaustive_opt(const SensingConfig& cfg) {
  Objective f(cfg);
  return exhaustive_opt(f);
}

ConvexityReport convexity_check(Objective& f, double slack) {
  const int N = f.config().num_users;
  ConvexityReport report;
  for (int n = 1; n + 2 <= N; ++n) {
    const double d0 = f(n + 1) - f(n);
    const double d1 = f(n + 2) - f(n + 1);
    if (std::isnan(d0) || std::isnan(d1)) continue;
    if (d1 < d0 - slack) {
      report.convex = false;
      report.first_violation = n;
      break;
    }
  }
  return report;
}

ConvexityReport convexity_check(const SensingConfig& cfg, double slack) {
  Objective f(cfg);
  return convexity_check(f, slack);
}

}  // namespace coopsense
