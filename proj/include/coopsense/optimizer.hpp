// Joint Neyman-Pearson selection of the global vote threshold n and the
// local energy threshold lambda.
//
// For each n, lambda is pinned by the false-alarm constraint Q_f = alpha, so
// the problem collapses to minimizing F(n) = -ln Q_d(n) over n in [1, N].
// F is discretely convex, so the minimizer is the smallest n whose forward
// difference F(n+1) - F(n) is nonnegative, and that predicate can be
// bisected in O(log2 N) objective evaluations.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "coopsense/detector.hpp"
#include "coopsense/fusion.hpp"

namespace coopsense {

/// Everything computed for one candidate global threshold.
struct ObjectiveEvaluation {
  double lambda = 0.0;
  double p_d_avg = 0.0;
  double q_d = 0.0;
  double value = 0.0;  // -ln q_d, +inf when q_d underflows
};

/// Memoized F(n) for a single scenario.
class Objective {
 public:
  explicit Objective(const SensingConfig& cfg);

  /// Synthetic objective over n in [1, num_users] for exercising the search
  /// logic; evaluations report lambda = 0 and q_d = exp(-value).
  Objective(int num_users, std::function<double(int)> values);

  const SensingConfig& config() const { return cfg_; }
  bool synthetic() const { return static_cast<bool>(synthetic_); }
  const ObjectiveEvaluation& evaluate(int n);
  double operator()(int n) { return evaluate(n).value; }

  /// Distinct n evaluated so far.
  std::size_t evaluations() const { return memo_.size(); }

 private:
  SensingConfig cfg_;
  std::function<double(int)> synthetic_;
  std::map<int, ObjectiveEvaluation> memo_;
};

struct OptimizationResult {
  int n_opt = 1;
  double lambda_opt = 0.0;
  double q_d = 0.0;
  /// (n, F(n)) in the order the search first evaluated them.
  std::vector<std::pair<int, double>> objective_trace;
  bool used_fallback = false;

  std::size_t evaluations() const { return objective_trace.size(); }
};

struct ConvexityReport {
  bool convex = true;
  /// Smallest n with F(n+2) - F(n+1) < F(n+1) - F(n) - slack.
  std::optional<int> first_violation;
};

/// F(n) = -ln Q_d(n) with lambda matched to alpha.
double objective(int n, const SensingConfig& cfg);

/// Bisection on the sign of the forward difference. If the evaluated points
/// are inconsistent with convexity the search logs a warning and falls back
/// to the exhaustive scan.
OptimizationResult binary_search_opt(const SensingConfig& cfg);
OptimizationResult binary_search_opt(Objective& objective);

/// Minimizes F over every n; ties go to the smaller n.
OptimizationResult exhaustive_opt(const SensingConfig& cfg);
OptimizationResult exhaustive_opt(Objective& objective);

/// Checks that the forward differences of F are nondecreasing within slack.
ConvexityReport convexity_check(const SensingConfig& cfg, double slack = 1e-9);
ConvexityReport convexity_check(Objective& objective, double slack = 1e-9);

}  // namespace coopsense
