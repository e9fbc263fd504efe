// Parameter sweeps over scenarios and fusion rules.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "coopsense/records.hpp"

namespace coopsense {

enum class SweepVariable { SnrDb, GlobalThreshold, Samples, Users };

SweepVariable parse_sweep_variable(std::string_view text);
std::string_view to_string(SweepVariable v);

struct SweepSpec {
  SweepVariable variable = SweepVariable::SnrDb;
  // Real-valued grid (snr_db): start, start + step, ..., up to stop inclusive.
  double start = -10.0;
  double stop = 10.0;
  double step = 1.0;
  // Integer grid (n, M, N). An empty list for n means 1..N.
  std::vector<int> values;
  std::vector<std::string> rules{"optimal", "or", "and", "majority"};

  int num_users = 16;
  int num_samples = 12;
  double snr_db = 0.0;
  double alpha = 0.01;

  std::uint64_t trials = 0;  // 0: analytic columns only
  std::uint64_t seed = 1;
  int workers = 1;
  std::string output_path;

  void validate() const;
  std::vector<double> snr_grid() const;
};

/// Analytic record for one rule: "optimal" runs the threshold optimizer,
/// anything else is parsed as a FusionRule with an alpha-matched lambda.
RunRecord evaluate_rule(int N, int M, double snr_db, double alpha, std::string_view rule);

/// One record per (grid point, rule), grid-major and rule-minor. A sweep over
/// n uses the single rule "k:<n>" at each grid point. Grid points run on up to
/// plan.workers threads; the row order is fixed regardless.
std::vector<RunRecord> run_sweep(const SweepSpec& plan);

/// Smallest SNR (dB) in [lo_db, hi_db] at which `rule` reaches q_d = target,
/// found by bisection to within tol_db. Q_d increases with SNR for every rule.
double snr_for_detection(int N, int M, double alpha, std::string_view rule, double target, double lo_db = -30.0,
                         double hi_db = 30.0, double tol_db = 1e-4);

}  // namespace coopsense
