#include "coopsense/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "coopsense/philox.hpp"

namespace coopsense {

namespace {

constexpr std::uint32_t kNullHypothesis = 0;
constexpr std::uint32_t kSignalHypothesis = 1;

struct Counts {
  std::uint64_t false_alarms = 0;
  std::uint64_t detections = 0;
};

bool run_round(const SensingConfig& cfg, const ThresholdPair& pair, std::uint64_t seed, std::uint64_t trial,
               std::uint32_t hypothesis) {
  PhiloxStream rng(seed, trial, hypothesis);
  int votes = 0;
  for (int user = 0; user < cfg.num_users; ++user) {
    const double amplitude = hypothesis == kSignalHypothesis ? std::sqrt(rng.exponential(cfg.avg_snr)) : 0.0;
    double energy = 0.0;
    for (int i = 0; i < cfg.num_samples; ++i) {
      const double r = rng.normal() + amplitude;
      energy += r * r;
    }
    if (energy > pair.lambda) ++votes;
  }
  return votes >= pair.n;
}

Counts run_range(const SensingConfig& cfg, const ThresholdPair& pair, std::uint64_t seed, std::uint64_t begin,
                 std::uint64_t end) {
  Counts counts;
  for (std::uint64_t t = begin; t < end; ++t) {
    counts.false_alarms += run_round(cfg, pair, seed, t, kNullHypothesis);
    counts.detections += run_round(cfg, pair, seed, t, kSignalHypothesis);
  }
  return counts;
}

}  // namespace

void TrialConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
}

double binomial_stderr(double p, std::uint64_t trials) {
  if (trials == 0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(trials));
}

EmpiricalMetrics simulate(const SensingConfig& cfg, const ThresholdPair& pair, const TrialConfig& trial_cfg) {
  cfg.validate();
  trial_cfg.validate();
  if (pair.n < 1 || pair.n > cfg.num_users) throw std::invalid_argument("global threshold outside [1, N]");
  if (!(pair.lambda >= 0.0)) throw std::invalid_argument("local threshold must be nonnegative");

  const std::uint64_t trials = trial_cfg.trials;
  const auto workers = static_cast<std::uint64_t>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(trial_cfg.workers), trials));
  std::vector<Counts> partial(workers);
  if (workers == 1) {
    partial[0] = run_range(cfg, pair, trial_cfg.seed, 0, trials);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t begin = trials * w / workers;
      const std::uint64_t end = trials * (w + 1) / workers;
      threads.emplace_back([&, w, begin, end] { partial[w] = run_range(cfg, pair, trial_cfg.seed, begin, end); });
    }
  }

  Counts total;
  for (const auto& c : partial) {
    total.false_alarms += c.false_alarms;
    total.detections += c.detections;
  }
  EmpiricalMetrics m;
  m.trials = trials;
  m.q_f_hat = static_cast<double>(total.false_alarms) / static_cast<double>(trials);
  m.q_d_hat = static_cast<double>(total.detections) / static_cast<double>(trials);
  m.stderr_f = binomial_stderr(m.q_f_hat, trials);
  m.stderr_d = binomial_stderr(m.q_d_hat, trials);
  return m;
}

ValidationReport validate_against_analytic(const SensingConfig& cfg, const ThresholdPair& pair,
                                           const TrialConfig& trial_cfg) {
  ValidationReport report;
  report.analytic = evaluate_pair(cfg, pair);
  report.empirical = simulate(cfg, pair, trial_cfg);
  const auto& e = report.empirical;
  report.tolerance_f = kValidationSigmas * std::max(e.stderr_f, binomial_stderr(report.analytic.q_f, e.trials));
  report.tolerance_d = kValidationSigmas * std::max(e.stderr_d, binomial_stderr(report.analytic.q_d, e.trials));
  report.pass_f = std::abs(e.q_f_hat - report.analytic.q_f) <= report.tolerance_f;
  report.pass_d = std::abs(e.q_d_hat - report.analytic.q_d) <= report.tolerance_d;
  return report;
}

}  // namespace coopsense
