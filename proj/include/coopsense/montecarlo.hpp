// Trial-level simulation of cooperative energy detection.
#pragma once

#include <cstdint>

#include "coopsense/detector.hpp"
#include "coopsense/fusion.hpp"

namespace coopsense {

struct TrialConfig {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  int workers = 1;

  void validate() const;
};

struct EmpiricalMetrics {
  double q_f_hat = 0.0;
  double q_d_hat = 0.0;
  double stderr_f = 0.0;
  double stderr_d = 0.0;
  std::uint64_t trials = 0;
};

/// Runs `trials` sensing rounds under each hypothesis.
///
/// Per round and user: under H1 an SNR is drawn from an exponential with mean
/// cfg.avg_snr and held for all M samples; samples are N(0,1) under H0 and
/// N(sqrt(snr), 1) under H1; the user votes when its energy exceeds
/// pair.lambda. The round is declared H1 when at least pair.n users vote.
///
/// Round t under hypothesis h draws from Philox substream (seed, t, h), so
/// the result does not depend on the worker count.
EmpiricalMetrics simulate(const SensingConfig& cfg, const ThresholdPair& pair, const TrialConfig& trial_cfg);

struct ValidationReport {
  GlobalMetrics analytic;
  EmpiricalMetrics empirical;
  double tolerance_f = 0.0;
  double tolerance_d = 0.0;
  bool pass_f = false;
  bool pass_d = false;

  bool passed() const { return pass_f && pass_d; }
};

/// Number of standard errors allowed between simulation and analysis.
inline constexpr double kValidationSigmas = 3.0;

/// Binomial standard error sqrt(p(1-p)/trials).
double binomial_stderr(double p, std::uint64_t trials);

/// Simulates and compares against the analytic chain. Each metric passes when
/// |empirical - analytic| <= 3 sigma, with sigma the larger of the empirical
/// and analytic binomial standard errors.
ValidationReport validate_against_analytic(const SensingConfig& cfg, const ThresholdPair& pair,
                                           const TrialConfig& trial_cfg);

}  // namespace coopsense
