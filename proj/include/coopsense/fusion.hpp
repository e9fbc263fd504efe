// n-out-of-N hard-decision fusion.
//
// The fusion center declares H1 when at least n of the N one-bit local votes
// are H1. With independent, identically distributed votes the global tails
// are binomial, which reduce to the regularized incomplete beta function:
//   Q = sum_{l=n}^{N} C(N,l) p^l (1-p)^{N-l} = I(p; n, N-n+1).
#pragma once

#include <string>
#include <string_view>

#include "coopsense/detector.hpp"

namespace coopsense {

/// Votes required for a global H1 decision.
class FusionRule {
 public:
  static FusionRule or_rule(int num_users);
  static FusionRule and_rule(int num_users);
  /// Strict majority: floor(N/2) + 1 (N/2 + 1 for even N).
  static FusionRule majority_rule(int num_users);
  static FusionRule k_of_n(int n, int num_users);

  /// Parses "or", "and", "majority" or "k:<n>".
  static FusionRule parse(std::string_view text, int num_users);

  int n() const { return n_; }
  int num_users() const { return num_users_; }
  const std::string& name() const { return name_; }

 private:
  FusionRule(int n, int num_users, std::string name);

  int n_;
  int num_users_;
  std::string name_;
};

struct ThresholdPair {
  int n = 1;
  double lambda = 0.0;
};

struct GlobalMetrics {
  double q_f = 0.0;
  double q_d = 0.0;
};

/// Q_f = I(p_f; n, N-n+1).
double global_qf(int n, int N, double p_f);

/// Q_d = I(p_d_avg; n, N-n+1).
double global_qd(int n, int N, double p_d_avg);

/// 1 - Q_d, computed directly from the complementary beta tail.
double global_miss(int n, int N, double p_d_avg);

/// Direct binomial tail sum, accumulated in log space.
double global_tail_direct(int n, int N, double p);

/// Local false-alarm probability that makes the n-out-of-N false alarm alpha.
double pf_for_alpha(double alpha, int n, int N);

/// Local energy threshold lambda = zeta_M^{-1}(I^{-1}(alpha; n, N-n+1)).
double lambda_for_alpha(double alpha, int n, int N, int M);

/// Global false alarm as a function of the local threshold: I(zeta_M(lambda); n, N-n+1).
double phi(double lambda, int n, int N, int M);

/// The alpha-matched threshold pair for a fixed rule.
ThresholdPair alpha_matched_pair(const SensingConfig& cfg, const FusionRule& rule);

/// Analytic Q_f and Q_d at an explicit threshold pair.
GlobalMetrics evaluate_pair(const SensingConfig& cfg, const ThresholdPair& pair);

}  // namespace coopsense
