#include "coopsense/fusion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "coopsense/specfun.hpp"
#include "numeric_util.hpp"

namespace coopsense {

namespace {

void check_counts(int n, int N) {
  if (N < 1) throw std::domain_error("number of users must be at least 1");
  if (n < 1 || n > N) {
    throw std::domain_error("global threshold " + std::to_string(n) + " outside [1, " + std::to_string(N) + "]");
  }
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error(std::string(what) + " must lie in [0,1]");
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0,1)");
}

}  // namespace

FusionRule::FusionRule(int n, int num_users, std::string name)
    : n_(n), num_users_(num_users), name_(std::move(name)) {
  check_counts(n_, num_users_);
}

FusionRule FusionRule::or_rule(int num_users) { return {1, num_users, "or"}; }

FusionRule FusionRule::and_rule(int num_users) { return {num_users, num_users, "and"}; }

FusionRule FusionRule::majority_rule(int num_users) { return {num_users / 2 + 1, num_users, "majority"}; }

FusionRule FusionRule::k_of_n(int n, int num_users) { return {n, num_users, "k:" + std::to_string(n)}; }

FusionRule FusionRule::parse(std::string_view text, int num_users) {
  if (text == "or") return or_rule(num_users);
  if (text == "and") return and_rule(num_users);
  if (text == "majority") return majority_rule(num_users);
  if (text.starts_with("k:")) {
    const auto digits = text.substr(2);
    int n = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty()) return k_of_n(n, num_users);
  }
  throw std::invalid_argument("unknown fusion rule '" + std::string(text) + "'");
}

double global_qf(int n, int N, double p_f) {
  check_counts(n, N);
  check_probability(p_f, "local false-alarm probability");
  return reg_inc_beta(p_f, n, N - n + 1);
}

double global_qd(int n, int N, double p_d_avg) {
  check_counts(n, N);
  check_probability(p_d_avg, "local detection probability");
  return reg_inc_beta(p_d_avg, n, N - n + 1);
}

double global_miss(int n, int N, double p_d_avg) {
  check_counts(n, N);
  check_probability(p_d_avg, "local detection probability");
  return reg_inc_beta_complement(p_d_avg, n, N - n + 1);
}

double global_tail_direct(int n, int N, double p) {
  check_counts(n, N);
  check_probability(p, "probability");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_n_fact = detail::log_gamma(N + 1.0);
  double max_term = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  terms.reserve(N - n + 1);
  for (int l = n; l <= N; ++l) {
    const double t =
        log_n_fact - detail::log_gamma(l + 1.0) - detail::log_gamma(N - l + 1.0) + l * log_p + (N - l) * log_q;
    terms.push_back(t);
    max_term = std::max(max_term, t);
  }
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - max_term);
  return detail::clamp_unit(std::exp(max_term) * sum);
}

double pf_for_alpha(double alpha, int n, int N) {
  check_alpha(alpha);
  check_counts(n, N);
  return inv_reg_inc_beta(alpha, n, N - n + 1);
}

double lambda_for_alpha(double alpha, int n, int N, int M) {
  return inv_zeta(M, pf_for_alpha(alpha, n, N));
}

double phi(double lambda, int n, int N, int M) {
  if (!(lambda >= 0.0)) throw std::domain_error("phi: threshold must be nonnegative");
  check_counts(n, N);
  if (std::isinf(lambda)) return 0.0;
  return reg_inc_beta(zeta(M, lambda), n, N - n + 1);
}

ThresholdPair alpha_matched_pair(const SensingConfig& cfg, const FusionRule& rule) {
  cfg.validate();
  if (rule.num_users() != cfg.num_users) throw std::invalid_argument("rule built for a different number of users");
  return {rule.n(), lambda_for_alpha(cfg.alpha, rule.n(), cfg.num_users, cfg.num_samples)};
}

GlobalMetrics evaluate_pair(const SensingConfig& cfg, const ThresholdPair& pair) {
  cfg.validate();
  const auto local = local_metrics(cfg.num_samples, pair.lambda, cfg.avg_snr);
  return {global_qf(pair.n, cfg.num_users, local.p_f), global_qd(pair.n, cfg.num_users, local.p_d_avg)};
}

}  // namespace coopsense
