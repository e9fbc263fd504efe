#include "coopsense/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "coopsense/quadrature.hpp"
#include "numeric_util.hpp"

namespace coopsense {

namespace {

constexpr double kTailCut = 40.0;      // e^{-40} ~ 4e-18
constexpr double kQuadTol = 1e-12;
constexpr double kSaturation = 1e-15;
const Tolerance kMarcumTol{1e-17, 200};

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void SensingConfig::validate() const {
  if (num_users < 1) throw std::invalid_argument("number of users must be at least 1");
  if (num_samples < 1) throw std::invalid_argument("number of samples must be at least 1");
  if (!(avg_snr > 0.0) || !std::isfinite(avg_snr)) {
    throw std::invalid_argument("average SNR must be positive and finite");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
}

SensingConfig SensingConfig::from_db(int num_users, int num_samples, double snr_db, double alpha) {
  SensingConfig cfg{num_users, num_samples, db_to_linear(snr_db), alpha};
  cfg.validate();
  return cfg;
}

double local_pf(int M, double lambda) {
  if (!(lambda >= 0.0)) throw std::domain_error("local_pf: threshold must be nonnegative");
  return zeta(M, lambda);
}

double local_pd(int M, double lambda, double gamma) {
  if (M < 1) throw std::domain_error("local_pd: M must be at least 1");
  if (!(lambda >= 0.0)) throw std::domain_error("local_pd: threshold must be nonnegative");
  if (!(gamma >= 0.0)) throw std::domain_error("local_pd: SNR must be nonnegative");
  return marcum_q(0.5 * M, std::sqrt(M * gamma), std::sqrt(lambda), kMarcumTol);
}

double avg_pd(int M, double lambda, double avg_snr) {
  if (M < 1) throw std::domain_error("avg_pd: M must be at least 1");
  if (!(lambda >= 0.0)) throw std::domain_error("avg_pd: threshold must be nonnegative");
  if (!(avg_snr > 0.0) || !std::isfinite(avg_snr)) throw std::domain_error("avg_pd: average SNR must be positive");
  if (lambda == 0.0) return 1.0;

  const double order = 0.5 * M;
  const double b = std::sqrt(lambda);
  auto integrand = [&](double t) {
    return std::exp(-t) * marcum_q(order, std::sqrt(M * avg_snr * t), b, kMarcumTol);
  };
  // The integrand changes fastest where M*avg_snr*t is comparable to lambda;
  // grade panels geometrically toward zero around that scale.
  const double scale = std::max(lambda, 1.0) / (M * avg_snr);
  std::vector<double> edges{0.0};
  for (double t = scale / 256.0; t < kTailCut; t *= 4.0) edges.push_back(t);
  edges.push_back(kTailCut);
  const double piece_tol = kQuadTol / static_cast<double>(edges.size() - 1);
  try {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      // Q is nondecreasing in t, so once it is within kSaturation of one the
      // rest of the integral is e^{-t} to that accuracy.
      if (edges[i] > 0.0 && 1.0 - marcum_q(order, std::sqrt(M * avg_snr * edges[i]), b, kMarcumTol) <= kSaturation) {
        total += std::exp(-edges[i]);
        break;
      }
      total += integrate_adaptive(integrand, edges[i], edges[i + 1], piece_tol).value;
    }
    return detail::clamp_unit(total);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(std::string("avg_pd: ") + e.what() + " (M=" + std::to_string(M) +
                           ", lambda=" + detail::format_g(lambda) + ", avg_snr=" + detail::format_g(avg_snr) + ")");
  }
}

LocalMetrics local_metrics(int M, double lambda, double avg_snr) {
  return {local_pf(M, lambda), avg_pd(M, lambda, avg_snr)};
}

double AvgPdCache::get(int M, double lambda, double avg_snr) {
  const auto key = std::make_tuple(M, lambda, avg_snr);
  {
    std::lock_guard lock(mutex_);
    if (auto it = values_.find(key); it != values_.end()) return it->second;
  }
  const double value = avg_pd(M, lambda, avg_snr);
  std::lock_guard lock(mutex_);
  values_.emplace(key, value);
  return value;
}

std::size_t AvgPdCache::size() const {
  std::lock_guard lock(mutex_);
  return values_.size();
}

}  // namespace coopsense
