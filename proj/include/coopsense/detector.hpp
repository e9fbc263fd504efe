// Local energy-detector performance under Rayleigh fading.
//
// A secondary user sums the squares of M real samples. Under H0 each sample
// is N(0,1); under H1 it is N(sqrt(gamma), 1) with gamma the per-sample SNR.
// The energy is therefore central chi-square with M degrees of freedom under
// H0 and noncentral chi-square with noncentrality M*gamma under H1.
#pragma once

#include <map>
#include <mutex>
#include <tuple>

#include "coopsense/specfun.hpp"

namespace coopsense {

/// Converts an SNR in dB to a linear power ratio.
double db_to_linear(double db);

/// The sensing scenario: N users with M samples each at a common average
/// SNR, and the global false-alarm target alpha.
struct SensingConfig {
  int num_users = 1;
  int num_samples = 1;
  double avg_snr = 1.0;  // linear
  double alpha = 0.01;

  /// Throws std::invalid_argument if any field is out of range.
  void validate() const;

  static SensingConfig from_db(int num_users, int num_samples, double snr_db, double alpha);
};

struct LocalMetrics {
  double p_f = 0.0;
  double p_d_avg = 0.0;
};

/// P_F = zeta_M(lambda).
double local_pf(int M, double lambda);

/// Detection probability at instantaneous per-sample SNR gamma:
/// Q_{M/2}(sqrt(M*gamma), sqrt(lambda)).
double local_pd(int M, double lambda, double gamma);

/// Detection probability averaged over an exponential SNR with mean avg_snr.
/// Integrates over t = gamma / avg_snr against e^{-t} with adaptive
/// Gauss-Legendre panels; the truncated tail beyond t = 40 is below 1e-17.
double avg_pd(int M, double lambda, double avg_snr);

LocalMetrics local_metrics(int M, double lambda, double avg_snr);

/// Memo for avg_pd keyed by (M, lambda, avg_snr). Lookups and inserts are
/// serialized, so one cache may be shared across threads.
class AvgPdCache {
 public:
  double get(int M, double lambda, double avg_snr);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::tuple<int, double, double>, double> values_;
};

}  // namespace coopsense
