// Tabular run records and their CSV form.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coopsense/detector.hpp"
#include "coopsense/montecarlo.hpp"

namespace coopsense {

/// One evaluated (scenario, rule) combination. The empirical fields are set
/// only when a simulation was requested.
struct RunRecord {
  double snr_db = 0.0;
  int N = 1;
  int M = 1;
  double alpha = 0.01;
  std::string rule;
  int n = 1;
  double lambda = 0.0;
  double q_f = 0.0;
  double q_d = 0.0;
  std::optional<double> q_f_hat;
  std::optional<double> q_d_hat;
  std::optional<double> stderr_f;
  std::optional<double> stderr_d;
  std::optional<std::uint64_t> seed;

  SensingConfig config() const { return SensingConfig::from_db(N, M, snr_db, alpha); }
  void attach(const EmpiricalMetrics& empirical, std::uint64_t seed_used);
};

inline constexpr std::string_view kCsvHeader =
    "snr_db,N,M,alpha,rule,n,lambda,qf,qd,qd_hat,qf_hat,stderr_d,stderr_f,seed";

/// Shortest round-trippable-enough form: 12 significant digits.
std::string format_real(double value);

void write_csv(std::ostream& out, const std::vector<RunRecord>& records);
std::string to_csv_row(const RunRecord& record);

/// Parses CSV produced by write_csv. Throws std::runtime_error on a header
/// mismatch or malformed row.
std::vector<RunRecord> read_csv(std::istream& in);

/// Writes to `path`; I/O failures are reported with the path in the message.
void write_csv_file(const std::string& path, const std::vector<RunRecord>& records);

}  // namespace coopsense
