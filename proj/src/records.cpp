#include "coopsense/records.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coopsense {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::optional<double> optional_real(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

std::string optional_text(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

}  // namespace

void RunRecord::attach(const EmpiricalMetrics& empirical, std::uint64_t seed_used) {
  q_f_hat = empirical.q_f_hat;
  q_d_hat = empirical.q_d_hat;
  stderr_f = empirical.stderr_f;
  stderr_d = empirical.stderr_d;
  seed = seed_used;
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string to_csv_row(const RunRecord& r) {
  std::string row;
  row += format_real(r.snr_db) + ',' + std::to_string(r.N) + ',' + std::to_string(r.M) + ',' +
         format_real(r.alpha) + ',' + r.rule + ',' + std::to_string(r.n) + ',' + format_real(r.lambda) + ',' +
         format_real(r.q_f) + ',' + format_real(r.q_d) + ',' + optional_text(r.q_d_hat) + ',' +
         optional_text(r.q_f_hat) + ',' + optional_text(r.stderr_d) + ',' + optional_text(r.stderr_f) + ',' +
         (r.seed ? std::to_string(*r.seed) : std::string());
  return row;
}

void write_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) out << to_csv_row(r) << '\n';
}

std::vector<RunRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error("CSV header mismatch");
  std::vector<RunRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 14) throw std::runtime_error("CSV line " + std::to_string(line_no) + ": expected 14 fields");
    try {
      RunRecord r;
      r.snr_db = std::stod(f[0]);
      r.N = std::stoi(f[1]);
      r.M = std::stoi(f[2]);
      r.alpha = std::stod(f[3]);
      r.rule = f[4];
      r.n = std::stoi(f[5]);
      r.lambda = std::stod(f[6]);
      r.q_f = std::stod(f[7]);
      r.q_d = std::stod(f[8]);
      r.q_d_hat = optional_real(f[9]);
      r.q_f_hat = optional_real(f[10]);
      r.stderr_d = optional_real(f[11]);
      r.stderr_f = optional_real(f[12]);
      if (!f[13].empty()) r.seed = std::stoull(f[13]);
      records.push_back(std::move(r));
    } catch (const std::logic_error& e) {
      throw std::runtime_error("CSV line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

void write_csv_file(const std::string& path, const std::vector<RunRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(out, records);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace coopsense
