#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "coopsense/cli.hpp"
#include "coopsense/optimizer.hpp"
#include "coopsense/records.hpp"
#include "coopsense/sweep.hpp"

using namespace coopsense;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"coopsense"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string field(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + ": ");
  REQUIRE(pos != std::string::npos);
  const auto start = pos + key.size() + 2;
  return text.substr(start, text.find('\n', start) - start);
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("coopsense_test_" + name);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

}  // namespace

TEST_CASE("optimize: four users at 5 dB selects OR") {
  const auto r = run({"optimize", "--users", "4", "--samples", "12", "--snr-db", "5", "--alpha", "0.01"});
  CHECK(r.code == kExitOk);
  CHECK(field(r.out, "n_opt") == "1");
  CHECK(std::stod(field(r.out, "q_f_check")) == doctest::Approx(0.01).epsilon(1e-9));
  CHECK(std::stoi(field(r.out, "evaluations")) >= 1);
}

TEST_CASE("optimize: single user gets the local Neyman-Pearson threshold") {
  const auto r = run({"optimize", "--users", "1", "--samples", "12", "--snr-db", "0", "--alpha", "0.01"});
  CHECK(r.code == kExitOk);
  CHECK(field(r.out, "n_opt") == "1");
  CHECK(std::stod(field(r.out, "lambda_opt")) == doctest::Approx(inv_zeta(12, 0.01)).epsilon(1e-11));
}

TEST_CASE("optimize: thirty-two users at 0 dB gives the exhaustive interior optimum") {
  const auto r = run({"optimize", "--users", "32", "--samples", "12", "--snr-db", "0", "--alpha", "0.01"});
  CHECK(r.code == kExitOk);
  const int n_opt = std::stoi(field(r.out, "n_opt"));
  CHECK(n_opt > 1);
  CHECK(n_opt < 32);
  CHECK(n_opt == exhaustive_opt(SensingConfig::from_db(32, 12, 0.0, 0.01)).n_opt);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"optimize", "--users", "0"}).code == kExitUsage);
  CHECK(run({"optimize", "--users", "four"}).code == kExitUsage);
  CHECK(run({"optimize", "--alpha", "1.5"}).code == kExitUsage);
  CHECK(run({"optimize", "--samples", "-3"}).code == kExitUsage);
  CHECK(run({"optimize", "--bogus", "1"}).code == kExitUsage);
  CHECK(run({"evaluate", "--rule", "xor"}).code == kExitUsage);
  CHECK(run({"evaluate", "--users", "4", "--rule", "k:7"}).code == kExitUsage);
  CHECK(run({"sweep", "--vary", "gamma"}).code == kExitUsage);
  CHECK(run({"sweep", "--step", "0"}).code == kExitUsage);
  CHECK(run({"sweep", "--vary", "M", "--values", "6,x"}).code == kExitUsage);
  CHECK(run({"sweep", "--rules", "or,nand"}).code == kExitUsage);
  const auto trials = run({"simulate", "--trials", "0"});
  CHECK(trials.code == kExitUsage);
  CHECK(trials.err.find("trials") != std::string::npos);
  CHECK(run({"simulate", "--workers", "0"}).code == kExitUsage);
}

TEST_CASE("numerical failures exit with code 3") {
  const auto r = run({"optimize", "--users", "4", "--samples", "10000000", "--snr-db", "0", "--alpha", "0.01"});
  CHECK(r.code == kExitNumerical);
  CHECK(r.err.find("numerical failure") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  const auto r = run({"--help"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("optimize") != std::string::npos);
  const auto sub = run({"sweep", "--help"});
  CHECK(sub.code == kExitOk);
  CHECK(sub.out.find("--vary") != std::string::npos);
}

TEST_CASE("evaluate reports the rule's alpha-matched pair") {
  const auto r = run({"evaluate", "--users", "16", "--samples", "12", "--snr-db", "0", "--rule", "majority"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("rule=majority n=9 ") != std::string::npos);
  CHECK(std::stod(field(r.out, "q_f")) == doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("sweep: default SNR grid over four rules has 84 rows") {
  const auto r = run({"sweep", "--users", "16", "--samples", "12", "--alpha", "0.01", "--start", "-10", "--stop", "10",
                      "--step", "1", "--rules", "optimal,or,and,majority"});
  REQUIRE(r.code == kExitOk);
  std::istringstream in(r.out);
  const auto records = read_csv(in);
  REQUIRE(records.size() == 84);
  CHECK(r.out.substr(0, r.out.find('\n')) == kCsvHeader);

  const char* order[] = {"optimal", "or", "and", "majority"};
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].rule == order[i % 4]);
    CHECK(records[i].snr_db == -10.0 + static_cast<double>(i / 4));
    CHECK_FALSE(records[i].q_d_hat.has_value());
    CHECK_FALSE(records[i].seed.has_value());
  }

  // Round trip: recomputing the analytic columns reproduces the file.
  for (const auto& rec : records) {
    const auto again = evaluate_rule(rec.N, rec.M, rec.snr_db, rec.alpha, rec.rule);
    CHECK(again.n == rec.n);
    CHECK(std::abs(again.q_f - rec.q_f) <= 1e-9);
    CHECK(std::abs(again.q_d - rec.q_d) <= 1e-9);
  }

  // The optimal rule dominates every other rule at each grid point.
  for (std::size_t i = 0; i < records.size(); i += 4) {
    for (std::size_t j = 1; j < 4; ++j) CHECK(records[i].q_d >= records[i + j].q_d - 1e-12);
  }
}

TEST_CASE("sweep: n grid reproduces an interior maximum for 32 users") {
  const auto r = run({"sweep", "--vary", "n", "--users", "32", "--samples", "12", "--snr-db", "5"});
  REQUIRE(r.code == kExitOk);
  std::istringstream in(r.out);
  const auto records = read_csv(in);
  REQUIRE(records.size() == 32);
  std::size_t best = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].n == static_cast<int>(i) + 1);
    if (records[i].q_d > records[best].q_d) best = i;
  }
  CHECK(best > 0);
  CHECK(best < 31);
}

TEST_CASE("sweep: M grid raises detection") {
  const auto r = run({"sweep", "--vary", "M", "--values", "6,12,18,24", "--users", "16", "--snr-db", "-2", "--rules",
                      "optimal"});
  REQUIRE(r.code == kExitOk);
  std::istringstream in(r.out);
  const auto records = read_csv(in);
  REQUIRE(records.size() == 4);
  for (std::size_t i = 1; i < records.size(); ++i) CHECK(records[i].q_d > records[i - 1].q_d);
}

TEST_CASE("sweep: parallel workers keep the row order and values") {
  const auto serial = run({"sweep", "--start", "-4", "--stop", "4", "--step", "2", "--workers", "1"});
  const auto parallel = run({"sweep", "--start", "-4", "--stop", "4", "--step", "2", "--workers", "4"});
  CHECK(serial.code == kExitOk);
  CHECK(serial.out == parallel.out);
}

TEST_CASE("sweep writes to --out and reports unwritable paths") {
  const auto path = temp_path("sweep.csv");
  const auto r = run({"sweep", "--start", "0", "--stop", "2", "--rules", "or,and", "--out", path.string()});
  CHECK(r.code == kExitOk);
  std::ifstream in(path);
  const auto records = read_csv(in);
  CHECK(records.size() == 6);
  std::filesystem::remove(path);

  const std::string bad = "/nonexistent-dir/out.csv";
  const auto fail = run({"sweep", "--start", "0", "--stop", "1", "--out", bad});
  CHECK(fail.code == kExitFailure);
  CHECK(fail.err.find(bad) != std::string::npos);
}

TEST_CASE("sweep with trials fills the empirical columns") {
  const auto r = run({"sweep", "--start", "0", "--stop", "0", "--rules", "or", "--users", "4", "--samples", "4",
                      "--trials", "2000", "--seed", "5"});
  REQUIRE(r.code == kExitOk);
  std::istringstream in(r.out);
  const auto records = read_csv(in);
  REQUIRE(records.size() == 1);
  CHECK(records[0].q_d_hat.has_value());
  CHECK(records[0].stderr_f.has_value());
  CHECK(records[0].seed == 5u);
}

TEST_CASE("simulate: default trials on the -2 dB scenario passes and is reproducible") {
  const auto a = run({"simulate", "--users", "16", "--samples", "12", "--snr-db", "-2", "--alpha", "0.01", "--seed",
                      "7", "--workers", "2"});
  const auto b = run({"simulate", "--users", "16", "--samples", "12", "--snr-db", "-2", "--alpha", "0.01", "--seed",
                      "7", "--workers", "1"});
  CHECK(a.code == kExitOk);
  CHECK(a.out.find("trials=100000") != std::string::npos);
  CHECK(a.out.find("verdict: PASS") != std::string::npos);
  CHECK(a.out == b.out);
}

TEST_CASE("validate: short grid passes; corrupted-free verdict line present") {
  const auto r = run({"validate", "--users", "8", "--samples", "6", "--start", "-2", "--stop", "2", "--step", "2",
                      "--trials", "20000", "--seed", "3"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("verdict: PASS") != std::string::npos);
  std::size_t lines = 0;
  for (char c : r.out) lines += c == '\n';
  CHECK(lines == 4);
}

TEST_CASE("JSON config supplies defaults and flags override it") {
  const auto path = temp_path("config.json");
  write_file(path, R"({"users": 4, "samples": 12, "snr-db": 5, "alpha": 0.01})");
  const auto from_file = run({"optimize", "--config", path.string()});
  CHECK(from_file.code == kExitOk);
  CHECK(field(from_file.out, "n_opt") == "1");

  const auto overridden = run({"optimize", "--config", path.string(), "--users", "32"});
  CHECK(overridden.code == kExitOk);
  CHECK(std::stoi(field(overridden.out, "n_opt")) > 1);

  write_file(path, R"({"vary": "M", "values": [6, 12], "rules": ["optimal", "or"], "users": 8, "snr-db": -2})");
  const auto sweep = run({"sweep", "--config", path.string()});
  REQUIRE(sweep.code == kExitOk);
  std::istringstream in(sweep.out);
  const auto records = read_csv(in);
  REQUIRE(records.size() == 4);
  CHECK(records[0].M == 6);
  CHECK(records[1].rule == "or");
  CHECK(records[3].N == 8);

  write_file(path, R"({"users": 4, "colour": "blue"})");
  CHECK(run({"optimize", "--config", path.string()}).code == kExitUsage);
  write_file(path, R"({"trials": 10})");
  CHECK(run({"optimize", "--config", path.string()}).code == kExitUsage);
  write_file(path, R"({"users": "many"})");
  CHECK(run({"optimize", "--config", path.string()}).code == kExitUsage);
  write_file(path, "{not json");
  CHECK(run({"optimize", "--config", path.string()}).code == kExitUsage);
  std::filesystem::remove(path);
  CHECK(run({"optimize", "--config", path.string()}).code == kExitUsage);
}

TEST_CASE("CSV parsing rejects malformed input") {
  std::istringstream bad_header("a,b,c\n");
  CHECK_THROWS_AS(read_csv(bad_header), std::runtime_error);
  std::istringstream short_row(std::string(kCsvHeader) + "\n1,2,3\n");
  CHECK_THROWS_AS(read_csv(short_row), std::runtime_error);
  std::istringstream bad_number(std::string(kCsvHeader) + "\nx,16,12,0.01,or,1,2,0.01,0.5,,,,,\n");
  CHECK_THROWS_AS(read_csv(bad_number), std::runtime_error);
}

TEST_CASE("format_real uses twelve significant digits") {
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(1.0 / 3.0) == "0.333333333333");
  CHECK(format_real(-2.0) == "-2");
  CHECK(format_real(1234567.891011121) == "1234567.89101");
}
