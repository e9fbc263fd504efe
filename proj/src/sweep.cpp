#include "coopsense/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "coopsense/fusion.hpp"
#include "coopsense/montecarlo.hpp"
#include "coopsense/optimizer.hpp"

namespace coopsense {

namespace {

struct GridPoint {
  int N;
  int M;
  double snr_db;
  std::vector<std::string> rules;
};

std::vector<GridPoint> expand_grid(const SweepSpec& plan) {
  std::vector<GridPoint> points;
  switch (plan.variable) {
    case SweepVariable::SnrDb:
      for (double snr : plan.snr_grid()) points.push_back({plan.num_users, plan.num_samples, snr, plan.rules});
      break;
    case SweepVariable::GlobalThreshold: {
      std::vector<int> ns = plan.values;
      if (ns.empty()) {
        for (int n = 1; n <= plan.num_users; ++n) ns.push_back(n);
      }
      for (int n : ns) points.push_back({plan.num_users, plan.num_samples, plan.snr_db, {"k:" + std::to_string(n)}});
      break;
    }
    case SweepVariable::Samples:
      for (int m : plan.values) points.push_back({plan.num_users, m, plan.snr_db, plan.rules});
      break;
    case SweepVariable::Users:
      for (int users : plan.values) points.push_back({users, plan.num_samples, plan.snr_db, plan.rules});
      break;
  }
  return points;
}

}  // namespace

SweepVariable parse_sweep_variable(std::string_view text) {
  if (text == "snr_db") return SweepVariable::SnrDb;
  if (text == "n") return SweepVariable::GlobalThreshold;
  if (text == "M") return SweepVariable::Samples;
  if (text == "N") return SweepVariable::Users;
  throw std::invalid_argument("unknown sweep variable '" + std::string(text) + "' (expected snr_db, n, M or N)");
}

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::SnrDb:
      return "snr_db";
    case SweepVariable::GlobalThreshold:
      return "n";
    case SweepVariable::Samples:
      return "M";
    case SweepVariable::Users:
      return "N";
  }
  return "?";
}

void SweepSpec::validate() const {
  SensingConfig::from_db(num_users, num_samples, snr_db, alpha);
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
  switch (variable) {
    case SweepVariable::SnrDb:
      if (!(step > 0.0)) throw std::invalid_argument("sweep step must be positive");
      if (!(stop >= start)) throw std::invalid_argument("sweep stop must not precede start");
      if (rules.empty()) throw std::invalid_argument("sweep needs at least one rule");
      break;
    case SweepVariable::GlobalThreshold:
      for (int n : values) {
        if (n < 1 || n > num_users) throw std::invalid_argument("global threshold outside [1, N] in sweep");
      }
      break;
    case SweepVariable::Samples:
    case SweepVariable::Users:
      if (values.empty()) throw std::invalid_argument("integer sweep needs a nonempty value list");
      if (rules.empty()) throw std::invalid_argument("sweep needs at least one rule");
      for (int v : values) {
        if (v < 1) throw std::invalid_argument("sweep values must be positive");
      }
      break;
  }
}

std::vector<double> SweepSpec::snr_grid() const {
  std::vector<double> grid;
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  grid.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) grid.push_back(start + static_cast<double>(k) * step);
  return grid;
}

RunRecord evaluate_rule(int N, int M, double snr_db, double alpha, std::string_view rule) {
  const auto cfg = SensingConfig::from_db(N, M, snr_db, alpha);
  RunRecord r;
  r.snr_db = snr_db;
  r.N = N;
  r.M = M;
  r.alpha = alpha;
  r.rule = std::string(rule);
  ThresholdPair pair;
  if (rule == "optimal") {
    const auto opt = binary_search_opt(cfg);
    pair = {opt.n_opt, opt.lambda_opt};
  } else {
    pair = alpha_matched_pair(cfg, FusionRule::parse(rule, N));
  }
  const auto metrics = evaluate_pair(cfg, pair);
  r.n = pair.n;
  r.lambda = pair.lambda;
  r.q_f = metrics.q_f;
  r.q_d = metrics.q_d;
  return r;
}

std::vector<RunRecord> run_sweep(const SweepSpec& plan) {
  plan.validate();
  const auto points = expand_grid(plan);
  std::vector<std::vector<RunRecord>> rows(points.size());

  auto work = [&](std::size_t i) {
    const auto& p = points[i];
    for (const auto& rule : p.rules) {
      auto record = evaluate_rule(p.N, p.M, p.snr_db, plan.alpha, rule);
      if (plan.trials > 0) {
        const TrialConfig trial_cfg{plan.trials, plan.seed, 1};
        record.attach(simulate(record.config(), {record.n, record.lambda}, trial_cfg), plan.seed);
      }
      rows[i].push_back(std::move(record));
    }
  };

  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(plan.workers), points.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> threads;
      for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
          try {
            for (std::size_t i = next++; i < points.size(); i = next++) work(i);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<RunRecord> out;
  for (auto& group : rows) {
    for (auto& r : group) out.push_back(std::move(r));
  }
  if (!plan.output_path.empty()) write_csv_file(plan.output_path, out);
  return out;
}

double snr_for_detection(int N, int M, double alpha, std::string_view rule, double target, double lo_db,
                         double hi_db, double tol_db) {
  if (!(target > 0.0 && target < 1.0)) throw std::invalid_argument("target detection probability must lie in (0,1)");
  auto qd_at = [&](double snr_db) { return evaluate_rule(N, M, snr_db, alpha, rule).q_d; };
  if (qd_at(lo_db) >= target) return lo_db;
  if (qd_at(hi_db) < target) throw std::runtime_error("target detection probability not reached in SNR range");
  while (hi_db - lo_db > tol_db) {
    const double mid = 0.5 * (lo_db + hi_db);
    if (qd_at(mid) >= target) {
      hi_db = mid;
    } else {
      lo_db = mid;
    }
  }
  return 0.5 * (lo_db + hi_db);
}

}  // namespace coopsense
