#include "coopsense/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "numeric_util.hpp"

namespace coopsense {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

// Continued fractions and series need O(sqrt(shape)) terms, so the cap
// grows with the shape parameters.
int iteration_budget(const Tolerance& tol, double shape) {
  return tol.max_iter * (1 + static_cast<int>(std::sqrt(std::max(shape, 0.0)) / 10.0));
}

double log_beta(double a, double b) {
  return detail::log_gamma(a) + detail::log_gamma(b) - detail::log_gamma(a + b);
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_cf(double x, double a, double b, const Tolerance& tol) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  const int budget = iteration_budget(tol, std::max(a, b));
  for (int m = 1; m <= budget; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) <= kEps) return h;
  }
  throw ConvergenceError("incomplete beta continued fraction did not converge (a=" +
                         detail::format_g(a) + ", b=" + detail::format_g(b) + ")");
}

void check_beta_args(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("reg_inc_beta: x must lie in [0,1]");
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::domain_error("reg_inc_beta: shape parameters must be positive and finite");
  }
}

// Returns {I(x;a,b), 1 - I(x;a,b)}; whichever is smaller is computed
// directly so neither suffers cancellation.
std::pair<double, double> beta_pair(double x, double a, double b, const Tolerance& tol) {
  check_beta_args(x, a, b);
  if (x == 0.0) return {0.0, 1.0};
  if (x == 1.0) return {1.0, 0.0};
  const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double lower = detail::clamp_unit(front * beta_cf(x, a, b, tol) / a);
    return {lower, 1.0 - lower};
  }
  const double upper = detail::clamp_unit(front * beta_cf(1.0 - x, b, a, tol) / b);
  return {1.0 - upper, upper};
}

// Returns {P(a,x), Q(a,x)} with the smaller computed directly.
std::pair<double, double> gamma_pair(double a, double x, const Tolerance& tol) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::domain_error("incomplete gamma: a must be positive");
  if (!(x >= 0.0)) throw std::domain_error("incomplete gamma: x must be nonnegative");
  if (x == 0.0) return {0.0, 1.0};
  if (std::isinf(x)) return {1.0, 0.0};
  const double log_front = a * std::log(x) - x - detail::log_gamma(a);
  const int budget = iteration_budget(tol, a);
  if (x < a + 1.0) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 1; n <= budget; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * kEps) {
        const double p = detail::clamp_unit(sum * std::exp(log_front));
        return {p, 1.0 - p};
      }
    }
    throw ConvergenceError("incomplete gamma series did not converge (a=" + detail::format_g(a) + ")");
  }
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= budget; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) <= kEps) {
      const double q = detail::clamp_unit(std::exp(log_front) * h);
      return {1.0 - q, q};
    }
  }
  throw ConvergenceError("incomplete gamma continued fraction did not converge (a=" +
                         detail::format_g(a) + ")");
}

// Safeguarded Newton iteration for a monotone residual on [lo, hi].
// `eval` returns {residual, derivative}; the residual must change sign
// across the bracket. Falls back to bisection whenever Newton leaves it.
template <class Eval>
double solve_monotone(Eval eval, double lo, double hi, double x, int max_iter, const char* what) {
  auto [f_lo, df_lo] = eval(lo);
  (void)df_lo;
  const bool increasing = f_lo < 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const auto [f, df] = eval(x);
    if (f == 0.0) return x;
    if ((f < 0.0) == increasing) {
      lo = x;
    } else {
      hi = x;
    }
    double next = x - f / df;
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * kEps * std::abs(x) || hi - lo <= 4.0 * kEps * std::abs(hi)) {
      return next;
    }
    x = next;
  }
  throw ConvergenceError(std::string(what) + ": root finding did not converge");
}

}  // namespace

void Tolerance::validate() const {
  if (!(abs_tol > 0.0)) throw std::domain_error("Tolerance: abs_tol must be positive");
  if (max_iter < 1) throw std::domain_error("Tolerance: max_iter must be at least 1");
}

double reg_inc_beta(double x, double a, double b, const Tolerance& tol) {
  return beta_pair(x, a, b, tol).first;
}

double reg_inc_beta_complement(double x, double a, double b, const Tolerance& tol) {
  return beta_pair(x, a, b, tol).second;
}

namespace {

// Solves I(x; a, b) = y for y <= 1/2.
double inv_beta_lower(double y, double a, double b, const Tolerance& tol) {
  const double lbeta = log_beta(a, b);
  auto eval = [&](double x) -> std::pair<double, double> {
    const double density =
        x <= 0.0 || x >= 1.0 ? 0.0 : std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lbeta);
    return {beta_pair(x, a, b, tol).first - y, density};
  };
  // Leading term of the small-x expansion I(x) ~ x^a / (a B(a,b)).
  double guess = std::exp((std::log(y * a) + lbeta) / a);
  if (!(guess > 0.0 && guess < 1.0)) guess = 0.5;
  const double x = solve_monotone(eval, 0.0, 1.0, guess, iteration_budget(tol, std::max(a, b)) + 1100,
                                  "inv_reg_inc_beta");
  const double residual = std::abs(beta_pair(x, a, b, tol).first - y);
  // Near x = 1 a single ulp of x can move I by more than abs_tol.
  const double resolution = 4.0 * eval(x).second * kEps;
  if (residual > std::max(tol.abs_tol, resolution)) {
    throw ConvergenceError("inv_reg_inc_beta: residual " + detail::format_g(residual) + " exceeds tolerance");
  }
  return x;
}

}  // namespace

double inv_reg_inc_beta(double y, double a, double b, const Tolerance& tol) {
  tol.validate();
  if (!(y >= 0.0 && y <= 1.0)) throw std::domain_error("inv_reg_inc_beta: y must lie in [0,1]");
  check_beta_args(0.5, a, b);
  if (y == 0.0) return 0.0;
  if (y == 1.0) return 1.0;
  // Upper targets are solved through I(x; a, b) = 1 - I(1 - x; b, a) so
  // that x near 1 is resolved as 1 minus a small number.
  if (y > 0.5) return detail::clamp_unit(1.0 - inv_beta_lower(1.0 - y, b, a, tol));
  return detail::clamp_unit(inv_beta_lower(y, a, b, tol));
}

double reg_upper_gamma(double a, double x, const Tolerance& tol) { return gamma_pair(a, x, tol).second; }

double reg_lower_gamma(double a, double x, const Tolerance& tol) { return gamma_pair(a, x, tol).first; }

double zeta(int M, double x, const Tolerance& tol) {
  if (M < 1) throw std::domain_error("zeta: M must be at least 1");
  if (!(x >= 0.0)) throw std::domain_error("zeta: x must be nonnegative");
  return reg_upper_gamma(0.5 * M, 0.5 * x, tol);
}

double inv_zeta(int M, double p, const Tolerance& tol) {
  tol.validate();
  if (M < 1) throw std::domain_error("inv_zeta: M must be at least 1");
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("inv_zeta: p must lie in (0,1]");
  if (p == 1.0) return 0.0;

  const double a = 0.5 * M;
  const double lgam = detail::log_gamma(a);
  const bool use_lower = p > 0.5;
  auto eval = [&](double t) -> std::pair<double, double> {
    const auto [lower_v, upper_v] = gamma_pair(a, t, tol);
    const double density = t <= 0.0 ? 0.0 : std::exp((a - 1.0) * std::log(t) - t - lgam);
    if (use_lower) return {lower_v - (1.0 - p), density};
    return {upper_v - p, -density};
  };

  double hi = std::max(a, 1.0);
  while (gamma_pair(a, hi, tol).second > p) {
    hi *= 2.0;
    if (!std::isfinite(hi)) throw ConvergenceError("inv_zeta: failed to bracket root");
  }
  const double t = solve_monotone(eval, 0.0, hi, 0.5 * hi, iteration_budget(tol, a) + 1100, "inv_zeta");
  const double x = 2.0 * t;
  const double residual = std::abs(zeta(M, x, tol) - p);
  if (residual > tol.abs_tol) {
    throw ConvergenceError("inv_zeta: residual " + detail::format_g(residual) + " exceeds tolerance");
  }
  return x;
}

double marcum_q(double order, double a, double b, const Tolerance& tol) {
  if (!(order > 0.0) || !std::isfinite(order)) throw std::domain_error("marcum_q: order must be positive");
  if (!(a >= 0.0) || !(b >= 0.0)) throw std::domain_error("marcum_q: arguments must be nonnegative");
  if (b == 0.0) return 1.0;
  if (std::isinf(a)) return 1.0;
  if (std::isinf(b)) return 0.0;

  const double mu = 0.5 * a * a;
  const double x = 0.5 * b * b;
  if (mu == 0.0) return reg_upper_gamma(order, x, tol);

  // Start at the Poisson mode and walk outward in both directions. Both the
  // upper sum (sum w_k Q) and the lower sum (sum w_k P) are accumulated so the
  // smaller of the two can be returned without cancellation.
  const double k0 = std::floor(mu);
  const double w0 = std::exp(-mu + k0 * std::log(mu) - detail::log_gamma(k0 + 1.0));
  const auto [p0, q0] = gamma_pair(order + k0, x, tol);
  double upper = w0 * q0;
  double lower = w0 * p0;

  // Q(s+1, x) = Q(s, x) + x^s e^{-x} / Gamma(s+1), and P = 1 - Q.
  const double step0 = std::exp((order + k0) * std::log(x) - x - detail::log_gamma(order + k0 + 1.0));

  {
    double w = w0;
    double q = q0;
    double p = p0;
    double step = step0;
    for (double k = k0;; k += 1.0) {
      q = std::min(1.0, q + step);
      p = std::max(0.0, p - step);
      step *= x / (order + k + 1.0);
      w *= mu / (k + 1.0);
      upper += w * q;
      lower += w * p;
      const double r = mu / (k + 2.0);
      if (!(w * r / (1.0 - r) >= tol.abs_tol)) break;
    }
  }
  {
    double w = w0;
    double q = q0;
    double p = p0;
    // Increment between orders order+k-1 and order+k.
    double step = step0 * (order + k0) / x;
    for (double k = k0; k >= 1.0; k -= 1.0) {
      q = std::max(0.0, q - step);
      p = std::min(1.0, p + step);
      step *= (order + k - 1.0) / x;
      w *= k / mu;
      upper += w * q;
      lower += w * p;
      const double r = (k - 1.0) / mu;
      if (!(w * r / (1.0 - r) >= tol.abs_tol)) break;
    }
  }
  return detail::clamp_unit(upper <= lower ? upper : 1.0 - lower);
}

}  // namespace coopsense
