// Special functions for energy-detection and binomial-fusion analysis.
//
// Regularized incomplete beta/gamma functions, their inverses, and the
// generalized Marcum Q function. Every routine is pure and reentrant.
#pragma once

#include <stdexcept>
#include <string>

namespace coopsense {

/// Thrown when an iterative evaluation does not converge within max_iter.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Iteration controls shared by the iterative routines.
struct Tolerance {
  double abs_tol = 1e-12;
  int max_iter = 200;

  void validate() const;
};

/// I(x; a, b), the regularized incomplete beta function.
/// Throws std::domain_error for x outside [0,1] or nonpositive a, b.
double reg_inc_beta(double x, double a, double b, const Tolerance& tol = {});

/// Complement 1 - I(x; a, b), evaluated without cancellation.
double reg_inc_beta_complement(double x, double a, double b, const Tolerance& tol = {});

/// Inverse of reg_inc_beta in x. Endpoints map exactly (0 -> 0, 1 -> 1).
double inv_reg_inc_beta(double y, double a, double b, const Tolerance& tol = {});

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double reg_upper_gamma(double a, double x, const Tolerance& tol = {});

/// Regularized lower incomplete gamma P(a, x) = 1 - Q(a, x).
double reg_lower_gamma(double a, double x, const Tolerance& tol = {});

/// zeta_M(x) = Q(M/2, x/2): the chi-square tail with M degrees of freedom.
double zeta(int M, double x, const Tolerance& tol = {});

/// Inverse of zeta in x for p in (0, 1].
double inv_zeta(int M, double p, const Tolerance& tol = {});

/// Generalized Marcum Q function Q_order(a, b) as a Poisson mixture of
/// regularized upper-gamma terms. Truncation stops once the remaining
/// Poisson mass is below tol.abs_tol.
double marcum_q(double order, double a, double b, const Tolerance& tol = {});

}  // namespace coopsense
