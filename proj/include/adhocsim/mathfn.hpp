#pragma once

namespace adhocsim {

/// Regularized lower incomplete gamma P(a, x); a > 0, x >= 0.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// Inverse of Q in x: returns x with gamma_q(a, x) == q, for q in (0, 1).
double gamma_q_inv(double a, double q);

}  // namespace adhocsim
