#pragma once

namespace anchorstream {

/// Regularized incomplete beta function I_x(a, b) for a, b > 0 and x in [0, 1].
/// Continued-fraction evaluation (modified Lentz), switching to the symmetric
/// tail where the fraction converges fastest.
double regularized_incomplete_beta(double a, double b, double x);

/// Inverse of I_x(a, b): the p-quantile of a Beta(a, b) distribution.
/// Bracketed Newton iteration, absolute tolerance 1e-10 on the quantile.
double inverse_incomplete_beta(double a, double b, double p);

} // namespace anchorstream
