#pragma once

namespace tenet {

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation (modified Lentz). Absolute accuracy better than 1e-12 over the
/// parameter ranges used by the F test.
double regularized_incomplete_beta(double a, double b, double x);

/// Upper tail P(F > f) of the F distribution with (d1, d2) degrees of
/// freedom. f <= 0 returns 1; +infinity returns 0.
double f_upper_tail(double f, double d1, double d2);

}  // namespace tenet
