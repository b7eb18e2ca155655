#pragma once

namespace mcb {

/// log|Gamma(x)|; reentrant.
double log_gamma(double x);

/// Regularized incomplete beta I_x(a, b) by continued fraction (Lentz), to ~1e-14 relative.
double incomplete_beta(double a, double b, double x);

/// Upper tail P(T > t) of Student's t with `df` degrees of freedom.
double student_t_sf(double t, double df);

/// log density of Beta(a, b) at x in (0,1).
double log_beta_density(double x, double a, double b);

}  // namespace mcb
