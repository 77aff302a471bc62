#pragma once

#include <cstddef>
#include <span>

#include "castsize/model.hpp"

namespace castsize {

struct RegressionResult {
  double slope = 0.0;
  double standard_error = 0.0;
  double t_statistic = 0.0;
  double p_value = 1.0;   // two-sided, Student-t with n-1 dof
  double pearson_r = 0.0; // centered; NaN when either variable is constant
  std::size_t n = 0;
};

// Box office over budget. Throws MissingBoxOffice or ZeroBudget.
double profitability(const MovieRecord &record);

/// Least squares for y = b*x (no intercept). Throws LengthMismatch,
/// TooFewPoints (n < 3) or DegenerateX (all x zero).
RegressionResult regress_through_origin(std::span<const double> x,
                                        std::span<const double> y);

double pearson_correlation(std::span<const double> x, std::span<const double> y);

// I_x(a, b) by Lentz's continued fraction, relative tolerance 1e-12.
double regularized_incomplete_beta(double a, double b, double x);

// P(T > t) for Student-t with `dof` degrees of freedom.
double student_t_upper_tail(double t, double dof);
// P(|T| > |t|).
double student_t_two_sided(double t, double dof);

} // namespace castsize
