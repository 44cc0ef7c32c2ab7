#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace urbanscope {

// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1],
// evaluated by the modified Lentz continued fraction.
double incomplete_beta(double a, double b, double x);

// P(T <= t) for Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

// P(|T| >= |t|).
double student_t_two_sided_p(double t, double df);

struct RegressionReport {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double t = 0.0;
  double p_value = 1.0;
  double r_squared = 0.0;
  std::size_t n = 0;  // observations with positive weight
  bool weighted = false;
};

// Simple regression y = intercept + slope * x by weighted least squares.
// An empty `weights` span means ordinary least squares. Zero-weight
// observations are dropped; at least three must remain and x must vary
// among them. The slope t statistic has n - 2 degrees of freedom.
RegressionReport least_squares(std::span<const double> x, std::span<const double> y,
                               std::span<const double> weights = {});

}  // namespace urbanscope
