#include "urbanscope/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "urbanscope/error.hpp"

namespace urbanscope {

namespace {

// Continued fraction for I_x(a, b); converges fast for x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  constexpr int max_iter = 10000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < eps) return h;
  }
  throw InternalError("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidInput("incomplete_beta: parameters must be positive");
  if (!(x >= 0.0) || !(x <= 1.0)) throw InvalidInput("incomplete_beta: x must be in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw InvalidInput("student_t: degrees of freedom must be positive");
  if (std::isnan(t)) throw InvalidInput("student_t: t is NaN");
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return incomplete_beta(0.5 * df, 0.5, x);
}

double student_t_cdf(double t, double df) {
  const double tail = 0.5 * student_t_two_sided_p(t, df);
  return t >= 0.0 ? 1.0 - tail : tail;
}

RegressionReport least_squares(std::span<const double> x, std::span<const double> y,
                               std::span<const double> weights) {
  if (x.size() != y.size()) throw InvalidInput("least_squares: x and y differ in length");
  const bool weighted = !weights.empty();
  if (weighted && weights.size() != x.size()) throw InvalidInput("least_squares: weights differ in length");

  std::vector<double> xs, ys, ws;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = weighted ? weights[i] : 1.0;
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("least_squares: weights must be non-negative");
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw InvalidInput("least_squares: non-finite observation");
    if (w == 0.0) continue;
    xs.push_back(x[i]);
    ys.push_back(y[i]);
    ws.push_back(w);
  }
  const std::size_t n = xs.size();
  if (n < 3) throw InvalidInput("least_squares: needs at least 3 observations with positive weight");

  double sw = 0.0, swx = 0.0, swy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += ws[i];
    swx += ws[i] * xs[i];
    swy += ws[i] * ys[i];
  }
  const double xbar = swx / sw;
  const double ybar = swy / sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - xbar;
    const double dy = ys[i] - ybar;
    sxx += ws[i] * dx * dx;
    sxy += ws[i] * dx * dy;
    syy += ws[i] * dy * dy;
  }
  if (!(sxx > 0.0)) throw InvalidInput("least_squares: x is constant");

  RegressionReport r;
  r.weighted = weighted;
  r.n = n;
  r.slope = sxy / sxx;
  r.intercept = ybar - r.slope * xbar;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - r.intercept - r.slope * xs[i];
    sse += ws[i] * e * e;
  }
  const double df = static_cast<double>(n - 2);
  r.slope_se = std::sqrt(sse / df / sxx);
  r.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  if (r.slope_se > 0.0) {
    r.t = r.slope / r.slope_se;
    r.p_value = student_t_two_sided_p(r.t, df);
  } else {
    r.t = r.slope == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), r.slope);
    r.p_value = r.slope == 0.0 ? 1.0 : 0.0;
  }
  return r;
}

}  // namespace urbanscope
