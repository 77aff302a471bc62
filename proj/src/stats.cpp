#include "castsize/stats.hpp"

#include <cmath>
#include <limits>

namespace castsize {

double profitability(const MovieRecord &record) {
  if (!record.box_office_musd)
    throw Error(ErrorCode::MissingBoxOffice, "'" + record.title + "' has no box office figure");
  if (!(record.budget_musd > 0.0))
    throw Error(ErrorCode::ZeroBudget, "'" + record.title + "' has no positive budget");
  return *record.box_office_musd / record.budget_musd;
}

namespace {

constexpr double kTolerance = 1e-12;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a,b), valid for x < (a+1)/(a+b+2).
double beta_fraction(double a, double b, double x) {
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny)
    d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny)
      d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny)
      c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny)
      d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny)
      c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kTolerance)
      break;
  }
  return h;
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0)
    return 0.0;
  if (x >= 1.0)
    return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * beta_fraction(a, b, x) / a;
  return 1.0 - front * beta_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double dof) {
  if (std::isnan(t))
    return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t))
    return 0.0;
  // P(|T| > t) = I_{dof/(dof+t^2)}(dof/2, 1/2)
  return regularized_incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
}

double student_t_upper_tail(double t, double dof) {
  const double two = student_t_two_sided(t, dof) / 2.0;
  return t >= 0.0 ? two : 1.0 - two;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::LengthMismatch, "x and y differ in length");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    return std::numeric_limits<double>::quiet_NaN();
  const double r = sxy / std::sqrt(sxx * syy);
  return r > 1.0 ? 1.0 : (r < -1.0 ? -1.0 : r);
}

RegressionResult regress_through_origin(std::span<const double> x,
                                        std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::LengthMismatch, "x and y differ in length");
  if (x.size() < 3)
    throw Error(ErrorCode::TooFewPoints, "need at least three points");
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  if (sxx == 0.0)
    throw Error(ErrorCode::DegenerateX, "every x is zero");

  RegressionResult r;
  r.n = x.size();
  r.slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - r.slope * x[i];
    rss += e * e;
  }
  const double dof = static_cast<double>(r.n - 1);
  r.standard_error = std::sqrt(rss / dof / sxx);
  if (r.standard_error > 0.0) {
    r.t_statistic = r.slope / r.standard_error;
  } else {
    r.t_statistic = r.slope == 0.0 ? 0.0
                                   : std::copysign(std::numeric_limits<double>::infinity(), r.slope);
  }
  r.p_value = r.slope == 0.0 && r.standard_error == 0.0
                  ? 1.0
                  : student_t_two_sided(r.t_statistic, dof);
  r.pearson_r = pearson_correlation(x, y);
  return r;
}

} // namespace castsize
