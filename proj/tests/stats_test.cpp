#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "castsize/ingest.hpp"
#include "castsize/stats.hpp"
#include "test_support.hpp"

using namespace castsize;

namespace {

template <typename F> ErrorCode code_of(F &&f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

double rss(const std::vector<double> &x, const std::vector<double> &y, double b) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    s += (y[i] - b * x[i]) * (y[i] - b * x[i]);
  return s;
}

MovieRecord record(double budget, std::optional<double> box_office) {
  MovieRecord r;
  r.title = "m";
  r.budget_musd = budget;
  r.box_office_musd = box_office;
  return r;
}

} // namespace

TEST_CASE("profitability") {
  CHECK(profitability(record(100, 100)) == 1.0);
  CHECK(code_of([] { profitability(record(100, std::nullopt)); }) == ErrorCode::MissingBoxOffice);
  CHECK(code_of([] { profitability(record(0, 50)); }) == ErrorCode::ZeroBudget);
}

TEST_CASE("profitability over the franchise table") {
  auto movies =
      parse_metadata(testing::read_text(std::string(CASTSIZE_FIXTURES) + "/mcu_metadata.json"));
  REQUIRE(movies.size() == 21);
  int below_one = 0, missing = 0;
  for (const auto &m : movies) {
    if (!m.box_office_musd) {
      ++missing;
      continue;
    }
    const double ratio = profitability(m);
    CHECK(ratio == *m.box_office_musd / m.budget_musd);
    if (m.title == "Iron Man")
      CHECK(ratio == doctest::Approx(2.274).epsilon(5e-4));
    if (ratio < 1.0) {
      ++below_one;
      CHECK(m.title == "The Incredible Hulk");
      CHECK(ratio == doctest::Approx(0.897).epsilon(5e-4));
    }
  }
  CHECK(below_one == 1);
  CHECK(missing == 2);
}

TEST_CASE("regression examples") {
  SUBCASE("exact line") {
    const std::vector<double> x{1, 2, 3}, y{2, 4, 6};
    auto r = regress_through_origin(x, y);
    CHECK(r.slope == 2.0);
    CHECK(r.standard_error == 0.0);
    CHECK(r.p_value < 1e-15);
    CHECK(r.pearson_r == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.n == 3);
  }
  SUBCASE("constant y") {
    const std::vector<double> x{1, 2, 3}, y{3, 3, 3};
    auto r = regress_through_origin(x, y);
    CHECK(r.slope == doctest::Approx(18.0 / 14.0).epsilon(1e-15));
    CHECK(std::isnan(r.pearson_r));
    CHECK(r.p_value > 0.0);
    CHECK(r.p_value < 1.0);
  }
  SUBCASE("negative line") {
    const std::vector<double> x{1, 2, 3, 4}, y{-2, -4, -6, -8};
    auto r = regress_through_origin(x, y);
    CHECK(r.slope == -2.0);
    CHECK(r.pearson_r == doctest::Approx(-1.0).epsilon(1e-15));
  }
  SUBCASE("hand computed noisy fit") {
    // sxx = 14, sxy = 1*1 + 2*3 + 3*2 = 13, rss = 1 + 9 + 4 - 13^2/14
    const std::vector<double> x{1, 2, 3}, y{1, 3, 2};
    auto r = regress_through_origin(x, y);
    const double b = 13.0 / 14.0, res = 14.0 - 169.0 / 14.0;
    const double se = std::sqrt(res / 2.0 / 14.0);
    CHECK(r.slope == doctest::Approx(b).epsilon(1e-15));
    CHECK(r.standard_error == doctest::Approx(se).epsilon(1e-14));
    CHECK(r.t_statistic == doctest::Approx(b / se).epsilon(1e-14));
    const boost::math::students_t t2(2.0);
    CHECK(r.p_value == doctest::Approx(2 * boost::math::cdf(boost::math::complement(t2, b / se)))
                           .epsilon(1e-10));
    CHECK(r.pearson_r == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("regression errors") {
  const std::vector<double> three{1, 2, 3}, two{1, 2}, zeros{0, 0, 0};
  CHECK(code_of([&] { regress_through_origin(three, two); }) == ErrorCode::LengthMismatch);
  CHECK(code_of([&] { regress_through_origin(two, two); }) == ErrorCode::TooFewPoints);
  CHECK(code_of([&] { regress_through_origin(zeros, three); }) == ErrorCode::DegenerateX);
}

TEST_CASE("regression properties") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.5, 10.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + trial % 30;
    std::vector<double> x(n), y(n);
    const double slope = g(rng);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = u(rng);
      y[i] = slope * x[i] + g(rng);
    }
    auto r = regress_through_origin(x, y);

    // power-of-two scaling is exact; other factors agree to rounding
    std::vector<double> y4(n), yc(n);
    const double c = u(rng);
    for (std::size_t i = 0; i < n; ++i) {
      y4[i] = 4.0 * y[i];
      yc[i] = c * y[i];
    }
    CHECK(regress_through_origin(x, y4).slope == 4.0 * r.slope);
    CHECK(std::abs(regress_through_origin(x, yc).slope - c * r.slope) <=
          1e-12 * std::abs(c * r.slope) + 1e-15);

    // pearson r ignores positive affine maps
    std::vector<double> xa(n);
    for (std::size_t i = 0; i < n; ++i)
      xa[i] = 3.0 * x[i] + 7.0;
    CHECK(std::abs(pearson_correlation(xa, yc) - r.pearson_r) <= 1e-12);

    // least squares optimality
    const double best = rss(x, y, r.slope);
    CHECK(rss(x, y, r.slope + 1e-6) > best);
    CHECK(rss(x, y, r.slope - 1e-6) > best);

    CHECK(r.p_value >= 0.0);
    CHECK(r.p_value <= 1.0);
    CHECK(r.pearson_r >= -1.0);
    CHECK(r.pearson_r <= 1.0);
  }
}

TEST_CASE("t distribution tails") {
  // table value: t(5) one-sided 5% critical point is 2.015
  CHECK(std::abs(student_t_upper_tail(2.015, 5) - 0.05) <= 5e-4);
  CHECK(student_t_two_sided(0.0, 7) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(student_t_upper_tail(-2.015, 5) == doctest::Approx(0.95).epsilon(1e-3));
  CHECK(student_t_two_sided(INFINITY, 4) == 0.0);

  for (double dof : {1.0, 2.0, 5.0, 20.0}) {
    double prev = 1.0;
    for (double t = 0.0; t <= 40.0; t += 0.05) {
      const double p = student_t_two_sided(t, dof);
      CHECK(p <= prev);
      CHECK(student_t_two_sided(-t, dof) == p);
      prev = p;
    }
  }
}

TEST_CASE("incomplete beta and t tails against an independent implementation") {
  for (double a : {0.5, 1.0, 2.5, 10.0, 50.0})
    for (double b : {0.5, 1.0, 3.0, 20.0})
      for (double x : {1e-6, 0.01, 0.2, 0.5, 0.77, 0.99, 1 - 1e-9}) {
        const double ours = regularized_incomplete_beta(a, b, x);
        const double ref = boost::math::ibeta(a, b, x);
        CHECK(std::abs(ours - ref) <= 1e-12 * std::max(ref, 1e-300) + 1e-300);
      }
  for (double dof : {1.0, 2.0, 4.0, 5.0, 20.0, 120.0}) {
    const boost::math::students_t dist(dof);
    for (double t : {0.1, 0.7, 1.5, 2.015, 3.0, 8.0, 25.0}) {
      const double ref = boost::math::cdf(boost::math::complement(dist, t));
      CHECK(std::abs(student_t_upper_tail(t, dof) - ref) <= 1e-11 * ref + 1e-300);
    }
  }
}
