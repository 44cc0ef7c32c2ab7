#include <doctest.h>

#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "urbanscope/econ.hpp"
#include "urbanscope/error.hpp"
#include "urbanscope/random.hpp"

using namespace urbanscope;

namespace {

FirmTable random_table(Rng& rng, std::size_t zones, std::size_t industries) {
  std::vector<FirmRecord> recs;
  for (std::size_t z = 0; z < zones; ++z)
    for (std::size_t i = 0; i < industries; ++i)
      if (rng.uniform() < 0.7)
        recs.push_back({"z" + std::to_string(z), std::to_string(1000 + i), static_cast<std::int64_t>(rng.below(50))});
  recs.push_back({"z0", "1000", 1});
  return FirmTable(recs);
}

// (X'WX)^-1 X'Wy for the design [1, x], by explicit 2x2 inversion.
std::pair<double, double> normal_equations(const std::vector<double>& x, const std::vector<double>& y,
                                           const std::vector<double>& w) {
  double a = 0, b = 0, d = 0, u = 0, v = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    a += w[i];
    b += w[i] * x[i];
    d += w[i] * x[i] * x[i];
    u += w[i] * y[i];
    v += w[i] * x[i] * y[i];
  }
  const double det = a * d - b * b;
  return {(d * u - b * v) / det, (a * v - b * u) / det};  // intercept, slope
}

}  // namespace

TEST_CASE("rca worked example and single zone") {
  // Zone A: 2 of industry i among 4 firms; city: 3 of i among 10.
  const FirmTable t({{"A", "47", 2}, {"A", "56", 2}, {"B", "47", 1}, {"B", "56", 5}});
  const auto m = rca(t);
  CHECK(*m.at(*t.industry_index("47"), *t.zone_index("A")) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));

  const FirmTable one({{"A", "47", 3}, {"A", "56", 9}, {"A", "96", 1}});
  const auto m1 = rca(one);
  for (std::size_t i = 0; i < 3; ++i) CHECK(*m1.at(i, 0) == doctest::Approx(1.0));

  CHECK_THROWS_AS(rca(FirmTable{}), InvalidInput);
}

TEST_CASE("rca is undefined for zones without firms") {
  FirmTable t({{"A", "47", 2}, {"B", "56", 2}});
  t.add_zone("C");
  const auto m = rca(t);
  CHECK_FALSE(m.at(0, 2));
  CHECK(m.at(0, 0));
}

TEST_CASE("rca weighted mean identity on random tables") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = random_table(rng, 2 + rng.below(10), 1 + rng.below(8));
    const auto m = rca(t);
    const auto total = static_cast<double>(t.total());
    for (std::size_t i = 0; i < t.n_industries(); ++i) {
      if (t.industry_total(i) == 0) continue;
      double s = 0.0;
      for (std::size_t z = 0; z < t.n_zones(); ++z)
        if (m.at(i, z)) s += static_cast<double>(t.zone_total(z)) / total * *m.at(i, z);
      REQUIRE(std::abs(s - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("diversity") {
  FirmTable t({{"A", "4711", 2}, {"A", "4771", 1}, {"B", "4711", 1}, {"B", "5611", 1}, {"B", "9602", 1}});
  t.add_zone("E");
  CHECK(diversity(t, "A") == 2);
  CHECK(diversity(t, "E") == 0);
  CHECK(diversity(t, "B") == 3);
  const FirmTable full({{"A", "1", 1}, {"A", "2", 1}, {"A", "3", 1}});
  CHECK(diversity(full, "A") == full.n_industries());
  CHECK_THROWS_AS(diversity(t, "nope"), InvalidInput);

  // Adding a firm never lowers diversity.
  Rng rng(3);
  auto recs = t.records();
  std::size_t before = diversity(t, "A");
  for (int k = 0; k < 20; ++k) {
    recs.push_back({"A", std::to_string(1000 + rng.below(5)), 1});
    const std::size_t after = diversity(FirmTable(recs), "A");
    CHECK(after >= before);
    before = after;
  }
}

TEST_CASE("aggregate truncates codes") {
  const FirmTable t({{"A", "4711", 2}, {"A", "4771", 1}, {"B", "5611", 4}});
  const auto two = t.aggregate(2);
  CHECK(two.n_industries() == 2);
  CHECK(two.count(*two.zone_index("A"), *two.industry_index("47")) == 3);
}

TEST_CASE("student t tail against boost") {
  for (double df : {1.0, 2.0, 3.0, 7.5, 23.0, 120.0})
    for (double t : {0.0, 0.1, 0.9, 2.0, 3.7, 8.0, -1.3}) {
      boost::math::students_t dist(df);
      const double ref = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
      CHECK(std::abs(student_t_two_sided_p(t, df) - ref) <= 1e-12);
      CHECK(std::abs(student_t_cdf(t, df) - boost::math::cdf(dist, t)) <= 1e-12);
    }
}

TEST_CASE("least_squares exact line and errors") {
  const std::vector<double> x{0, 1, 2, 3, 4};
  std::vector<double> y;
  for (double v : x) y.push_back(2 * v + 1);
  const std::vector<double> w{1, 3, 0.5, 2, 7};
  const auto r = least_squares(x, y, w);
  CHECK(std::abs(r.slope - 2) <= 1e-10);
  CHECK(std::abs(r.intercept - 1) <= 1e-10);
  CHECK(r.r_squared == doctest::Approx(1.0));
  CHECK(r.weighted);

  CHECK_THROWS_AS(least_squares(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), InvalidInput);
  CHECK_THROWS_AS(least_squares(std::vector<double>{1, 2}, std::vector<double>{1, 2}), InvalidInput);
  // Zero weights drop observations.
  CHECK_THROWS_AS(least_squares(x, y, std::vector<double>{1, 1, 0, 0, 0}), InvalidInput);
}

TEST_CASE("least_squares matches independent oracles") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 25;
    std::vector<double> x(n), y(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform(-3, 3);
      y[i] = 0.4 * x[i] + rng.normal();
      w[i] = rng.uniform(0.1, 10);
    }
    const auto r = least_squares(x, y, w);
    const auto [b0, b1] = normal_equations(x, y, w);
    CHECK(std::abs(r.intercept - b0) <= 1e-8);
    CHECK(std::abs(r.slope - b1) <= 1e-8);
    double sse = 0.0, sxx = 0.0, sw = 0.0, swx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sse += w[i] * std::pow(y[i] - b0 - b1 * x[i], 2);
      sw += w[i];
      swx += w[i] * x[i];
    }
    for (std::size_t i = 0; i < n; ++i) sxx += w[i] * std::pow(x[i] - swx / sw, 2);
    const double t = b1 / std::sqrt(sse / (n - 2) / sxx);
    boost::math::students_t dist(static_cast<double>(n - 2));
    CHECK(std::abs(r.p_value - 2 * boost::math::cdf(boost::math::complement(dist, std::abs(t)))) <= 1e-6);

    // OLS equals WLS with uniform weights.
    const auto ols = least_squares(x, y);
    const auto uni = least_squares(x, y, std::vector<double>(n, 1.0));
    CHECK(std::abs(ols.slope - uni.slope) <= 1e-12);
    CHECK(std::abs(ols.intercept - uni.intercept) <= 1e-12);
    CHECK_FALSE(ols.weighted);

    // Scale equivariance in y and invariance to weight scaling.
    std::vector<double> y3(n), w5(n);
    for (std::size_t i = 0; i < n; ++i) {
      y3[i] = -3.0 * y[i];
      w5[i] = 5.0 * w[i];
    }
    const auto s = least_squares(x, y3, w);
    CHECK(std::abs(s.slope + 3.0 * r.slope) <= 1e-10);
    CHECK(std::abs(s.intercept + 3.0 * r.intercept) <= 1e-10);
    CHECK(std::abs(s.t + r.t) <= 1e-10);
    CHECK(std::abs(s.p_value - r.p_value) <= 1e-10);
    CHECK(std::abs(s.r_squared - r.r_squared) <= 1e-10);
    const auto ws = least_squares(x, y, w5);
    CHECK(std::abs(ws.slope - r.slope) <= 1e-12);
    CHECK(std::abs(ws.slope_se - r.slope_se) <= 1e-12);
    CHECK(std::abs(ws.p_value - r.p_value) <= 1e-12);
    CHECK(std::abs(ws.r_squared - r.r_squared) <= 1e-12);
  }
}

TEST_CASE("sector_association recovers planted signals") {
  // Ten zones with varying delta-rho. Industry "11" is over-represented where
  // delta-rho is high, "22" where it is low, "33" is spread evenly, and "44"
  // lives in two zones outside the delta-rho map.
  std::vector<FirmRecord> recs;
  std::map<std::string, double> delta;
  for (int z = 0; z < 10; ++z) {
    const std::string id = "z" + std::to_string(z);
    delta[id] = 0.001 * z;
    recs.push_back({id, "1100", 5 + 10 * z});
    recs.push_back({id, "2200", 5 + 10 * (9 - z)});
    recs.push_back({id, "3300", 50});
  }
  recs.push_back({"z10", "4400", 7});
  recs.push_back({"z11", "4400", 1});
  const auto res = sector_association(FirmTable(recs), delta, 2);
  REQUIRE(res.ranked.size() == 2);
  CHECK(res.ranked.front().industry == "11");
  CHECK(res.ranked.front().report.slope > 0);
  CHECK(res.ranked.front().report.p_value < 0.01);
  CHECK(res.ranked.back().industry == "22");
  CHECK(res.bottom(1).front().industry == "22");
  // Constant RCA leaves nothing to regress on.
  REQUIRE(res.skipped.size() == 2);
  CHECK(res.skipped[0].industry == "33");
  CHECK(res.skipped[1].industry == "44");
}
