#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "gmol/distribution.hpp"
#include "gmol/error.hpp"
#include "gmol/random.hpp"
#include "oracles.hpp"

using namespace gmol;
using doctest::Approx;

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(GmolParams(1.0, 0.0, 0.1, 5.0));
  CHECK_THROWS_AS(GmolParams(0.0, 0.5, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(GmolParams(1.1, 0.5, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(GmolParams(0.5, -0.1, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(GmolParams(0.5, 1.01, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(GmolParams(0.5, 0.5, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(GmolParams(0.5, 0.5, 1.0, -1.0), DomainError);
  CHECK_THROWS_AS(GmolParams(0.5, 0.5, std::nan(""), 1.0), DomainError);
  CHECK_THROWS_AS(LomaxParams(1.0, 0.0), DomainError);
}

TEST_CASE("sub-models") {
  CHECK(free_parameter_count(SubModel::GMOL) == 4);
  CHECK(free_parameter_count(SubModel::MOL) == 3);
  CHECK(free_parameter_count(SubModel::Lomax) == 2);
  CHECK(parse_sub_model("MoL") == SubModel::MOL);
  CHECK(to_string(SubModel::Lomax) == "lomax");
  CHECK_THROWS_AS(parse_sub_model("weibull"), DomainError);
  const GmolParams t(0.3, 0.4, 2.0, 3.0);
  CHECK(restrict_to(SubModel::MOL, t) == GmolParams(0.3, 1.0, 2.0, 3.0));
  CHECK(restrict_to(SubModel::Lomax, t) == GmolParams(1.0, 1.0, 2.0, 3.0));
}

TEST_CASE("Lomax baseline") {
  CHECK(lomax_cdf(0.0, {3.0, 2.0}) == 0.0);
  CHECK(lomax_cdf(1.0, {1.0, 1.0}) == Approx(0.5).epsilon(1e-15));
  CHECK(lomax_cdf(2.0, {6.0, 2.0}) == Approx(0.984375).epsilon(1e-15));
  CHECK(lomax_pdf(0.0, {1.0, 1.0}) == Approx(1.0).epsilon(1e-15));
  CHECK(lomax_pdf(1.0, {2.0, 1.0}) == Approx(0.25).epsilon(1e-15));
  for (const auto& p : {LomaxParams(0.5, 0.8), LomaxParams(1.5, 3.0), LomaxParams(9.0, 7.0)}) {
    CHECK(test::quad_half_line([&](double x) { return lomax_pdf(x, p); }) == Approx(1.0).epsilon(1e-8));
  }
  CHECK_THROWS_AS(lomax_cdf(-1.0, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(lomax_pdf(-1e-9, {1.0, 1.0}), DomainError);
}

TEST_CASE("gmo_transform") {
  CHECK(gmo_transform(0.0, 0.3, 0.7) == 0.0);
  CHECK(gmo_transform(1.0, 0.3, 0.7) == Approx(1.0).epsilon(1e-15));
  CHECK(gmo_transform(0.5, 0.2, 0.6) == Approx(2.0 / 3.0).epsilon(1e-15));
  for (const double g : test::linspace(0.0, 1.0, 21)) CHECK(gmo_transform(g, 1.0, 1.0) == Approx(g).epsilon(1e-15));
  double prev = 0.0;
  for (const double g : test::linspace(0.0, 1.0, 101)) {
    const double v = gmo_transform(g, 0.05, 0.1);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(gmo_transform(1.5, 0.5, 0.5), DomainError);
  CHECK_THROWS_AS(gmo_transform(0.5, 0.0, 0.5), DomainError);
}

TEST_CASE("cdf, pdf, survival and hrf at a reference point") {
  const GmolParams t(0.2, 0.6, 0.5, 0.8);
  // 50-digit composition oracle
  CHECK(cdf(1.0, t) == Approx(0.52380952380952380952).epsilon(1e-14));
  CHECK(pdf(1.0, t) == Approx(0.17762660619803476946).epsilon(1e-13));
  CHECK(hrf(1.0, t) == Approx(0.37301587301587301587).epsilon(1e-13));
  CHECK(survival(0.0, t) == 1.0);
  CHECK(cdf(0.0, t) == 0.0);
  CHECK_THROWS_AS(cdf(-0.5, t), DomainError);
  CHECK_THROWS_AS(pdf(-0.5, t), DomainError);
  CHECK_THROWS_AS(survival(-0.5, t), DomainError);
  CHECK_THROWS_AS(hrf(-0.5, t), DomainError);
}

TEST_CASE("nested reduction to Lomax") {
  for (const auto& [tau, beta] : {std::pair{0.5, 0.8}, {1.5, 3.0}, {9.0, 7.0}}) {
    const GmolParams t(1.0, 1.0, tau, beta);
    const LomaxParams l(tau, beta);
    for (const double x : test::logspace(-3, 3, 200)) {
      CHECK(std::abs(cdf(x, t) - lomax_cdf(x, l)) < 1e-14);
      CHECK(std::abs(pdf(x, t) - lomax_pdf(x, l)) < 1e-14);
      CHECK(survival(x, t) == Approx(lomax_survival(x, l)).epsilon(1e-14));
      CHECK(hrf(x, t) == Approx(tau / (beta + x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("shape invariants over the reference scenarios") {
  for (const auto& t : test::kReferenceScenarios) {
    CAPTURE(t.alpha());
    double prev = 0.0;
    for (const double x : test::linspace(0.0, 50.0 * t.beta(), 1000)) {
      const double F = cdf(x, t);
      CHECK(F >= prev);
      prev = F;
      CHECK(std::abs(F + survival(x, t) - 1.0) < 1e-14);
    }
    for (const double x : test::logspace(-4, 4, 120)) {
      const double f = pdf(x, t);
      if (f > 1e-12) {
        const double h = 1e-6 * (t.beta() + x);
        const double lo = std::max(0.0, x - h);
        const double fd = (cdf(x + h, t) - cdf(lo, t)) / (x + h - lo);
        CHECK(fd == Approx(f).epsilon(1e-5));
      }
      // numerator grouping from differentiating the generator
      const double G = lomax_cdf(x, t.baseline());
      const double a = t.alpha();
      const double l = t.lambda();
      const double D = a + (1 - a) * G;
      const double grouped = lomax_pdf(x, t.baseline()) * (a * l + 2 * a * (1 - l) * G + (1 - a) * (1 - l) * G * G) / (D * D);
      CHECK(f == Approx(grouped).epsilon(1e-13));
      const double s = survival(x, t);
      if (s > 1e-300) CHECK(hrf(x, t) * s == Approx(f).epsilon(1e-12));
    }
    CHECK(test::quad_half_line([&](double x) { return pdf(x, t); }) == Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("survival keeps relative precision in the upper tail") {
  const GmolParams t(0.2, 0.6, 9.0, 7.0);
  const double x = 1e4;
  const double s = survival(x, t);
  // S·[α + (1-λ)G]/[α + (1-α)G] with G ≈ 1 reduces to S·(1.2-λ)... evaluated directly
  const double S = std::pow(7.0 / (7.0 + x), 9.0);
  const double G = 1.0 - S;
  CHECK(s == Approx(S * (0.2 + 0.4 * G) / (0.2 + 0.8 * G)).epsilon(1e-13));
  CHECK(s > 0.0);
  CHECK(cdf(x, t) == 1.0);
  CHECK_THROWS_AS(hrf(1e300, GmolParams(0.5, 0.5, 50.0, 1.0)), RangeError);
}

TEST_CASE("quantile") {
  CHECK(quantile(0.5, GmolParams(1.0, 1.0, 1.0, 1.0)) == Approx(1.0).epsilon(1e-14));
  {
    const GmolParams t(0.5, 1.0, 2.0, 3.0);
    const double G = 0.25 / 0.75;
    CHECK(quantile(0.5, t) == Approx(3.0 * (std::pow(1.0 - G, -0.5) - 1.0)).epsilon(1e-13));
  }
  {
    const GmolParams t(0.2, 0.6, 0.5, 0.8);
    CHECK(quantile(0.3, t) == Approx(test::bisect_quantile(0.3, t)).epsilon(1e-12));
  }
  std::vector<GmolParams> points(test::kReferenceScenarios.begin(), test::kReferenceScenarios.end());
  points.emplace_back(0.754, 1.0, 2.512, 1.7);
  points.emplace_back(0.3, 1.0 - 1e-12, 1.2, 0.4);
  points.emplace_back(0.3, 1.0 - 1e-9, 1.2, 0.4);
  points.emplace_back(0.9, 0.0, 0.7, 2.0);
  for (const auto& t : points) {
    for (int i = 1; i < 1000; ++i) {
      const double u = i / 1000.0;
      CHECK(std::abs(cdf(quantile(u, t), t) - u) < 1e-10);
    }
  }
  CHECK_THROWS_AS(quantile(0.0, points[0]), DomainError);
  CHECK_THROWS_AS(quantile(1.0, points[0]), DomainError);
}

TEST_CASE("sampling") {
  const GmolParams t(0.2, 0.6, 0.5, 0.8);
  CHECK(sample(1, t, 99) == sample(1, t, 99));
  CHECK(sample(5, t, 1) != sample(5, t, 2));
  CHECK_THROWS_AS(sample(0, t, 1), DomainError);

  SUBCASE("Lomax mean") {
    const auto x = sample(100'000, GmolParams(1, 1, 2, 1), 2024);
    // mean 1, infinite variance at τ=2; use the empirical SE of a large-sample trimmed check
    double sum = 0.0;
    for (const double v : x) sum += v;
    const double mean = sum / static_cast<double>(x.size());
    double ss = 0.0;
    for (const double v : x) ss += (v - mean) * (v - mean);
    const double se = std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
    CHECK(std::abs(mean - 1.0) < 3.0 * se);
  }
  SUBCASE("empirical cdf") {
    auto x = sample(100'000, t, 7);
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double F = cdf(x[i], t);
      d = std::max({d, (static_cast<double>(i) + 1.0) / n - F, F - static_cast<double>(i) / n});
    }
    CHECK(d < 1.36 / std::sqrt(n));
  }
}

TEST_CASE("random streams") {
  Rng a(5);
  Rng b(5);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
  std::set<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 1000; ++s) seeds.insert(derive_seed(42, s));
  CHECK(seeds.size() == 1000);
  CHECK(Rng(3).split(1).uniform() == Rng(derive_seed(3, 1)).uniform());
}
