#include <doctest.h>

#include <cmath>
#include <vector>

#include "esseen/experiments.hpp"
#include "esseen/kolmogorov.hpp"
#include "esseen/parallel.hpp"

using namespace esseen;

TEST_SUITE("experiments") {

TEST_CASE("rate fits") {
  const std::vector<int> ns{4, 8, 16, 32, 64, 128, 256};
  for (const FamilySpec& spec : {FamilySpec::rademacher(), FamilySpec::two_point(-2.0, 1.0)}) {
    const RateResult r = rate_experiment(spec, ns, {});
    REQUIRE(r.rows.size() == ns.size());
    CHECK(r.fit.slope >= -0.6);
    CHECK(r.fit.slope <= -0.4);
    CHECK(r.fit.r_squared >= 0.0);
    CHECK(r.fit.r_squared <= 1.0);
    for (const RateRow& row : r.rows) {
      CHECK(row.distance >= 0.0);
      CHECK(std::abs(row.sqrt_n_distance - row.distance * std::sqrt(row.n)) <= 1e-12);
      CHECK(row.be_rhs == doctest::Approx(std::pow(row.n, -0.5) * moments(standardize(family(spec))).abs3).epsilon(1e-12));
      CHECK(row.ratio == doctest::Approx(row.distance / row.be_rhs).epsilon(1e-15));
    }
  }
  const RateResult r = rate_experiment(FamilySpec::rademacher(), ns, {});
  CHECK(r.rows.front().be_rhs == doctest::Approx(0.5));
}

TEST_CASE("rate input checks") {
  const std::vector<int> ns{1, 2};
  try {
    rate_experiment("constant", point_mass(1.0), ns, {});
    FAIL("expected ZeroVariance");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroVariance);
  }
  const std::vector<int> unsorted{4, 2}, zero{0, 1}, none{};
  CHECK_THROWS_AS(rate_experiment(FamilySpec::rademacher(), unsorted, {}), Error);
  CHECK_THROWS_AS(rate_experiment(FamilySpec::rademacher(), zero, {}), Error);
  CHECK_THROWS_AS(rate_experiment(FamilySpec::rademacher(), none, {}), Error);
}

TEST_CASE("log-log fit") {
  const std::vector<double> x{1, 2, 4, 8}, y{3, 1.5, 0.75, 0.375};
  const FitResult f = fit_loglog(x, y);
  CHECK(f.slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));
  const std::vector<double> flat{2, 2, 2, 2};
  CHECK(fit_loglog(x, flat).r_squared == 1.0);
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(fit_loglog(one, one), Error);
  const std::vector<double> neg{1, -1, 1, 1};
  CHECK_THROWS_AS(fit_loglog(x, neg), Error);
}

TEST_CASE("constant scan") {
  const auto specs = default_suite();
  const auto ns = default_scan_sizes();
  const ConstantScan a = constant_scan(specs, ns, {1, kDefaultPruneTol});
  const ConstantScan b = constant_scan(specs, ns, {4, kDefaultPruneTol});
  CHECK(a.constant > 0.0);
  CHECK(a.constant == b.constant);
  REQUIRE(a.cells.size() == specs.size() * ns.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].ratio <= a.constant);
    CHECK(a.cells[i].family == b.cells[i].family);
    CHECK(a.cells[i].ratio == b.cells[i].ratio);
    if (i > 0) {
      const ScanCell& p = a.cells[i - 1];
      CHECK((p.family < a.cells[i].family || (p.family == a.cells[i].family && p.n < a.cells[i].n)));
    }
  }

  const std::vector<FamilySpec> single{FamilySpec::rademacher()};
  const std::vector<int> n1{1};
  CHECK(std::abs(constant_scan(single, n1, {}).constant - (normal_cdf(1.0) - 0.5)) < 1e-12);

  const std::vector<int> none{};
  try {
    constant_scan(specs, none, {});
    FAIL("expected EmptyGrid");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyGrid);
  }
  CHECK_THROWS_AS(constant_scan(std::vector<FamilySpec>{}, ns, {}), Error);
}

TEST_CASE("parallel map keeps order and reports the first failure") {
  const auto v = parallel_map(100, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == static_cast<int>(i * i));
  try {
    parallel_map(50, 3, [](std::size_t i) -> int {
      if (i == 7 || i == 30) throw Error(Errc::BadParam, std::to_string(i));
      return 0;
    });
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find('7') != std::string::npos);
  }
}

}  // TEST_SUITE
