#include <doctest.h>

#include <cmath>
#include <vector>

#include "esseen/dist.hpp"
#include "support.hpp"

using namespace esseen;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an esseen::Error");
  return Errc::BadParam;
}

}  // namespace

TEST_SUITE("dist") {

TEST_CASE("make_discrete sorts and merges") {
  const std::vector<double> x{1.0, -1.0}, p{0.5, 0.5};
  const DiscreteDist d = make_discrete(x, p);
  CHECK(d.size() == 2);
  CHECK(d.points()[0] == -1.0);
  CHECK(d.points()[1] == 1.0);
  CHECK(d == family(FamilySpec::rademacher()));

  const std::vector<double> zz{0.0, 0.0}, half{0.5, 0.5};
  CHECK(make_discrete(zz, half) == point_mass(0.0));

  const std::vector<double> one{0.0}, mass{1.0};
  const DiscreteDist pm = make_discrete(one, mass);
  CHECK(pm.size() == 1);
  CHECK(pm.probs()[0] == 1.0);
}

TEST_CASE("make_discrete drops zero atoms and merges near-equal points") {
  const std::vector<double> x{0.0, 2.0, 1.0, 1.0 + 1e-16}, p{0.25, 0.0, 0.5, 0.25};
  const DiscreteDist d = make_discrete(x, p);
  REQUIRE(d.size() == 2);
  CHECK(d.probs()[1] == doctest::Approx(0.75));
}

TEST_CASE("make_discrete rejects bad input") {
  const std::vector<double> x{0.0, 1.0}, bad{0.5, 0.6}, nan{0.5, std::nan("")}, empty{};
  CHECK(code_of([&] { make_discrete(x, bad); }) == Errc::ProbSumMismatch);
  CHECK(code_of([&] { make_discrete(x, nan); }) == Errc::NonFiniteInput);
  CHECK(code_of([&] { make_discrete(empty, empty); }) == Errc::EmptySupport);
  const std::vector<double> inf_x{0.0, INFINITY}, p{0.5, 0.5};
  CHECK(code_of([&] { make_discrete(inf_x, p); }) == Errc::NonFiniteInput);
}

TEST_CASE("named families have mean zero") {
  const DiscreteDist r = family(FamilySpec::rademacher());
  CHECK(r.points()[0] == -1.0);
  CHECK(r.probs()[0] == 0.5);

  const DiscreteDist b = family(FamilySpec::centered_bernoulli(0.5));
  CHECK(b.points()[0] == -0.5);
  CHECK(b.points()[1] == 0.5);

  const DiscreteDist tp = family(FamilySpec::two_point(-2.0, 1.0));
  CHECK(tp.probs()[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(tp.probs()[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  const DiscreteDist u = family(FamilySpec::uniform_lattice(5));
  REQUIRE(u.size() == 5);
  CHECK(u.points()[0] == -2.0);
  CHECK(u.points()[4] == 2.0);

  for (const FamilySpec& spec : {FamilySpec::rademacher(), FamilySpec::centered_bernoulli(0.3),
                                 FamilySpec::two_point(-2.0, 1.0), FamilySpec::uniform_lattice(4)})
    CHECK(std::abs(moments(family(spec)).mean) < 1e-15);

  CHECK(code_of([] { family(FamilySpec::centered_bernoulli(0.0)); }) == Errc::BadParam);
  CHECK(code_of([] { family(FamilySpec::centered_bernoulli(1.0)); }) == Errc::BadParam);
  CHECK(code_of([] { family(FamilySpec::two_point(1.0, 2.0)); }) == Errc::BadParam);
  CHECK(code_of([] { family(FamilySpec::uniform_lattice(0)); }) == Errc::BadParam);
  CHECK(family(FamilySpec::uniform_lattice(1)) == point_mass(0.0));
}

TEST_CASE("family names round-trip through parse") {
  for (const FamilySpec& spec : {FamilySpec::rademacher(), FamilySpec::centered_bernoulli(0.3),
                                 FamilySpec::two_point(-2.0, 1.0), FamilySpec::uniform_lattice(7)}) {
    CHECK(family(FamilySpec::parse(spec.name())) == family(spec));
  }
  CHECK(FamilySpec::centered_bernoulli(0.3).name() == "centered_bernoulli:0.3");
  CHECK(code_of([] { FamilySpec::parse("poisson"); }) == Errc::BadParam);
  CHECK(code_of([] { FamilySpec::parse("two_point:1"); }) == Errc::BadParam);
}

TEST_CASE("moments of the families") {
  const MomentSummary r = moments(family(FamilySpec::rademacher()));
  CHECK(r.mean == 0.0);
  CHECK(r.variance == 1.0);
  CHECK(r.abs3 == 1.0);

  const MomentSummary tp = moments(family(FamilySpec::two_point(-2.0, 1.0)));
  CHECK(tp.variance == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(tp.abs3 == doctest::Approx(10.0 / 3.0).epsilon(1e-14));

  for (int n : {4, 16, 100}) {
    const MomentSummary s = moments(scale(family(FamilySpec::rademacher()), 1.0 / std::sqrt(n)));
    CHECK(s.variance == doctest::Approx(1.0 / n).epsilon(1e-14));
    CHECK(s.abs3 == doctest::Approx(std::pow(n, -1.5)).epsilon(1e-14));
  }
}

TEST_CASE("scale and standardize") {
  const DiscreteDist half = scale(family(FamilySpec::rademacher()), 0.5);
  CHECK(half.points()[0] == -0.5);
  CHECK(half.points()[1] == 0.5);

  CHECK(standardize(family(FamilySpec::centered_bernoulli(0.5))) == family(FamilySpec::rademacher()));

  const DiscreteDist tp = family(FamilySpec::two_point(-2.0, 1.0));
  const DiscreteDist neg = scale(tp, -1.0);
  CHECK(neg.points()[0] == -1.0);
  CHECK(neg.probs()[0] == tp.probs()[1]);

  const MomentSummary s = moments(standardize(tp));
  CHECK(std::abs(s.mean) < 1e-15);
  CHECK(s.variance == doctest::Approx(1.0).epsilon(1e-14));

  CHECK(code_of([&] { scale(tp, 0.0); }) == Errc::ZeroScale);
  CHECK(code_of([] { standardize(point_mass(3.0)); }) == Errc::ZeroVariance);
}

TEST_CASE("cdf and cdf_left") {
  const DiscreteDist r = family(FamilySpec::rademacher());
  CHECK(cdf(r, 0.0) == 0.5);
  CHECK(cdf_left(r, -1.0) == 0.0);
  CHECK(cdf(r, -1.0) == 0.5);
  CHECK(cdf(r, 1.0) == 1.0);
  CHECK(cdf_left(r, 1.0) == 0.5);
  CHECK(cdf(point_mass(0.0), -1e-15) == 0.0);
  CHECK(cdf(point_mass(0.0), 0.0) == 1.0);
}

TEST_CASE("cdf properties on random distributions") {
  test_support::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const DiscreteDist d = test_support::random_dist(rng, rng.integer(1, 12));
    const double lo = d.points()[0] - 1.0, hi = d.points()[d.size() - 1] + 1.0;
    CHECK(cdf(d, lo) == 0.0);
    CHECK(cdf(d, hi) == doctest::Approx(1.0).epsilon(1e-12));
    double prev = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double x = lo + (hi - lo) * i / 400.0;
      const double f = cdf(d, x);
      CHECK(f >= prev);
      CHECK(cdf_left(d, x) <= f);
      prev = f;
    }
    // Right-continuity at atoms, jump equal to the atom mass.
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      const double x = d.points()[i];
      CHECK(cdf(d, x) - cdf_left(d, x) == doctest::Approx(d.probs()[i]).epsilon(1e-12));
      CHECK(cdf(d, x + 1e-9) == cdf(d, x));
    }
  }
}

TEST_CASE("moment identities on random distributions") {
  test_support::Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const DiscreteDist d = test_support::random_centered(rng, rng.integer(2, 10));
    const double c = rng.uniform(-4.0, 4.0);
    if (std::abs(c) < 1e-3) continue;
    const MomentSummary m = moments(d), s = moments(scale(d, c));
    CHECK(s.variance == doctest::Approx(c * c * m.variance).epsilon(1e-12));
    CHECK(s.abs3 == doctest::Approx(std::abs(c) * c * c * m.abs3).epsilon(1e-12));
    // Jensen for mean-zero laws.
    CHECK(std::pow(m.variance, 1.5) <= m.abs3 * (1.0 + 1e-12));
  }
}

TEST_CASE("normal reference") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(std::abs(normal_cdf(1.0) - 0.8413447460685429) < 1e-12);
  CHECK(std::abs(normal_cdf(1.0) - test_support::simpson_normal_cdf(1.0)) < 1e-12);
  CHECK(std::abs(normal_cdf(-1.0) - (1.0 - normal_cdf(1.0))) < 1e-15);
  for (double x = 0.0; x <= 8.0; x += 0.25) {
    CHECK(std::abs(normal_cdf(x) + normal_cdf(-x) - 1.0) < 1e-12);
    if (x > 0.0 && x <= 6.0) CHECK(std::abs(normal_cdf(x) - test_support::simpson_normal_cdf(x)) < 1e-12);
  }
  CHECK(normal_pdf(0.0) == doctest::Approx(kNormalDensityBound).epsilon(1e-15));
  CHECK(kNormalDensityBound <= 0.3989423);
  CHECK(normal_chf(1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
}

}  // TEST_SUITE
