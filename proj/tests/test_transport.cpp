#include <doctest.h>

#include <cmath>

#include "condot/transport.hpp"
#include "support.hpp"

using namespace condot;
using condot::testing::vec1;
using condot::testing::vec2;

TEST_CASE("w1 of a measure with itself is zero with an identity plan") {
  testing::Rng rng(11);
  const DiscreteMeasure mu = testing::random_measure(rng, 2, 8);
  const auto [value, plan] = w1_exact(mu, mu);
  CHECK(value == 0.0);
  validate_plan(plan, mu, mu, MetricSpec::euclidean());
  for (const auto& e : plan.flows) CHECK(e.i == e.j);
}

TEST_CASE("w1 between point masses is the ground distance") {
  const DiscreteMeasure a = make_measure({vec2(0.0, 0.0)}, {1.0});
  const DiscreteMeasure b = make_measure({vec2(3.0, 4.0)}, {1.0});
  CHECK(w1_exact(a, b).first == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(w1_exact(a, b, MetricSpec::l1()).first == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("half mass moves half the way") {
  const DiscreteMeasure mu = make_measure({vec1(0.0), vec1(1.0)}, {0.5, 0.5});
  const DiscreteMeasure nu = make_measure({vec1(0.5)}, {1.0});
  CHECK(w1_exact(mu, nu).first == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w1_1d_oracle(mu, nu) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("1-D oracle hand values") {
  const DiscreteMeasure d0 = make_measure({vec1(0.0)}, {1.0});
  const DiscreteMeasure d1 = make_measure({vec1(1.0)}, {1.0});
  CHECK(w1_1d_oracle(d0, d1) == doctest::Approx(1.0).epsilon(1e-15));

  const DiscreteMeasure u1 =
      make_measure({vec1(0.0), vec1(1.0 / 3), vec1(2.0 / 3)}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const DiscreteMeasure u2 =
      make_measure({vec1(1.0 / 3), vec1(2.0 / 3), vec1(1.0)}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(w1_1d_oracle(u1, u2) == doctest::Approx(1.0 / 3).epsilon(1e-12));

  CHECK_THROWS_AS(w1_1d_oracle(make_measure({vec2(0, 0)}, {1.0}), d0), DimensionMismatch);
}

TEST_CASE("solver matches the 1-D oracle on random instances") {
  testing::Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const DiscreteMeasure mu = testing::random_measure(rng, 1, 50);
    const DiscreteMeasure nu = testing::random_measure(rng, 1, 50);
    const auto [value, plan] = w1_exact(mu, nu);
    const double oracle = w1_1d_oracle(mu, nu);
    CHECK(std::abs(value - oracle) <= 1e-9);
    validate_plan(plan, mu, nu, MetricSpec::euclidean());
  }
}

TEST_CASE("dimension mismatch is rejected") {
  const DiscreteMeasure a = make_measure({vec1(0.0)}, {1.0});
  const DiscreteMeasure b = make_measure({vec2(0.0, 0.0)}, {1.0});
  CHECK_THROWS_AS(w1_exact(a, b), DimensionMismatch);
}

TEST_CASE("dual witness for identical measures is constant with value zero") {
  const DiscreteMeasure mu = make_measure({vec1(0.0), vec1(2.0)}, {0.5, 0.5});
  const auto [value, plan] = w1_exact(mu, mu);
  const DualWitness w = dual_witness(mu, mu, plan);
  CHECK(w.dual_value == 0.0);
}

TEST_CASE("dual witness separates point masses at slope one") {
  const DiscreteMeasure d0 = make_measure({vec1(0.0)}, {1.0});
  const DiscreteMeasure d1 = make_measure({vec1(1.0)}, {1.0});
  const auto [value, plan] = w1_exact(d0, d1);
  const DualWitness w = dual_witness(d0, d1, plan);
  REQUIRE(w.support_points.size() == 2);
  CHECK(w.values[0] - w.values[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.dual_value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("strong duality on random instances") {
  testing::Rng rng(515);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = rng.integer(1, 3);
    const DiscreteMeasure mu = testing::random_measure(rng, dim, 30);
    const DiscreteMeasure nu = testing::random_measure(rng, dim, 30);
    const MetricSpec metric = rng.coin() ? MetricSpec::euclidean() : MetricSpec::l1();
    const auto [value, plan] = w1_exact(mu, nu, metric);
    const DualWitness w = dual_witness(mu, nu, plan, metric);
    CHECK(std::abs(w.dual_value - value) <= 1e-7);
    const double modulus =
        w.support_points.size() >= 2 ? lipschitz_modulus(w.support_points, w.values, metric) : 0.0;
    CHECK(modulus <= 1.0 + 1e-9);
  }
}

TEST_CASE("metric axioms hold on desk-scale random triples") {
  testing::Rng rng(99);
  for (int trial = 0; trial < 15; ++trial) {
    const int dim = rng.integer(1, 2);
    const DiscreteMeasure a = testing::random_measure(rng, dim, 15);
    const DiscreteMeasure b = testing::random_measure(rng, dim, 15);
    const DiscreteMeasure c = testing::random_measure(rng, dim, 15);
    const double ab = w1_exact(a, b).first;
    const double ba = w1_exact(b, a).first;
    const double ac = w1_exact(a, c).first;
    const double cb = w1_exact(c, b).first;
    CHECK(std::abs(ab - ba) <= 1e-9);
    CHECK(ab <= ac + cb + 1e-9);
  }
  const DiscreteMeasure m = testing::random_measure(rng, 2, 10);
  CHECK(w1_exact(m, m).first <= 1e-12);
}

TEST_CASE("identity of indiscernibles: zero distance only for equal measures") {
  testing::Rng rng(7331);
  for (int trial = 0; trial < 10; ++trial) {
    const DiscreteMeasure a = testing::random_measure(rng, 1, 6);
    const DiscreteMeasure b = testing::random_measure(rng, 1, 6);
    const double d = w1_exact(a, b).first;
    if (same_measure(a, b, 1e-12))
      CHECK(d <= 1e-12);
    else
      CHECK(d > 1e-12);
  }
}

TEST_CASE("translation invariance") {
  testing::Rng rng(88);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = rng.integer(1, 3);
    DiscreteMeasure a = testing::random_measure(rng, dim, 12);
    DiscreteMeasure b = testing::random_measure(rng, dim, 12);
    const double base = w1_exact(a, b).first;
    const Vec t = testing::random_point(rng, dim, -3.0, 3.0);
    for (Vec& p : a.atoms) p += t;
    for (Vec& p : b.atoms) p += t;
    CHECK(std::abs(w1_exact(a, b).first - base) <= 1e-9);
  }
}

TEST_CASE("lipschitz_modulus hand values") {
  const std::vector<Vec> pts = {vec2(0.0, 0.0), vec2(1.0, 0.0), vec2(0.0, 2.0)};
  CHECK(lipschitz_modulus(pts, {0.0, 0.0, 0.0}) == 0.0);
  // f = first coordinate, a norm-one linear functional
  CHECK(lipschitz_modulus(pts, {0.0, 1.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lipschitz_modulus({vec1(0.0), vec1(1.0)}, {0.0, 2.0}) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(lipschitz_modulus({vec1(0.0), vec1(0.0)}, {0.0, 1.0}), DegenerateInput);
  CHECK_THROWS_AS(lipschitz_modulus({vec1(0.0)}, {0.0}), DegenerateInput);
}

TEST_CASE("integer and floating flow paths agree") {
  // equal weights take the exact integer path; perturbed weights do not
  const DiscreteMeasure mu_q =
      make_measure({vec1(0.0), vec1(0.4), vec1(1.1)}, {0.25, 0.25, 0.5});
  const DiscreteMeasure nu_q = make_measure({vec1(0.2), vec1(0.9)}, {0.5, 0.5});
  const double exact = w1_exact(mu_q, nu_q).first;
  CHECK(std::abs(exact - w1_1d_oracle(mu_q, nu_q)) <= 1e-12);

  const double irr = 1.0 / std::sqrt(2.0);
  const DiscreteMeasure mu_f = make_measure({vec1(0.0), vec1(1.0)}, {irr, 1.0 - irr});
  const DiscreteMeasure nu_f = make_measure({vec1(0.5)}, {1.0});
  CHECK(std::abs(w1_exact(mu_f, nu_f).first - w1_1d_oracle(mu_f, nu_f)) <= 1e-9);
}
