#include "doctest.h"
#include "pconvex/pcore.hpp"
#include "test_util.hpp"

using namespace pconvex;
using pctest::vec2;

TEST_SUITE_BEGIN("pcore");

TEST_CASE("admissible_pair evaluates the two-point weight equation") {
  const auto [s, t] = admissible_pair(PExponent(0.5), 0.5);
  CHECK(s == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(t == doctest::Approx(0.25).epsilon(1e-14));
  // s^p + t^p = 1 up to floating error
  CHECK(std::sqrt(s) + std::sqrt(t) == doctest::Approx(1.0).epsilon(1e-14));

  const auto [s1, t1] = admissible_pair(PExponent(1.0), 0.3);
  CHECK(s1 == doctest::Approx(0.3));
  CHECK(t1 == doctest::Approx(0.7));

  const auto [s0, t0] = admissible_pair(PExponent(0.5), 0.0);
  CHECK(s0 == 0.0);
  CHECK(t0 == 1.0);

  CHECK_THROWS_AS(admissible_pair(PExponent(0.5), 1.5), std::domain_error);
  CHECK_THROWS_AS(admissible_pair(PExponent(0.5), -0.1), std::domain_error);
}

TEST_CASE("PExponent rejects values outside (0,1]") {
  CHECK_THROWS_AS(PExponent(0.0), std::domain_error);
  CHECK_THROWS_AS(PExponent(1.5), std::domain_error);
  CHECK_THROWS_AS(PExponent(-0.25), std::domain_error);
  CHECK(PExponent(1.0).is_one());
  CHECK(PExponent(0.25).inv() == doctest::Approx(4.0));
}

TEST_CASE("weight vectors validate sum t_i^p = 1") {
  Vector good(2);
  good << 0.25, 0.25;
  const WeightVector w(good, PExponent(0.5));
  CHECK(w.sum_defect() <= WeightVector::kSumTol);

  Vector bad(2);
  bad << 0.5, 0.5;  // sqrt(.5)+sqrt(.5) ~ 1.414
  CHECK_THROWS_AS(WeightVector(bad, PExponent(0.5)), std::invalid_argument);

  Vector negative(2);
  negative << 1.5, -0.5;
  CHECK_THROWS_AS(WeightVector(negative, PExponent(1.0)),
                  std::invalid_argument);
}

TEST_CASE("p_combination") {
  const PointSet pts({vec2(1, 0), vec2(0, 1)});

  SUBCASE("two-point example") {
    Vector t(2);
    t << 0.25, 0.25;
    const Vector q = p_combination(pts, WeightVector(t, PExponent(0.5)));
    CHECK(q.isApprox(vec2(0.25, 0.25), 1e-14));
  }
  SUBCASE("singleton identity") {
    const PointSet one({vec2(3, -2)});
    Vector t(1);
    t << 1.0;
    CHECK(p_combination(one, WeightVector(t, PExponent(0.25)))
              .isApprox(vec2(3, -2)));
  }
  SUBCASE("length mismatch") {
    Vector t(1);
    t << 1.0;
    CHECK_THROWS_AS(p_combination(pts, WeightVector(t, PExponent(1.0))),
                    std::invalid_argument);
  }
}

TEST_CASE("check_p_convex accepts genuine p-convex sets") {
  RandomSource rng(7);
  const PExponent p(0.5);
  const SampleDomain domain{Vector::Zero(2), 1.5};

  SUBCASE("unit p-ball at matching p") {
    const auto member = [](const Vector& x) {
      return std::sqrt(std::abs(x[0])) + std::sqrt(std::abs(x[1])) <= 1.0;
    };
    const auto rep = check_p_convex(member, p, domain, rng, 10000);
    CHECK(rep.passed);
    CHECK(rep.pairs_tested > 1000);
  }
  SUBCASE("euclidean disk containing 0 is p-convex for every p") {
    const auto member = [](const Vector& x) { return x.norm() <= 1.0; };
    const auto rep = check_p_convex(member, p, domain, rng, 10000);
    CHECK(rep.passed);
  }
}

TEST_CASE("check_p_convex finds the shifted-disk violation with a witness") {
  RandomSource rng(11);
  const auto member = [](const Vector& x) {
    return (x - vec2(5, 0)).norm() <= 0.1;
  };
  const SampleDomain domain{vec2(5, 0), 0.15};
  const auto rep = check_p_convex(member, PExponent(0.5), domain, rng, 10000);
  REQUIRE_FALSE(rep.passed);
  REQUIRE(rep.witness.has_value());
  // replay the witness: the recorded combination really leaves the set
  const auto& w = *rep.witness;
  CHECK_FALSE(member(w.combination));
  const auto [s, t] = admissible_pair(PExponent(0.5), w.u);
  CHECK((s * w.x + t * w.y).isApprox(w.combination, 1e-12));
}

TEST_CASE("scaling containment: members of a p-convex set stay members "
          "under alpha in (0,1]") {
  RandomSource rng(3);
  const auto body = pctest::unit_pball(0.5);
  for (int k = 0; k < 2000; ++k) {
    const Vector x =
        body.boundary_point(rng.direction(2)) * std::pow(rng.uniform(), 2.0);
    REQUIRE(body.contains(x));
    const double alpha = rng.uniform() * (1.0 - 1e-12) + 1e-12;
    CHECK(body.contains(alpha * x));
  }
}

TEST_CASE("monotone regime: p-convex oracles pass at every smaller s") {
  RandomSource rng(5);
  const auto member = [](const Vector& x) {
    return std::sqrt(std::abs(x[0])) + std::sqrt(std::abs(x[1])) <= 1.0;
  };
  const SampleDomain domain{Vector::Zero(2), 1.5};
  for (const double s : {0.5, 0.4, 0.25, 0.1}) {
    const auto rep = check_p_convex(member, PExponent(s), domain, rng, 2000);
    CHECK(rep.passed);
  }
}

TEST_CASE("p-combinations of members of a p-convex set are members") {
  RandomSource rng(13);
  const auto body = pctest::unit_pball(0.5);
  const PExponent p(0.5);
  for (int k = 0; k < 500; ++k) {
    const Vector a =
        body.boundary_point(rng.direction(2)) * std::pow(rng.uniform(), 2.0);
    const Vector b =
        body.boundary_point(rng.direction(2)) * std::pow(rng.uniform(), 2.0);
    const auto [s, t] = admissible_pair(p, rng.uniform());
    Vector w(2);
    w << s, t;
    const Vector q = p_combination(PointSet({a, b}), WeightVector(w, p));
    CHECK(body.contains(q));
  }
}

TEST_CASE("singleton hull membership") {
  const PExponent p(0.5);
  SUBCASE("interior of the segment") {
    CHECK(singleton_hull_membership(vec2(2, 0), vec2(1, 0), p, true));
    CHECK(singleton_hull_membership(vec2(2, 0), vec2(1, 0), p, false));
  }
  SUBCASE("closure adds the origin") {
    CHECK_FALSE(singleton_hull_membership(vec2(2, 0), vec2(0, 0), p, false));
    CHECK(singleton_hull_membership(vec2(2, 0), vec2(0, 0), p, true));
  }
  SUBCASE("beyond the generator") {
    CHECK_FALSE(singleton_hull_membership(vec2(2, 0), vec2(3, 0), p, true));
  }
  SUBCASE("p = 1 collapses to equality") {
    CHECK(singleton_hull_membership(vec2(2, 0), vec2(2, 0), PExponent(1.0),
                                    true));
    CHECK_FALSE(singleton_hull_membership(vec2(2, 0), vec2(1, 0),
                                          PExponent(1.0), true));
  }
  SUBCASE("agrees with a brute-force grid over t") {
    RandomSource rng(17);
    for (int k = 0; k < 200; ++k) {
      Vector x = rng.gauss_vector(2);
      while (x.norm() < 0.5) x = rng.gauss_vector(2);
      Vector perp(2);
      perp << -x[1], x[0];
      double c;
      Vector q;
      switch (k % 3) {
        case 0:  // firmly on the segment
          c = rng.uniform(0.01, 0.99);
          q = c * x;
          break;
        case 1:  // collinear but firmly outside [0, 1]
          c = rng.uniform() < 0.5 ? rng.uniform(1.05, 2.0)
                                  : rng.uniform(-1.0, -0.05);
          q = c * x;
          break;
        default:  // clearly off the line
          q = rng.uniform(0.0, 1.0) * x + 0.1 * perp;
          break;
      }
      double grid_min = 1e300;
      for (int i = 0; i <= 20000; ++i) {
        const double t = static_cast<double>(i) / 20000.0;
        grid_min = std::min(grid_min, (q - t * x).norm());
      }
      const bool brute = grid_min <= 1e-3 * std::max(1.0, x.norm());
      CHECK(singleton_hull_membership(x, q, p, true) == brute);
    }
  }
}

TEST_CASE("finite hull membership") {
  RandomSource rng(23);
  const PointSet gens({vec2(1, 0), vec2(0, 1)});
  const PExponent p(0.5);

  SUBCASE("feasible target with witness") {
    const auto hm =
        finite_hull_membership(gens, vec2(0.25, 0.25), p, 1e-8, 16, rng);
    REQUIRE(hm.found);
    REQUIRE(hm.witness.has_value());
    CHECK(hm.witness->coeffs()[0] == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(hm.witness->coeffs()[1] == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(p_combination(gens, *hm.witness)
              .isApprox(vec2(0.25, 0.25), 1e-6));
  }
  SUBCASE("generator point") {
    const auto hm = finite_hull_membership(gens, vec2(1, 0), p, 1e-10, 16, rng);
    REQUIRE(hm.found);
    CHECK(hm.witness->coeffs()[0] == doctest::Approx(1.0));
    CHECK(hm.witness->coeffs()[1] == doctest::Approx(0.0));
  }
  SUBCASE("infeasible target confirmed by the dense-grid oracle") {
    // oracle: on the feasible curve t = (u^2, (1-u)^2) the coordinate sum
    // u^2 + (1-u)^2 never exceeds 1, so (1,1) is out of reach
    double best = 1e9;
    for (int i = 0; i <= 100000; ++i) {
      const double u = static_cast<double>(i) / 100000.0;
      best = std::min(best,
                      (vec2(u * u, (1 - u) * (1 - u)) - vec2(1, 1)).norm());
    }
    CHECK(best > 0.9);
    const auto hm = finite_hull_membership(gens, vec2(1, 1), p, 1e-8, 16, rng);
    CHECK_FALSE(hm.found);
    CHECK(hm.residual > 0.9);
  }
  SUBCASE("dimension mismatch") {
    Vector q3(3);
    q3 << 1, 1, 1;
    CHECK_THROWS_AS(finite_hull_membership(gens, q3, p, 1e-8, 4, rng),
                    std::invalid_argument);
  }
  SUBCASE("three generators, multistart search") {
    const PointSet g3({vec2(1, 0), vec2(0, 1), vec2(-1, 0)});
    Vector t(3);
    t << 0.2, 0.2, 0.1;
    const double mass = std::sqrt(0.2) * 2 + std::sqrt(0.1);
    t /= mass * mass;  // normalize so sum sqrt(t_i) = 1
    const Vector q = g3.points() * t;
    const auto hm = finite_hull_membership(g3, q, p, 1e-6, 64, rng);
    CHECK(hm.found);
  }
}

TEST_SUITE_END();
