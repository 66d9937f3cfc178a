#include "doctest.h"
#include "pconvex/gauge.hpp"
#include "test_util.hpp"

using namespace pconvex;
using pctest::vec2;

TEST_SUITE_BEGIN("gauge");

TEST_CASE("eval_gauge matches the closed form on the unit p-ball") {
  const auto body = pctest::unit_pball(0.5);
  const double tol = 1e-10;

  CHECK(eval_gauge(body, vec2(0.25, 0.25), tol).value ==
        doctest::Approx(1.0).epsilon(0).scale(1).epsilon(1e-9));
  CHECK(eval_gauge(body, Vector::Zero(2), tol).value == 0.0);
  // homogeneity: x = (4,0) is (1,0) scaled by 4, gauge 4^0.5 * 1
  CHECK(eval_gauge(body, vec2(4, 0), tol).value == doctest::Approx(2.0));
}

TEST_CASE("eval_gauge agrees with closed forms on every built-in body") {
  RandomSource rng(31);
  for (const double p : {0.25, 0.5, 0.75, 1.0}) {
    for (const char* key : {"pball", "euclidean_disk", "box"}) {
      const auto body =
          registry::make_body({{"key", key}}, 2, PExponent(p));
      REQUIRE(body.has_closed_form());
      for (int k = 0; k < 200; ++k) {
        const Vector x = rng.box_point(Vector::Zero(2), 2.0);
        const double byref = body.closed_form()(x);
        const double bybisect = eval_gauge(body, x, 1e-10).value;
        CHECK(std::abs(byref - bybisect) <= 1e-9 * (1.0 + byref));
      }
    }
  }
}

TEST_CASE("gauge homogeneity along rays") {
  RandomSource rng(37);
  const auto body = pctest::unit_pball(0.5);
  const double tol = 1e-10;
  for (int k = 0; k < 200; ++k) {
    const Vector x = rng.gauss_vector(2);
    const double alpha = rng.uniform(0.1, 3.0);
    const double lhs = eval_gauge(body, alpha * x, tol).value;
    const double rhs = std::pow(alpha, 0.5) * eval_gauge(body, x, tol).value;
    CHECK(std::abs(lhs - rhs) <= 3.0 * tol + 1e-9 * rhs);
  }
}

TEST_CASE("gauge axioms verify on built-in bodies") {
  const auto rep = verify_gauge_axioms(pctest::unit_pball(0.5), 1000, 41);
  CHECK(rep.passed());
  CHECK(rep.origin_ok);
  CHECK(rep.negative_lambda_checked);  // built-ins are circled
  CHECK(rep.max_subadditivity_excess <= 1e-8);
}

TEST_CASE("subadditivity sweep: zero violations on 10^4 pairs per body") {
  for (const char* key : {"pball", "euclidean_disk", "box"}) {
    const auto body = registry::make_body({{"key", key}}, 2, PExponent(0.5));
    const auto rep = verify_gauge_axioms(body, 10000, 45);
    INFO("body ", key);
    CHECK(rep.subadditive);
    CHECK(rep.subadditivity_checks == 10000);
    CHECK(rep.homogeneous);
  }
}

TEST_CASE("hand-checked axiom instances at p = 0.5") {
  const auto body = pctest::unit_pball(0.5);
  // equality edge of subadditivity
  const double lhs = body.gauge(vec2(0.25, 0.25));
  const double rhs = body.gauge(vec2(0.25, 0)) + body.gauge(vec2(0, 0.25));
  CHECK(lhs == doctest::Approx(1.0));
  CHECK(rhs == doctest::Approx(1.0));
  CHECK(lhs <= rhs + 1e-12);
  // circled homogeneity with a negative factor
  CHECK(body.gauge(-2.0 * vec2(0.25, 0)) ==
        doctest::Approx(std::sqrt(2.0) * 0.5));
}

TEST_CASE("asymmetric oracle bodies skip the negative-lambda check") {
  // a shifted disk containing 0: convex, hence p-convex, but not circled
  const Vector c = 0.2 * Vector::Unit(2, 0);
  const auto egg = [c](const Vector& x) { return (x - c).norm() <= 1.0; };
  const PBody body(egg, PExponent(0.5), 1.3, 2);
  const auto rep = verify_gauge_axioms(body, 300, 47);
  CHECK(rep.passed());
  CHECK_FALSE(rep.negative_lambda_checked);
}

TEST_CASE("ball sandwich holds on built-in bodies") {
  for (const double p : {0.25, 0.5, 1.0}) {
    const auto rep = ball_sandwich_check(pctest::unit_pball(p), 1000, 43);
    CHECK(rep.passed);
    CHECK(rep.strict_inside > 0);
    CHECK(rep.members > 0);
  }
}

TEST_CASE("gauge exceeds 1 exactly off the closed body") {
  RandomSource rng(47);
  const auto body = pctest::unit_pball(0.5);
  for (int k = 0; k < 500; ++k) {
    const Vector x = rng.box_point(Vector::Zero(2), 1.5);
    const double g = eval_gauge(body, x, 1e-10).value;
    if (g > 1.0 + 1e-9) CHECK_FALSE(body.contains(x));
    if (g < 1.0 - 1e-9) CHECK(body.contains(x));
  }
}

TEST_CASE("construction validates the body contract") {
  const PExponent p(0.5);
  SUBCASE("origin must be a member") {
    const auto off = [](const Vector& x) {
      return (x - pctest::vec2(5, 0)).norm() <= 0.1;
    };
    CHECK_THROWS_AS(PBody(off, p, 6.0, 2), std::invalid_argument);
  }
  SUBCASE("members outside the bound radius are rejected") {
    const auto everything = [](const Vector&) { return true; };
    CHECK_THROWS_AS(PBody(everything, p, 1.0, 2), std::invalid_argument);
  }
  SUBCASE("non-p-convex oracle is rejected") {
    // the euclidean disk NOT containing 0 fails the interior probe before
    // convexity; an annulus fails the convexity sample
    const auto annulus = [](const Vector& x) {
      const double n = x.norm();
      return n <= 0.05 || (n >= 0.5 && n <= 1.0);
    };
    CHECK_THROWS_AS(PBody(annulus, p, 1.0, 2), std::invalid_argument);
  }
  SUBCASE("non-absorbing oracle exhausts the bracket cap") {
    BodyOptions opts;
    opts.validate = false;  // deliberately broken oracle
    const auto shifted = [](const Vector& x) { return x[1] <= -1.0; };
    const PBody body(shifted, p, 1.0, 2, opts);
    CHECK_THROWS_AS(eval_gauge(body, vec2(0, 5), 1e-10), std::runtime_error);
  }
}

TEST_CASE("boundary_point normalizes gauge to 1") {
  RandomSource rng(53);
  for (const double p : {0.25, 0.75, 1.0}) {
    const auto body = pctest::unit_pball(p);
    for (int k = 0; k < 100; ++k) {
      const Vector b = body.boundary_point(rng.direction(2));
      CHECK(body.gauge(b) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_SUITE_END();
