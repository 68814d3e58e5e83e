#include <doctest.h>

#include "circline/keylemma.hpp"
#include "test_helpers.hpp"

using namespace circline;
using namespace circline::testing;

TEST_CASE("find_inside_support on a circle returns immediately") {
  auto circ = normalize_orientation(make_circle(2.0));
  InsideSupportResult r = find_inside_support(*circ, 0.0);
  CHECK(param_distance(r.t, 0.0) > 1e-4);
  CHECK(classify_support(*circ, r.t, r.circ).kind == SupportKind::InsideSupport);
  CHECK(r.trace.steps.size() <= 1);
}

TEST_CASE("find_inside_support on the ellipse lands at a sharp vertex") {
  auto ell = normalize_orientation(make_ellipse(2.0, 1.0));
  double base = std::numbers::pi / 2;
  InsideSupportResult r = find_inside_support(*ell, base);
  double d0 = param_distance(r.t, 0.0);
  double dpi = param_distance(r.t, std::numbers::pi);
  CHECK(std::min(d0, dpi) < 1e-2);
  CHECK(param_distance(r.t, base) > 1e-4);
  CHECK(classify_support(*ell, r.t, r.circ, {}, 10.0).kind ==
        SupportKind::InsideSupport);
}

TEST_CASE("find_inside_support verifies on random curves, avoiding the base") {
  for (auto& c : test_corpus(6)) {
    for (double base : {0.0, 2.1}) {
      InsideSupportResult r = find_inside_support(*c, base);
      CHECK(param_distance(r.t, base) > 1e-4);
      CHECK(classify_support(*c, r.t, r.circ, {}, 10.0).kind ==
            SupportKind::InsideSupport);
      // trace invariants: arcs never contain the base strictly inside,
      // lengths decay, contacts lie on the recorded incircles
      double total = c->grid().total_length;
      double prev = std::numeric_limits<double>::infinity();
      for (const IterationStep& st : r.trace.steps) {
        CHECK(st.arc_len <= prev * 0.5 + 1e-9 * total);
        prev = st.arc_len;
        double eps_k = 1e-8 / c->grid().diameter;
        REQUIRE(!st.incircle.is_line(eps_k));
        Vec2 z = st.incircle.center();
        double rr = st.incircle.radius();
        CHECK(std::abs((c->eval(st.q, 0) - z).norm() - rr) <
              1e-5 * c->grid().diameter);
        CHECK(std::abs((c->eval(st.p, 0) - z).norm() - rr) <
              1e-5 * c->grid().diameter);
        // the contact bounds the chosen arc
        bool q_is_end = param_distance(st.arc.start, st.q) < 1e-9 ||
                        param_distance(st.arc.end(), st.q) < 1e-9;
        bool p_is_end = param_distance(st.arc.start, st.p) < 1e-9 ||
                        param_distance(st.arc.end(), st.p) < 1e-9;
        CHECK(q_is_end);
        CHECK(p_is_end);
        if (!st.arc.is_full()) {
          double margin = 1e-4;
          double db = param_distance(base, st.arc.start);
          double de = param_distance(base, st.arc.end());
          bool base_interior = st.arc.contains(base) && db > margin && de > margin;
          CHECK_FALSE(base_interior);
        }
      }
    }
  }
}

TEST_CASE("moon_in_puddle: big circle and fat ellipse") {
  auto circ = normalize_orientation(make_circle(2.0));
  MoonDisc m1 = moon_in_puddle(*circ);
  CHECK(m1.radius >= 1.0 - 1e-6);
  CHECK(m1.center.norm() < 2.0 - m1.radius + 1e-6);

  auto ell = normalize_orientation(make_ellipse(4.0, 2.0));
  MoonDisc m2 = moon_in_puddle(*ell);
  CHECK(m2.radius >= 1.0 - 1e-6);
  // unit disc fits: verify containment against a dense oracle
  double dmin = dense_min_distance(*ell, m2.center, 1000000);
  CHECK(dmin >= m2.radius - 1e-5);
  CHECK(point_in_region(*ell, m2.center).region == Region::Inside);
  // the supporting osculating circle is the disc boundary
  CHECK(classify_support(*ell, m2.support_param,
                         osculating_circline(*ell, m2.support_param), {}, 10.0)
            .kind == SupportKind::InsideSupport);
}

TEST_CASE("moon_in_puddle rejects curvature above one") {
  auto ell = normalize_orientation(make_ellipse(2.0, 1.0));  // max kappa = 2
  CHECK_THROWS_AS((void)moon_in_puddle(*ell), Error);
  try {
    (void)moon_in_puddle(*ell);
  } catch (const Error& e) {
    CHECK(e.kind() == Error::Kind::CurvatureTooLarge);
    CHECK(e.exit_code() == 3);
  }
}

TEST_CASE("moon_in_puddle on rescaled random curves") {
  for (auto& c : test_corpus(4, 6, 0.25, 50)) {
    auto f = std::dynamic_pointer_cast<const FourierCurve>(c);
    REQUIRE(f);
    double kmax = max_abs_curvature(*c).first;
    auto big = normalize_orientation(
        std::make_shared<FourierCurve>(f->scaled(kmax * 1.05)));
    MoonDisc m = moon_in_puddle(*big);
    CHECK(m.radius >= 1.0 - 1e-6);
    double dmin = dense_min_distance(*big, m.center, 200000);
    CHECK(dmin >= m.radius - 1e-4 * big->grid().diameter);
    CHECK(point_in_region(*big, m.center).region == Region::Inside);
  }
}

TEST_CASE("exercise_moon_rad: concentric circles and containment check") {
  auto inner = make_circle(1.0);
  auto outer = normalize_orientation(make_circle(3.0));
  MoonRadReport r = exercise_moon_rad(*inner, *outer);
  CHECK(r.R == doctest::Approx(3.0).epsilon(1e-5));
  CHECK(r.max_abs_curvature == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.holds);  // 1 >= 1/3

  // not contained
  auto big = make_circle(5.0);
  CHECK_THROWS_AS((void)exercise_moon_rad(*big, *outer), Error);
}

TEST_CASE("exercise_moon_rad with a figure-eight inside an ellipse") {
  // scaled figure-eight (non-simple is allowed for the inner curve)
  FourierCurve::Coeffs x{0.0, {0.0, 0.0}, {0.0, 0.6}};
  FourierCurve::Coeffs y{0.0, {0.0, 0.0}, {0.6, 0.0}};
  auto eight = std::make_shared<FourierCurve>(x, y);
  auto outer = normalize_orientation(make_ellipse(2.0, 1.0));
  MoonRadReport r = exercise_moon_rad(*eight, *outer);
  CHECK(r.R == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.max_abs_curvature >= 1.0 / r.R - 1e-6);
  CHECK(r.holds);
}

TEST_CASE("exercise_moon_rad holds across the random corpus") {
  auto outer = normalize_orientation(make_circle(1.5));
  for (auto& c : test_corpus(5, 5, 0.15, 300)) {
    MoonRadReport r = exercise_moon_rad(*c, *outer);
    CHECK(r.holds);
    CHECK(r.max_abs_curvature >= 1.0 / r.R - 1e-6);
  }
}
