#include <doctest.h>

#include <fstream>

#include "circline/curvespec.hpp"
#include "circline/report.hpp"
#include "test_helpers.hpp"

using namespace circline;
using namespace circline::testing;

TEST_CASE("parse_curve_spec: preset form") {
  CurveSpec s = parse_curve_spec("# an ellipse\npreset = ellipse\nparams = [2, 1]\n");
  CHECK(s.is_preset);
  CHECK(s.preset == "ellipse");
  REQUIRE(s.params.size() == 2);
  CHECK(s.params[0] == 2.0);
  CHECK(s.params[1] == 1.0);
  auto c = build_curve(s);
  CHECK((c->eval(0, 0) - Vec2(2, 0)).norm() < 1e-14);
}

TEST_CASE("parse_curve_spec: coefficient form") {
  const char* text =
      "x.const = 0.1\n"
      "x.cos = [1.0, 0, 0.05]\n"
      "x.sin = [0, 0.02]\n"
      "y.const = -0.1\n"
      "y.cos = [0, 0.03]\n"
      "y.sin = [1.0]\n";
  CurveSpec s = parse_curve_spec(text);
  CHECK_FALSE(s.is_preset);
  CHECK(s.x.c0 == 0.1);
  REQUIRE(s.x.cos.size() == 3);
  CHECK(s.x.cos[2] == 0.05);
  CHECK(s.y.sin[0] == 1.0);
  auto c = build_curve(s);
  CHECK(c->degree() == 3);
}

TEST_CASE("parse_curve_spec: diagnostics carry line and column") {
  auto check_parse_error = [](const std::string& text, const std::string& needle) {
    try {
      (void)parse_curve_spec(text);
      FAIL("expected a parse error for: " << text);
    } catch (const Error& e) {
      CHECK(e.kind() == Error::Kind::Parse);
      CHECK(e.exit_code() == 2);
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  check_parse_error("preset = ellipse\nbogus = 3\n", "line 2");
  check_parse_error("preset = ellipse\nx.const = 1\n", "preset");
  check_parse_error("x.const = zzz\n", "line 1");
  check_parse_error("x.cos = [1, 2\n", "line 1");
  // params are validated when the curve is built, not at parse time
  CurveSpec bare = parse_curve_spec("preset = ellipse\n");
  CHECK_THROWS_AS((void)build_curve(bare), Error);
}

TEST_CASE("format_curve_spec round-trips bit-exactly") {
  for (auto& c : test_corpus(4)) {
    auto fit = fourier_fit(*c, c->degree());
    std::string text = format_curve_spec(fit.first);
    CurveSpec s = parse_curve_spec(text);
    auto back = build_curve(s);
    for (int i = 0; i < 64; ++i) {
      double t = two_pi * i / 64;
      CHECK((back->eval(t, 0) - fit.first.eval(t, 0)).norm() == 0.0);
    }
    CHECK(format_curve_spec(fit.first) == text);
  }
}

TEST_CASE("fourier_fit reproduces trigonometric curves exactly") {
  auto ell = make_ellipse(2.0, 1.0);
  auto [fit, resid] = fourier_fit(*ell, 1);
  CHECK(resid < 1e-12);
  for (int i = 0; i < 32; ++i) {
    double t = two_pi * i / 32;
    CHECK((fit.eval(t, 0) - ell->eval(t, 0)).norm() < 1e-12);
  }
  // fitting a reversed curve recovers a plain trigonometric form
  auto rev = std::make_shared<ReversedCurve>(ell);
  auto [fit2, resid2] = fourier_fit(*rev, 1);
  CHECK(resid2 < 1e-12);
  CHECK((fit2.eval(1.0, 0) - rev->eval(1.0, 0)).norm() < 1e-12);
  // under-resolved fit reports a real residual
  auto wav = make_wavy(1.0, 0.3, 6);
  auto [fit3, resid3] = fourier_fit(*wav, 2);
  CHECK(resid3 > 1e-3);
}

TEST_CASE("load_curve_spec reads files and reports missing ones") {
  std::string path = "/tmp/circline_spec_test.curve";
  {
    std::ofstream f(path);
    f << "preset = circle\nparams = [2.5]\n";
  }
  CurveSpec s = load_curve_spec(path);
  CHECK(s.preset == "circle");
  CHECK_THROWS_AS((void)load_curve_spec("/tmp/does_not_exist.curve"), Error);
}

TEST_CASE("report output is deterministic and stable") {
  auto make = [] {
    Report r;
    r.add("curve", "ellipse");
    r.add("radius", 1.0 / 3.0);
    r.add("count", 4);
    r.add("ok", true);
    r.add("center", Vec2(0.25, -1e-15));
    return r.str();
  };
  std::string a = make(), b = make();
  CHECK(a == b);
  CHECK(a.find("radius = 0.333333333333\n") != std::string::npos);
  CHECK(a.find("count = 4\n") != std::string::npos);
  CHECK(a.find("ok = true\n") != std::string::npos);

  CHECK(Report::num(0.5) == "0.5");
  CHECK(Report::num(1e100) == "1e+100");
}

TEST_CASE("fnv1a_hex is the reference FNV-1a 64") {
  // published test vectors
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}
