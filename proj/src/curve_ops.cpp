#include "circline/curve_ops.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace circline {

namespace {

void check_speed(const Vec2& d1, double eps_reg, double t) {
  if (d1.norm() < eps_reg)
    throw Error(Error::Kind::DegenerateSpeed,
                "parametric speed below eps_reg at t=" + std::to_string(t));
}

// Golden-section minimization of f over [a,b]; returns argmin.
template <class F>
double golden_min(F&& f, double a, double b, double xtol) {
  constexpr double gr = 0.6180339887498949;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

template <class F>
double adaptive_simpson_rec(F& f, double a, double b, double fa, double fm,
                            double fb, double whole, double eps, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

template <class F>
double adaptive_simpson(F&& f, double a, double b, double eps) {
  if (b <= a) return 0.0;
  // seed with a few panels so periodic integrands are not underresolved
  int panels = 8;
  double h = (b - a) / panels, total = 0.0;
  for (int i = 0; i < panels; ++i) {
    double pa = a + i * h, pb = pa + h, pm = 0.5 * (pa + pb);
    double fa = f(pa), fm = f(pm), fb = f(pb);
    double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
    total += adaptive_simpson_rec(f, pa, pb, fa, fm, fb, whole, eps / panels, 30);
  }
  return total;
}

}  // namespace

double signed_curvature(const PlaneCurve& curve, double t, const Tolerances& tol) {
  Vec2 d[4];
  curve.derivatives(wrap_param(t), d, 2);
  check_speed(d[1], tol.eps_reg, t);
  double v2 = d[1].squaredNorm();
  return cross2(d[1], d[2]) / (v2 * std::sqrt(v2));
}

double curvature_derivative(const PlaneCurve& curve, double t, const Tolerances& tol) {
  Vec2 d[4];
  curve.derivatives(wrap_param(t), d, 3);
  check_speed(d[1], tol.eps_reg, t);
  double v2 = d[1].squaredNorm();
  double v = std::sqrt(v2);
  double c = cross2(d[1], d[2]);
  double cp = cross2(d[1], d[3]);
  return cp / (v2 * v) - 3.0 * c * d[1].dot(d[2]) / (v2 * v2 * v);
}

double arc_length(const PlaneCurve& curve, const Arc& arc, const Tolerances& tol) {
  double eps = tol.eps_quad_rel * curve.grid().total_length;
  auto speed = [&](double u) { return curve.eval(u, 1).norm(); };
  return adaptive_simpson(speed, arc.start, arc.start + arc.span, eps);
}

double param_at_length(const PlaneCurve& curve, const Arc& arc, double s,
                       const Tolerances& tol) {
  double total = arc_length(curve, arc, tol);
  s = std::clamp(s, 0.0, total);
  double lo = 0.0, hi = arc.span;
  double u = arc.span * (s / total);  // initial guess
  double eps = tol.eps_quad_rel * curve.grid().total_length;
  for (int it = 0; it < 60; ++it) {
    Arc sub{arc.start, std::max(u, 1e-300)};
    double err = arc_length(curve, sub, tol) - s;
    if (err > 0)
      hi = u;
    else
      lo = u;
    if (std::abs(err) <= eps || hi - lo < 1e-14 * arc.span) break;
    double sp = curve.eval(arc.start + u, 1).norm();
    double step = err / std::max(sp, tol.eps_reg);
    double next = u - step;
    if (next <= lo || next >= hi) next = 0.5 * (lo + hi);
    u = next;
  }
  return wrap_param(arc.start + u);
}

double arc_midpoint(const PlaneCurve& curve, const Arc& arc, const Tolerances& tol) {
  double half = 0.5 * arc_length(curve, arc, tol);
  return param_at_length(curve, arc, half, tol);
}

double signed_area(const PlaneCurve& curve) {
  const GridCache& g = curve.grid();
  double h = two_pi / g.n, a = 0.0;
  for (int i = 0; i < g.n; ++i) a += cross2(g.pos[i], g.d1[i]);
  return 0.5 * a * h;
}

double total_turning(const PlaneCurve& curve) {
  const GridCache& g = curve.grid();
  double h = two_pi / g.n, s = 0.0;
  for (int i = 0; i < g.n; ++i) s += g.kappa[i] * g.speed[i];
  return s * h;
}

CurvePtr normalize_orientation(CurvePtr curve, const Tolerances& tol) {
  const GridCache& g = curve->grid();
  double a = signed_area(*curve);
  double eps = tol.eps_geo_rel * g.diameter;
  if (std::abs(a) < eps * eps)
    throw Error(Error::Kind::ZeroArea, "curve has (near) zero enclosed area");
  if (a > 0) return curve;
  if (auto rev = std::dynamic_pointer_cast<const ReversedCurve>(curve))
    return rev->base();
  return std::make_shared<ReversedCurve>(std::move(curve));
}

namespace {

// Refine an extremum of |p - gamma(t)| around grid node i.
double refine_dist_extremum(const PlaneCurve& curve, const Vec2& p, double t0,
                            double h, bool maximize) {
  auto f = [&](double u) {
    double d = (curve.eval(u, 0) - p).norm();
    return maximize ? -d : d;
  };
  return wrap_param(golden_min(f, t0 - h, t0 + h, 1e-12));
}

}  // namespace

std::pair<double, double> nearest_point(const PlaneCurve& curve, const Vec2& p) {
  const GridCache& g = curve.grid();
  int n = g.n;
  std::vector<double> d2(n);
  for (int i = 0; i < n; ++i) d2[i] = (g.pos[i] - p).squaredNorm();
  double h = two_pi / n;
  double best_t = 0.0, best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (d2[i] <= d2[(i + 1) % n] && d2[i] <= d2[(i + n - 1) % n]) {
      double t = refine_dist_extremum(curve, p, g.t[i], h, false);
      double d = (curve.eval(t, 0) - p).norm();
      if (d < best_d) {
        best_d = d;
        best_t = t;
      }
    }
  }
  return {best_t, best_d};
}

std::pair<double, double> farthest_point(const PlaneCurve& curve, const Vec2& p) {
  const GridCache& g = curve.grid();
  int n = g.n;
  std::vector<double> d2(n);
  for (int i = 0; i < n; ++i) d2[i] = (g.pos[i] - p).squaredNorm();
  double h = two_pi / n;
  double best_t = 0.0, best_d = -1.0;
  for (int i = 0; i < n; ++i) {
    if (d2[i] >= d2[(i + 1) % n] && d2[i] >= d2[(i + n - 1) % n]) {
      double t = refine_dist_extremum(curve, p, g.t[i], h, true);
      double d = (curve.eval(t, 0) - p).norm();
      if (d > best_d) {
        best_d = d;
        best_t = t;
      }
    }
  }
  return {best_t, best_d};
}

int winding_number(const PlaneCurve& curve, const Vec2& p) {
  const GridCache& g = curve.grid();
  int wn = 0;
  for (int i = 0; i < g.n; ++i) {
    const Vec2& a = g.pos[i];
    const Vec2& b = g.pos[(i + 1) % g.n];
    if (a.y() <= p.y()) {
      if (b.y() > p.y() && cross2(b - a, p - a) > 0) ++wn;
    } else {
      if (b.y() <= p.y() && cross2(b - a, p - a) < 0) --wn;
    }
  }
  return wn;
}

RegionVerdict point_in_region(const PlaneCurve& curve, const Vec2& p,
                              const Tolerances& tol) {
  auto [t, d] = nearest_point(curve, p);
  double eps = tol.eps_geo_rel * curve.grid().diameter;
  if (d < eps) return {Region::Boundary, d, t};
  Vec2 tan = curve.eval(t, 1);
  Region r = cross2(tan, p - curve.eval(t, 0)) > 0 ? Region::Inside : Region::Outside;
  return {r, d, t};
}

std::pair<double, double> max_abs_curvature(const PlaneCurve& curve) {
  const GridCache& g = curve.grid();
  int n = g.n;
  double h = two_pi / n;
  double best_v = -1.0, best_t = 0.0;
  for (int i = 0; i < n; ++i) {
    double a = std::abs(g.kappa[i]);
    if (a >= std::abs(g.kappa[(i + 1) % n]) && a >= std::abs(g.kappa[(i + n - 1) % n])) {
      auto f = [&](double u) { return -std::abs(signed_curvature(curve, u)); };
      double t = wrap_param(golden_min(f, g.t[i] - h, g.t[i] + h, 1e-12));
      double v = std::abs(signed_curvature(curve, t));
      if (v > best_v) {
        best_v = v;
        best_t = t;
      }
    }
  }
  return {best_v, best_t};
}

// --- self-intersection -----------------------------------------------------

namespace {

struct ParamBox {
  double a, w;  // interval [a, a+w]
  Eigen::AlignedBox2d box;
};

ParamBox make_box(const PlaneCurve& curve, double a, double w, double max_speed) {
  ParamBox pb{a, w, {}};
  const int k = 8;
  for (int i = 0; i <= k; ++i) pb.box.extend(curve.eval(a + w * i / k, 0));
  double pad = max_speed * (w / k) * 0.75;
  pb.box.min() -= Vec2(pad, pad);
  pb.box.max() += Vec2(pad, pad);
  return pb;
}

// 2D Newton on gamma(s) - gamma(t) = 0; returns true on convergence.
bool newton_pair(const PlaneCurve& curve, double& s, double& t, double eps_len) {
  for (int it = 0; it < 30; ++it) {
    Vec2 F = curve.eval(s, 0) - curve.eval(t, 0);
    if (F.norm() < 1e-3 * eps_len) return true;
    Eigen::Matrix2d J;
    J.col(0) = curve.eval(s, 1);
    J.col(1) = -curve.eval(t, 1);
    if (std::abs(J.determinant()) < 1e-12) return false;
    Eigen::Vector2d step = J.partialPivLu().solve(F);
    if (!step.allFinite() || step.norm() > 1.0) return false;
    s = wrap_param(s - step[0]);
    t = wrap_param(t - step[1]);
  }
  return (curve.eval(s, 0) - curve.eval(t, 0)).norm() < eps_len;
}

}  // namespace

SimplicityVerdict is_simple(const PlaneCurve& curve, const Tolerances& tol) {
  const GridCache& g = curve.grid();
  double eps_len = tol.eps_geo_rel * g.diameter;
  double wmin = std::max(4.0 * tol.delta_param, 2e-3);

  // Over a parameter window where the tangent turns by < 0.5 rad, the chord
  // length is >= cos(0.5) * min_speed * |s - t|, so no pair separated by more
  // than delta_param can come within eps_len. Such windows are pruned whole.
  double max_turn_rate = 0.0;
  for (int i = 0; i < g.n; ++i)
    max_turn_rate = std::max(max_turn_rate, std::abs(g.kappa[i]) * g.speed[i]);
  double u_max = 0.0;
  if (0.8 * g.min_speed * tol.delta_param > eps_len && max_turn_rate > 0.0)
    u_max = std::min(0.5, 0.4 / max_turn_rate);

  struct Pair {
    ParamBox a, b;
    bool same;
  };
  std::vector<Pair> stack;
  stack.push_back({make_box(curve, 0.0, two_pi, g.max_speed), {}, true});

  auto leaf_check = [&](const ParamBox& A, const ParamBox& B,
                        SimplicityVerdict& out) -> bool {
    // coarse feasible sample, then Newton / golden refinement
    const int k = 5;
    double bs = -1, bt = -1, bd = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= k; ++j) {
        double s = A.a + A.w * i / k, t = B.a + B.w * j / k;
        if (param_distance(s, t) <= tol.delta_param) continue;
        double d = (curve.eval(s, 0) - curve.eval(t, 0)).norm();
        if (d < bd) {
          bd = d;
          bs = s;
          bt = t;
        }
      }
    if (bs < 0) return false;
    // Lipschitz lower bound over the cell pair: if even the best sample is
    // far, no intersection can hide between samples
    double cell = g.max_speed * (A.w + B.w) / k;
    if (bd > eps_len + cell) return false;
    double s = bs, t = bt;
    if (newton_pair(curve, s, t, eps_len) &&
        param_distance(s, t) > tol.delta_param &&
        (curve.eval(s, 0) - curve.eval(t, 0)).norm() < eps_len) {
      out = {false, s, t};
      return true;
    }
    // tangential fallback: alternate golden minimization
    s = bs;
    t = bt;
    for (int round = 0; round < 12; ++round) {
      s = wrap_param(golden_min(
          [&](double u) { return (curve.eval(u, 0) - curve.eval(t, 0)).norm(); },
          s - A.w / k, s + A.w / k, 1e-12));
      t = wrap_param(golden_min(
          [&](double u) { return (curve.eval(s, 0) - curve.eval(u, 0)).norm(); },
          t - B.w / k, t + B.w / k, 1e-12));
    }
    if (param_distance(s, t) > tol.delta_param &&
        (curve.eval(s, 0) - curve.eval(t, 0)).norm() < eps_len) {
      out = {false, s, t};
      return true;
    }
    return false;
  };

  SimplicityVerdict verdict;
  while (!stack.empty()) {
    Pair pr = stack.back();
    stack.pop_back();
    if (pr.same) {
      if (pr.a.w <= wmin || pr.a.w <= u_max) continue;  // short arcs are simple
      double hw = 0.5 * pr.a.w;
      ParamBox a1 = make_box(curve, pr.a.a, hw, g.max_speed);
      ParamBox a2 = make_box(curve, pr.a.a + hw, hw, g.max_speed);
      stack.push_back({a1, {}, true});
      stack.push_back({a2, {}, true});
      stack.push_back({a1, a2, false});
      continue;
    }
    if (!pr.a.box.intersects(pr.b.box)) continue;
    {
      // cyclic hull of the two parameter intervals
      double a1 = pr.a.a, a2 = pr.a.a + pr.a.w;
      double b1 = pr.b.a, b2 = pr.b.a + pr.b.w;
      if (a1 > b1) {
        std::swap(a1, b1);
        std::swap(a2, b2);
      }
      double hull = std::max(a2, b2) - a1;
      if (b1 >= a2) hull = std::min(hull, two_pi - b1 + a2);
      if (hull <= u_max) continue;
    }
    if (pr.a.w <= wmin && pr.b.w <= wmin) {
      if (leaf_check(pr.a, pr.b, verdict)) return verdict;
      continue;
    }
    if (pr.a.w >= pr.b.w) {
      double hw = 0.5 * pr.a.w;
      stack.push_back({make_box(curve, pr.a.a, hw, g.max_speed), pr.b, false});
      stack.push_back({make_box(curve, pr.a.a + hw, hw, g.max_speed), pr.b, false});
    } else {
      double hw = 0.5 * pr.b.w;
      stack.push_back({pr.a, make_box(curve, pr.b.a, hw, g.max_speed), false});
      stack.push_back({pr.a, make_box(curve, pr.b.a + hw, hw, g.max_speed), false});
    }
  }
  return {true, 0.0, 0.0};
}

// --- presets ----------------------------------------------------------------

CurvePtr make_circle(double radius) {
  FourierCurve::Coeffs x{0.0, {radius}, {0.0}};
  FourierCurve::Coeffs y{0.0, {0.0}, {radius}};
  return std::make_shared<FourierCurve>(std::move(x), std::move(y));
}

CurvePtr make_ellipse(double a, double b) {
  FourierCurve::Coeffs x{0.0, {a}, {0.0}};
  FourierCurve::Coeffs y{0.0, {0.0}, {b}};
  return std::make_shared<FourierCurve>(std::move(x), std::move(y));
}

CurvePtr make_limacon(double a, double b) {
  FourierCurve::Coeffs x{0.5 * b, {a, 0.5 * b}, {0.0, 0.0}};
  FourierCurve::Coeffs y{0.0, {0.0, 0.0}, {a, 0.5 * b}};
  return std::make_shared<FourierCurve>(std::move(x), std::move(y));
}

CurvePtr make_wavy(double r0, double amp, int lobes) {
  if (lobes < 1) throw Error(Error::Kind::Parse, "wavy: lobes must be >= 1");
  int m = lobes + 1;
  FourierCurve::Coeffs x, y;
  x.cos.assign(m, 0.0);
  x.sin.assign(m, 0.0);
  y.cos.assign(m, 0.0);
  y.sin.assign(m, 0.0);
  x.cos[0] += r0;
  y.sin[0] += r0;
  x.cos[lobes] += 0.5 * amp;      // cos((n+1-1+1)t) index: harmonic n+1 at [lobes]
  y.sin[lobes] += 0.5 * amp;
  if (lobes == 1) {
    x.c0 += 0.5 * amp;
  } else {
    x.cos[lobes - 2] += 0.5 * amp;  // harmonic n-1
    y.sin[lobes - 2] -= 0.5 * amp;
  }
  return std::make_shared<FourierCurve>(std::move(x), std::move(y));
}

CurvePtr make_fourier_random(int degree, double amplitude, std::uint64_t seed,
                             const Tolerances& tol) {
  if (degree < 1) throw Error(Error::Kind::Parse, "fourier_random: degree must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    FourierCurve::Coeffs x, y;
    x.cos.assign(degree, 0.0);
    x.sin.assign(degree, 0.0);
    y.cos.assign(degree, 0.0);
    y.sin.assign(degree, 0.0);
    x.cos[0] = 1.0;
    y.sin[0] = 1.0;
    for (int j = 1; j <= degree; ++j) {
      double sc = amplitude / (j * std::sqrt(double(j)));
      x.cos[j - 1] += sc * uni(rng);
      x.sin[j - 1] += sc * uni(rng);
      y.cos[j - 1] += sc * uni(rng);
      y.sin[j - 1] += sc * uni(rng);
    }
    auto c = std::make_shared<FourierCurve>(std::move(x), std::move(y));
    if (c->grid().min_speed < tol.eps_reg) continue;
    if (!is_simple(*c, tol).simple) continue;
    return c;
  }
  throw Error(Error::Kind::RejectionExhausted,
              "fourier_random: no simple regular curve in 10000 draws");
}

CurvePtr preset_curve(const std::string& name, const std::vector<double>& params,
                      const Tolerances& tol) {
  auto need = [&](std::size_t n) {
    if (params.size() != n)
      throw Error(Error::Kind::Parse,
                  "preset '" + name + "' expects " + std::to_string(n) + " parameter(s)");
  };
  if (name == "circle") {
    need(1);
    return make_circle(params[0]);
  }
  if (name == "ellipse") {
    need(2);
    return make_ellipse(params[0], params[1]);
  }
  if (name == "limacon") {
    need(2);
    return make_limacon(params[0], params[1]);
  }
  if (name == "wavy") {
    need(3);
    return make_wavy(params[0], params[1], int(std::lround(params[2])));
  }
  if (name == "fourier_random") {
    need(3);
    return make_fourier_random(int(std::lround(params[0])), params[1],
                               std::uint64_t(std::llround(params[2])), tol);
  }
  throw Error(Error::Kind::Parse, "unknown preset '" + name + "'");
}

}  // namespace circline
