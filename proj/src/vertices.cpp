#include "circline/vertices.hpp"

#include <algorithm>
#include <cmath>

namespace circline {

VertexList find_vertices(const PlaneCurve& curve, const Tolerances& tol) {
  const GridCache& g = curve.grid();
  int n = g.n;
  VertexList out;

  double max_dk = 0.0;
  for (double v : g.dkappa) max_dk = std::max(max_dk, std::abs(v));
  if (max_dk < 1e-9) {
    out.constant_curvature = true;
    return out;
  }

  struct Root {
    double t;
    VertexTag tag;
  };
  std::vector<Root> roots;
  for (int i = 0; i < n; ++i) {
    double a = g.dkappa[i], b = g.dkappa[(i + 1) % n];
    if (a == 0.0) {
      VertexTag tag = (g.dkappa[(i + n - 1) % n] > 0 && b < 0) ? VertexTag::LocalMax
                      : (g.dkappa[(i + n - 1) % n] < 0 && b > 0)
                          ? VertexTag::LocalMin
                          : VertexTag::Degenerate;
      roots.push_back({g.t[i], tag});
      continue;
    }
    if (a * b < 0.0) {
      double lo = g.t[i], hi = g.t[i] + two_pi / n;
      double flo = a;
      while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        double fm = curvature_derivative(curve, mid, tol);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((flo > 0) == (fm > 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      double t = wrap_param(0.5 * (lo + hi));
      roots.push_back({t, a > 0 ? VertexTag::LocalMax : VertexTag::LocalMin});
    }
  }
  std::sort(roots.begin(), roots.end(),
            [](const Root& x, const Root& y) { return x.t < y.t; });

  // merge clusters within delta_param (cyclically) as degenerate
  std::vector<Vertex> merged;
  std::size_t i = 0;
  while (i < roots.size()) {
    std::size_t j = i + 1;
    while (j < roots.size() && roots[j].t - roots[j - 1].t < tol.delta_param) ++j;
    Vertex v;
    if (j - i == 1) {
      v.t = roots[i].t;
      v.tag = roots[i].tag;
    } else {
      double sum = 0.0;
      for (std::size_t k = i; k < j; ++k) sum += roots[k].t;
      v.t = sum / double(j - i);
      v.tag = VertexTag::Degenerate;
    }
    v.kappa = signed_curvature(curve, v.t, tol);
    merged.push_back(v);
    i = j;
  }
  if (merged.size() > 1 &&
      param_distance(merged.front().t, merged.back().t) < tol.delta_param) {
    merged.front().tag = VertexTag::Degenerate;
    merged.pop_back();
  }
  out.vertices = std::move(merged);
  return out;
}

namespace {

// Snap a verified support parameter onto the nearest root of kappa'. The
// bisection procedure stops as soon as classification succeeds, which can be
// a few hundredths away from the vertex itself.
double polish_to_vertex(const PlaneCurve& curve, double t, SupportKind want,
                        const Tolerances& tol) {
  auto f = [&](double u) { return curvature_derivative(curve, u, tol); };
  const double h = 1e-3;
  double lo = 0.0, hi = 0.0;
  bool found = false;
  for (int k = 0; k < 100 && !found; ++k) {
    for (double a : {t + k * h, t - (k + 1) * h}) {
      if (f(a) * f(a + h) < 0) {
        lo = a;
        hi = a + h;
        found = true;
        break;
      }
    }
  }
  if (!found) return t;
  double flo = f(lo);
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (lo + hi), fm = f(mid);
    if ((flo > 0) == (fm > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double polished = wrap_param(0.5 * (lo + hi));
  SupportVerdict v = classify_support(
      curve, polished, osculating_circline(curve, polished, tol), tol, 10.0);
  return v.kind == want ? polished : t;
}

}  // namespace

FourVertexReport four_vertex_report(CurvePtr curve, const Tolerances& tol) {
  FourVertexReport rep;
  VertexList vl = find_vertices(*curve, tol);
  if (vl.constant_curvature) {
    rep.dense_support = true;
    rep.inside = {0.0, std::numbers::pi};
    rep.outside = {0.5 * std::numbers::pi, 1.5 * std::numbers::pi};
    return rep;
  }

  InsideSupportResult in1 = find_inside_support(*curve, 0.0, tol);
  double t1 = polish_to_vertex(*curve, in1.t, SupportKind::InsideSupport, tol);
  InsideSupportResult in2 = find_inside_support(*curve, t1, tol);
  double t2 = polish_to_vertex(*curve, in2.t, SupportKind::InsideSupport, tol);
  rep.inside = {t1, t2};

  InscribedDisc disc = largest_inscribed_disc(*curve, tol);
  rep.inversion_center = disc.center;
  rep.inversion_radius = disc.radius;
  CurvePtr inv = normalize_orientation(
      invert_curve(disc.center, disc.radius, curve, tol), tol);
  bool reversed = std::dynamic_pointer_cast<const ReversedCurve>(inv) != nullptr;
  auto map_back = [&](double t) { return reversed ? wrap_param(two_pi - t) : t; };

  InsideSupportResult o1 = find_inside_support(*inv, 0.0, tol);
  InsideSupportResult o2 = find_inside_support(*inv, o1.t, tol);
  for (double traw : {map_back(o1.t), map_back(o2.t)}) {
    double ti = polish_to_vertex(*curve, traw, SupportKind::OutsideSupport, tol);
    SupportVerdict v =
        classify_support(*curve, ti, osculating_circline(*curve, ti, tol), tol, 10.0);
    if (v.kind != SupportKind::OutsideSupport)
      throw Error(Error::Kind::NoConvergence,
                  "outside-support verification failed at t=" + std::to_string(ti) +
                      " (inside points " + std::to_string(t1) + ", " +
                      std::to_string(t2) + ")");
    rep.outside.push_back(ti);
  }

  std::vector<double> all = rep.inside;
  all.insert(all.end(), rep.outside.begin(), rep.outside.end());
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = a + 1; b < all.size(); ++b)
      if (param_distance(all[a], all[b]) < tol.delta_param)
        throw Error(Error::Kind::NoConvergence,
                    "support points not pairwise separated in parameter");
  return rep;
}

NestingVerdict tait_kneser_check(const PlaneCurve& curve, const Arc& arc,
                                 const Tolerances& tol) {
  const GridCache& g = curve.grid();
  double eps_geo = tol.eps_geo_rel * g.diameter;

  const int M = 64;
  int sign_dk = 0, sign_k = 0;
  for (int i = 0; i <= M; ++i) {
    double t = arc.at(double(i) / M);
    double dk = curvature_derivative(curve, t, tol);
    double k = signed_curvature(curve, t, tol);
    if (std::abs(dk) < 1e-8)
      throw Error(Error::Kind::NotMonotone,
                  "|kappa'| below monotonicity threshold on the arc");
    int s = dk > 0 ? 1 : -1;
    if (sign_dk == 0) sign_dk = s;
    if (s != sign_dk)
      throw Error(Error::Kind::NotMonotone, "kappa' changes sign on the arc");
    int sk = k > 0 ? 1 : (k < 0 ? -1 : 0);
    if (sk == 0)
      throw Error(Error::Kind::NotMonotone, "kappa vanishes on the arc");
    if (sign_k == 0) sign_k = sk;
    if (sk != sign_k)
      throw Error(Error::Kind::NotMonotone, "kappa changes sign on the arc");
  }

  const int P = 8;  // 9 sample points, all 36 ordered pairs
  std::vector<Circline> oc(P + 1);
  for (int i = 0; i <= P; ++i)
    oc[i] = osculating_circline(curve, arc.at(double(i) / P), tol);
  for (int i = 0; i <= P; ++i)
    for (int j = i + 1; j <= P; ++j) {
      const Circline &a = oc[i], &b = oc[j];
      double ra = a.radius(), rb = b.radius();
      const Circline& big = ra >= rb ? a : b;
      const Circline& small = ra >= rb ? b : a;
      double dc = (big.center() - small.center()).norm();
      // nested within eps_geo: near the arc ends the gap closes at rate
      // kappa', so strict nesting is only resolvable up to tolerance
      if (!(dc + small.radius() < big.radius() + eps_geo))
        return {false, arc.at(double(i) / P), arc.at(double(j) / P)};
    }
  return {true, 0.0, 0.0};
}

CrossingReport crossing_vertex_check(const PlaneCurve& curve, const Circline& circle,
                                     const Tolerances& tol) {
  const GridCache& g = curve.grid();
  double eps_k = tol.eps_k_rel / g.diameter;
  if (circle.is_line(eps_k))
    throw Error(Error::Kind::NotTangent, "crossing check requires a circle, not a line");
  Vec2 z = circle.center();
  double rho = circle.radius();

  auto side = [&](double t) { return (curve.eval(t, 0) - z).norm() - rho; };

  CrossingReport rep;
  int n = g.n;
  for (int i = 0; i < n; ++i) {
    double a = side(g.t[i]);
    double b = side(g.t[i] + two_pi / n);
    if (a == 0.0 || a * b >= 0.0) {
      if (a == 0.0) rep.crossing_params.push_back(g.t[i]);
      continue;
    }
    double lo = g.t[i], hi = g.t[i] + two_pi / n, flo = a;
    while (hi - lo > 1e-12) {
      double mid = 0.5 * (lo + hi);
      double fm = side(mid);
      if ((flo > 0) == (fm > 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    rep.crossing_params.push_back(wrap_param(0.5 * (lo + hi)));
  }

  // transversality: angle between curve tangent and circle tangent
  for (double t : rep.crossing_params) {
    Vec2 tan = curve.eval(t, 1).normalized();
    Vec2 radial = (curve.eval(t, 0) - z).normalized();
    double s = std::abs(tan.dot(radial));  // sin of angle to the circle tangent
    if (s < std::sin(1e-3))
      throw Error(Error::Kind::TangentialIntersection,
                  "non-transversal intersection at t=" + std::to_string(t));
  }
  if (rep.crossing_params.size() % 2 != 0)
    throw Error(Error::Kind::TangentialIntersection,
                "odd number of detected crossings");
  rep.n = int(rep.crossing_params.size()) / 2;

  if (rep.n == 0) {
    rep.interleaved = false;
    rep.holds = true;
    return rep;
  }

  // cyclic order on the circle = angular order about its center
  std::vector<double> ang;
  for (double t : rep.crossing_params) {
    Vec2 u = curve.eval(t, 0) - z;
    ang.push_back(std::atan2(u.y(), u.x()));
  }
  auto monotone = [&](bool ccw) {
    double sum = 0.0;
    std::size_t m = ang.size();
    for (std::size_t i = 0; i < m; ++i) {
      double d = ang[(i + 1) % m] - ang[i];
      if (!ccw) d = -d;
      d = std::fmod(d, two_pi);
      if (d <= 0) d += two_pi;
      sum += d;
    }
    return std::abs(sum - two_pi) < 1e-6;
  };
  rep.interleaved = monotone(true) || monotone(false);

  VertexList vl = find_vertices(curve, tol);
  rep.constant_curvature = vl.constant_curvature;
  rep.vertex_count = int(vl.vertices.size());
  rep.holds = !rep.interleaved || rep.constant_curvature ||
              rep.vertex_count >= 2 * rep.n;
  return rep;
}

}  // namespace circline
