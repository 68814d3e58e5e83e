#include "circline/circline.hpp"

#include <cmath>

namespace circline {

Vec2 Circline::point_at(double u, double eps_k) const {
  if (is_line(eps_k)) return anchor + u * tangent;
  Vec2 z = center();
  Vec2 r = anchor - z;
  double c = std::cos(u), s = std::sin(u);
  return z + Vec2(c * r.x() - s * r.y(), s * r.x() + c * r.y());
}

double Circline::distance_to(const Vec2& p, double eps_k) const {
  if (is_line(eps_k)) return std::abs(cross2(tangent, p - anchor));
  return std::abs((p - center()).norm() - radius());
}

Circline osculating_circline(const PlaneCurve& curve, double t, const Tolerances& tol) {
  Vec2 d[4];
  curve.derivatives(wrap_param(t), d, 2);
  double v = d[1].norm();
  if (v < tol.eps_reg)
    throw Error(Error::Kind::DegenerateSpeed, "degenerate speed at t=" + std::to_string(t));
  Circline c;
  c.anchor = d[0];
  c.tangent = d[1] / v;
  c.k = cross2(d[1], d[2]) / (v * v * v);
  return c;
}

namespace {

struct Extremes {
  double min_d = 0.0, max_d = 0.0;
  double argmin = 0.0, argmax = 0.0;
  double nearest_param_side = 0.0;  // cross of tangent with (z - gamma) at argmin
};

constexpr double golden = 0.6180339887498949;

template <class F>
double golden_min(F&& f, double a, double b, double xtol) {
  double x1 = b - golden * (b - a), x2 = a + golden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - golden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + golden * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// min and max of |gamma(s) - z| over the full curve, grid + refinement
Extremes distance_extremes(const PlaneCurve& curve, const Vec2& z) {
  const GridCache& g = curve.grid();
  int n = g.n;
  double h = two_pi / n;
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = (g.pos[i] - z).norm();
  Extremes e;
  e.min_d = std::numeric_limits<double>::infinity();
  e.max_d = -1.0;
  for (int i = 0; i < n; ++i) {
    double prev = d[(i + n - 1) % n], next = d[(i + 1) % n];
    if (d[i] <= prev && d[i] <= next) {
      double t = golden_min(
          [&](double u) { return (curve.eval(u, 0) - z).norm(); }, g.t[i] - h,
          g.t[i] + h, 1e-12);
      double v = (curve.eval(t, 0) - z).norm();
      if (v < e.min_d) {
        e.min_d = v;
        e.argmin = wrap_param(t);
      }
    }
    if (d[i] >= prev && d[i] >= next) {
      double t = golden_min(
          [&](double u) { return -(curve.eval(u, 0) - z).norm(); }, g.t[i] - h,
          g.t[i] + h, 1e-12);
      double v = (curve.eval(t, 0) - z).norm();
      if (v > e.max_d) {
        e.max_d = v;
        e.argmax = wrap_param(t);
      }
    }
  }
  return e;
}

bool center_inside(const PlaneCurve& curve, const Vec2& z, double argmin) {
  Vec2 tan = curve.eval(argmin, 1);
  return cross2(tan, z - curve.eval(argmin, 0)) > 0;
}

}  // namespace

SupportVerdict classify_support(const PlaneCurve& curve, double t, const Circline& c,
                                const Tolerances& tol, double relax) {
  const GridCache& g = curve.grid();
  double eps_geo = tol.eps_geo_rel * g.diameter;
  double eps_sup = relax * tol.eps_sup_rel * g.diameter;
  double eps_k = tol.eps_k_rel / g.diameter;

  Vec2 p = curve.eval(t, 0);
  Vec2 tan = curve.eval(t, 1).normalized();
  if (c.distance_to(p, eps_k) > std::max(eps_geo, 1e-9 * g.diameter))
    throw Error(Error::Kind::NotTangent, "circline does not pass through gamma(t)");
  Vec2 ctan = c.is_line(eps_k)
                  ? c.tangent
                  : left_normal((p - c.center()).normalized()) * (c.k > 0 ? 1.0 : -1.0);
  double ang = std::abs(cross2(tan, ctan));
  if (std::asin(std::min(1.0, ang)) > 1e-6 && ang > 1e-6)
    throw Error(Error::Kind::NotTangent, "circline not tangent to the curve at t");

  SupportVerdict out;
  if (c.is_line(eps_k)) {
    // a line can only support from outside (the region is bounded):
    // the whole curve must lie on one closed side of the line
    const int n = g.n;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    double arg_lo = 0.0, arg_hi = 0.0;
    for (int i = 0; i < n; ++i) {
      double s = cross2(c.tangent, g.pos[i] - c.anchor);
      if (s < lo) {
        lo = s;
        arg_lo = g.t[i];
      }
      if (s > hi) {
        hi = s;
        arg_hi = g.t[i];
      }
    }
    double h = two_pi / n;
    arg_lo = golden_min(
        [&](double u) { return cross2(c.tangent, curve.eval(u, 0) - c.anchor); },
        arg_lo - h, arg_lo + h, 1e-12);
    arg_hi = golden_min(
        [&](double u) { return -cross2(c.tangent, curve.eval(u, 0) - c.anchor); },
        arg_hi - h, arg_hi + h, 1e-12);
    lo = cross2(c.tangent, curve.eval(arg_lo, 0) - c.anchor);
    hi = cross2(c.tangent, curve.eval(arg_hi, 0) - c.anchor);
    double v_pos = std::max(0.0, -lo);  // violation if curve dips below when it should stay above
    double v_neg = std::max(0.0, hi);
    if (std::min(v_pos, v_neg) <= eps_sup) {
      out.kind = SupportKind::OutsideSupport;
      out.max_violation = std::min(v_pos, v_neg);
    } else {
      out.kind = SupportKind::NotSupporting;
      if (v_pos <= v_neg) {
        out.max_violation = v_pos;
        out.violation_witness = wrap_param(arg_lo);
      } else {
        out.max_violation = v_neg;
        out.violation_witness = wrap_param(arg_hi);
      }
    }
    return out;
  }

  Vec2 z = c.center();
  double rho = c.radius();
  Extremes e = distance_extremes(curve, z);
  bool z_inside = center_inside(curve, z, e.argmin);

  // inside support <=> the closed disc lies in the bounded region
  double v_inside = z_inside ? std::max(0.0, rho - e.min_d)
                             : std::numeric_limits<double>::infinity();
  // outside support: disc disjoint from the open region, or disc encloses the curve
  double v_out_a = !z_inside ? std::max(0.0, rho - e.min_d)
                             : std::numeric_limits<double>::infinity();
  double v_out_b = std::max(0.0, e.max_d - rho);
  double v_outside = std::min(v_out_a, v_out_b);

  if (v_inside <= eps_sup) {
    out.kind = SupportKind::InsideSupport;
    out.max_violation = v_inside;
  } else if (v_outside <= eps_sup) {
    out.kind = SupportKind::OutsideSupport;
    out.max_violation = v_outside;
  } else {
    out.kind = SupportKind::NotSupporting;
    if (v_inside <= v_outside) {
      out.max_violation = v_inside;
      out.violation_witness = e.argmin;
    } else if (v_out_a <= v_out_b) {
      out.max_violation = v_out_a;
      out.violation_witness = e.argmin;
    } else {
      out.max_violation = v_out_b;
      out.violation_witness = e.argmax;
    }
  }
  return out;
}

Vec2 invert_point(const Vec2& center, double radius, const Vec2& p, const Tolerances&) {
  Vec2 u = p - center;
  double n2 = u.squaredNorm();
  if (n2 == 0.0 || !std::isfinite(1.0 / n2))
    throw Error(Error::Kind::AtCenter, "inversion of the center is undefined");
  return center + (radius * radius / n2) * u;
}

Circline invert_circline(const Vec2& center, double radius, const Circline& c,
                         double scale_hint, const Tolerances& tol) {
  double eps_k = tol.eps_k_rel / std::max(scale_hint, 1e-300);
  // three spread points, kept away from the inversion center
  Vec2 q[3];
  if (c.is_line(eps_k)) {
    double step = std::max(scale_hint, radius);
    q[0] = c.anchor;
    q[1] = c.anchor + step * c.tangent;
    q[2] = c.anchor - step * c.tangent;
    // nudge any point sitting on the center
    for (auto& p : q)
      if ((p - center).norm() < 1e-12 * step) p += 0.123 * step * c.tangent;
  } else {
    double phase = 0.0;
    for (int tries = 0; tries < 8; ++tries) {
      bool ok = true;
      for (int i = 0; i < 3; ++i) {
        q[i] = c.point_at(phase + i * (two_pi / 3.0) * (c.k > 0 ? 1.0 : -1.0), eps_k);
        if ((q[i] - center).norm() < 1e-9 * c.radius()) ok = false;
      }
      if (ok) break;
      phase += 0.37;
    }
  }
  Vec2 w0 = invert_point(center, radius, q[0], tol);
  Vec2 w1 = invert_point(center, radius, q[1], tol);
  Vec2 w2 = invert_point(center, radius, q[2], tol);

  // circline through three ordered points
  Circline out;
  double area2 = cross2(w1 - w0, w2 - w0);
  double span = std::max((w1 - w0).norm(), (w2 - w0).norm());
  if (std::abs(area2) < 1e-12 * span * span) {
    out.anchor = w0;
    out.tangent = (w1 - w0).normalized();
    out.k = 0.0;
    return out;
  }
  // circumcenter
  Eigen::Matrix2d A;
  A.row(0) = (w1 - w0).transpose();
  A.row(1) = (w2 - w0).transpose();
  Eigen::Vector2d rhs(0.5 * (w1.squaredNorm() - w0.squaredNorm()),
                      0.5 * (w2.squaredNorm() - w0.squaredNorm()));
  Vec2 z = A.partialPivLu().solve(rhs);
  double r = (w0 - z).norm();
  double sign = area2 > 0 ? 1.0 : -1.0;  // turning direction of w0 -> w1 -> w2
  out.anchor = w0;
  out.k = sign / r;
  Vec2 u = (z - w0) / r;
  out.tangent = sign > 0 ? Vec2(u.y(), -u.x()) : Vec2(-u.y(), u.x());
  return out;
}

namespace {

// value + first three derivatives of a scalar function of t
struct Jet {
  double d[4] = {0, 0, 0, 0};
};

Jet operator+(const Jet& a, const Jet& b) {
  Jet r;
  for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] + b.d[i];
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet r;
  for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] - b.d[i];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  // Leibniz rule
  static const double binom[4][4] = {
      {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  Jet r;
  for (int n = 0; n < 4; ++n)
    for (int k = 0; k <= n; ++k) r.d[n] += binom[n][k] * a.d[k] * b.d[n - k];
  return r;
}

Jet operator*(double s, const Jet& a) {
  Jet r;
  for (int i = 0; i < 4; ++i) r.d[i] = s * a.d[i];
  return r;
}

Jet operator/(const Jet& f, const Jet& g) {
  Jet h;
  h.d[0] = f.d[0] / g.d[0];
  h.d[1] = (f.d[1] - h.d[0] * g.d[1]) / g.d[0];
  h.d[2] = (f.d[2] - 2.0 * h.d[1] * g.d[1] - h.d[0] * g.d[2]) / g.d[0];
  h.d[3] = (f.d[3] - 3.0 * h.d[2] * g.d[1] - 3.0 * h.d[1] * g.d[2] - h.d[0] * g.d[3]) /
           g.d[0];
  return h;
}

}  // namespace

void InvertedCurve::derivatives(double t, Vec2* out, int max_order) const {
  Vec2 base[4] = {Vec2::Zero(), Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};
  base_->derivatives(t, base, std::max(max_order, 0));
  if (max_order == 0) {
    Vec2 u = base[0] - center_;
    out[0] = center_ + (radius_ * radius_ / u.squaredNorm()) * u;
    return;
  }
  Jet ux, uy;
  for (int k = 0; k <= max_order; ++k) {
    ux.d[k] = base[k].x() - (k == 0 ? center_.x() : 0.0);
    uy.d[k] = base[k].y() - (k == 0 ? center_.y() : 0.0);
  }
  Jet s = ux * ux + uy * uy;
  double r2 = radius_ * radius_;
  Jet fx = r2 * (ux / s);
  Jet fy = r2 * (uy / s);
  for (int k = 0; k <= max_order; ++k)
    out[k] = Vec2(fx.d[k] + (k == 0 ? center_.x() : 0.0),
                  fy.d[k] + (k == 0 ? center_.y() : 0.0));
}

CurvePtr invert_curve(const Vec2& center, double radius, CurvePtr curve,
                      const Tolerances& tol) {
  const GridCache& g = curve->grid();
  auto verdict = point_in_region(*curve, center, tol);
  double d_min = tol.d_min_rel * g.diameter;
  if (verdict.region != Region::Inside || verdict.distance < d_min)
    throw Error(Error::Kind::CenterTooClose,
                "inversion center must lie inside the curve, clear of it by d_min");
  return std::make_shared<InvertedCurve>(center, radius, std::move(curve));
}

}  // namespace circline
