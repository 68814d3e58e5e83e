#include "circline/curve.hpp"

#include <algorithm>
#include <cmath>

namespace circline {

bool Tolerances::set(const std::string& key, double value) {
  if (key == "eps_reg") eps_reg = value;
  else if (key == "eps_geo_rel") eps_geo_rel = value;
  else if (key == "eps_quad_rel") eps_quad_rel = value;
  else if (key == "delta_param") delta_param = value;
  else if (key == "eps_k_rel") eps_k_rel = value;
  else if (key == "eps_sup_rel") eps_sup_rel = value;
  else if (key == "eps_contact_rel") eps_contact_rel = value;
  else if (key == "eps_term_rel") eps_term_rel = value;
  else if (key == "d_min_rel") d_min_rel = value;
  else return false;
  return true;
}

namespace {

double kappa_from(const Vec2* d) {
  double v2 = d[1].squaredNorm();
  return cross2(d[1], d[2]) / (v2 * std::sqrt(v2));
}

double dkappa_from(const Vec2* d) {
  double v2 = d[1].squaredNorm();
  double v = std::sqrt(v2);
  double c = cross2(d[1], d[2]);
  double cp = cross2(d[1], d[3]);
  return cp / (v2 * v) - 3.0 * c * d[1].dot(d[2]) / (v2 * v2 * v);
}

}  // namespace

const GridCache& PlaneCurve::grid() const {
  std::call_once(grid_once_, [this] {
    GridCache g;
    g.n = grid_size();
    g.t.resize(g.n);
    g.pos.resize(g.n);
    g.d1.resize(g.n);
    g.speed.resize(g.n);
    g.kappa.resize(g.n);
    g.dkappa.resize(g.n);
    double h = two_pi / g.n;
    Vec2 d[4];
    for (int i = 0; i < g.n; ++i) {
      double t = i * h;
      derivatives(t, d, 3);
      g.t[i] = t;
      g.pos[i] = d[0];
      g.d1[i] = d[1];
      g.speed[i] = d[1].norm();
      g.kappa[i] = kappa_from(d);
      g.dkappa[i] = dkappa_from(d);
      g.bbox.extend(d[0]);
    }
    g.min_speed = *std::min_element(g.speed.begin(), g.speed.end());
    g.max_speed = *std::max_element(g.speed.begin(), g.speed.end());
    g.diameter = g.bbox.diagonal().norm();
    double len = 0.0;
    for (double s : g.speed) len += s;
    g.total_length = len * h;
    grid_ = std::move(g);
  });
  return grid_;
}

FourierCurve::FourierCurve(Coeffs x, Coeffs y) : x_(std::move(x)), y_(std::move(y)) {
  x_.cos.resize(std::max(x_.cos.size(), x_.sin.size()), 0.0);
  x_.sin.resize(x_.cos.size(), 0.0);
  y_.cos.resize(std::max(y_.cos.size(), y_.sin.size()), 0.0);
  y_.sin.resize(y_.cos.size(), 0.0);
  degree_ = std::max<int>({1, (int)x_.cos.size(), (int)y_.cos.size()});
}

void FourierCurve::derivatives(double t, Vec2* out, int max_order) const {
  for (int k = 0; k <= max_order; ++k) out[k] = Vec2::Zero();
  out[0] = Vec2(x_.c0, y_.c0);
  auto accumulate = [&](const Coeffs& c, int axis) {
    for (std::size_t j = 0; j < c.cos.size(); ++j) {
      double w = double(j + 1);
      double cw = std::cos(w * t), sw = std::sin(w * t);
      double a = c.cos[j], b = c.sin[j];
      // d/dt rotates (cos, sin) phases by pi/2 and multiplies by w
      double fc = a * cw + b * sw;
      double fs = -a * sw + b * cw;
      double wk = 1.0;
      for (int k = 0; k <= max_order; ++k) {
        double v = (k % 4 == 0) ? fc : (k % 4 == 1) ? fs : (k % 4 == 2) ? -fc : -fs;
        out[k][axis] += wk * v;
        wk *= w;
      }
    }
  };
  accumulate(x_, 0);
  accumulate(y_, 1);
}

FourierCurve FourierCurve::scaled(double factor) const {
  Coeffs x = x_, y = y_;
  auto sc = [&](Coeffs& c) {
    c.c0 *= factor;
    for (auto& v : c.cos) v *= factor;
    for (auto& v : c.sin) v *= factor;
  };
  sc(x);
  sc(y);
  return FourierCurve(std::move(x), std::move(y));
}

}  // namespace circline
