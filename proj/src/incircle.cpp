#include "circline/incircle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

namespace circline {

namespace {

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

// nearest curve point to z: (param, distance, inside?) in one scan
struct Nearest {
  double t = 0.0;
  double d = 0.0;
  bool inside = false;
};

Nearest nearest_scan(const PlaneCurve& curve, const Vec2& z) {
  const GridCache& g = curve.grid();
  int n = g.n;
  double h = two_pi / n;
  double best = std::numeric_limits<double>::infinity();
  int besti = 0;
  std::vector<double> d2(n);
  for (int i = 0; i < n; ++i) {
    d2[i] = (g.pos[i] - z).squaredNorm();
    if (d2[i] < best) {
      best = d2[i];
      besti = i;
    }
  }
  Nearest out;
  out.t = 0.0;
  out.d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (d2[i] <= d2[(i + 1) % n] && d2[i] <= d2[(i + n - 1) % n] &&
        d2[i] <= d2[besti] * 1.1 + 1e-300) {
      double t = golden_min(
          [&](double u) { return (curve.eval(u, 0) - z).squaredNorm(); },
          g.t[i] - h, g.t[i] + h, 1e-12);
      double d = (curve.eval(t, 0) - z).norm();
      if (d < out.d) {
        out.d = d;
        out.t = wrap_param(t);
      }
    }
  }
  out.inside = cross2(curve.eval(out.t, 1), z - curve.eval(out.t, 0)) > 0;
  return out;
}

}  // namespace

double containment_radius(const PlaneCurve& curve, const Vec2& center,
                          const Tolerances& tol) {
  Nearest n = nearest_scan(curve, center);
  double eps_geo = tol.eps_geo_rel * curve.grid().diameter;
  if (!n.inside || n.d < eps_geo)
    throw Error(Error::Kind::OutsideRegion, "center is not strictly inside the region");
  return n.d;
}

Incircle incircle_at(const PlaneCurve& curve, double t, const Tolerances& tol) {
  const GridCache& g = curve.grid();
  double eps_geo = tol.eps_geo_rel * g.diameter;
  t = wrap_param(t);
  Vec2 d[2 + 1];
  curve.derivatives(t, d, 1);
  double v = d[1].norm();
  if (v < tol.eps_reg)
    throw Error(Error::Kind::DegenerateSpeed, "degenerate speed at tangency point");
  Vec2 p = d[0];
  Vec2 inward = left_normal(d[1] / v);  // CCW curve: left normal points inside

  auto feasible = [&](double r) {
    Vec2 z = p + r * inward;
    Nearest n = nearest_scan(curve, z);
    return n.inside && n.d >= r - eps_geo;
  };

  double hi = g.diameter;
  double lo = 1e-6 * g.diameter;
  int guard = 0;
  while (!feasible(lo) && guard++ < 8) lo *= 0.1;
  if (guard >= 8)
    throw Error(Error::Kind::NotSimple,
                "no feasible inscribed circle at t (is the curve simple and CCW?)");
  if (feasible(hi)) {
    lo = hi;  // cannot happen for a bounded region, keep the bound anyway
  }
  while (hi - lo > 1e-10 * hi) {
    double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  double r = lo;
  Vec2 z = p + r * inward;

  Incircle out;
  out.r = r;
  out.center = z;
  out.circle.anchor = p;
  out.circle.tangent = d[1] / v;
  out.circle.k = 1.0 / r;

  // contact detection: local minima of |gamma(s) - z| within eps_contact of r
  double eps_contact = tol.eps_contact_rel * g.diameter;
  int n = g.n;
  double h = two_pi / n;
  std::vector<double> dist(n);
  int grid_contacts = 0;
  for (int i = 0; i < n; ++i) {
    dist[i] = (g.pos[i] - z).norm();
    if (dist[i] - r <= eps_contact) ++grid_contacts;
  }
  out.contacts.dense = grid_contacts * 4 > n;
  std::vector<double> raw;
  for (int i = 0; i < n; ++i) {
    if (dist[i] <= dist[(i + 1) % n] && dist[i] <= dist[(i + n - 1) % n]) {
      double s = golden_min(
          [&](double u) { return (curve.eval(u, 0) - z).squaredNorm(); },
          g.t[i] - h, g.t[i] + h, 1e-12);
      if ((curve.eval(s, 0) - z).norm() - r <= eps_contact) raw.push_back(wrap_param(s));
    }
  }
  raw.push_back(t);  // the tangency parameter is always a contact
  std::sort(raw.begin(), raw.end());
  std::vector<double> merged;
  for (double s : raw) {
    if (!merged.empty() && param_distance(merged.back(), s) < tol.delta_param) continue;
    merged.push_back(s);
  }
  // cyclic merge of first/last
  if (merged.size() > 1 &&
      param_distance(merged.front(), merged.back()) < tol.delta_param)
    merged.pop_back();
  // keep the tangency parameter exact
  bool has_t = false;
  for (double& s : merged)
    if (param_distance(s, t) < tol.delta_param) {
      s = t;
      has_t = true;
    }
  if (!has_t) merged.push_back(t);
  std::sort(merged.begin(), merged.end());
  out.contacts.contacts = std::move(merged);
  return out;
}

InscribedDisc largest_inscribed_disc(const PlaneCurve& curve, const Tolerances& tol) {
  const GridCache& g = curve.grid();
  Vec2 lo = g.bbox.min(), hi = g.bbox.max();
  Vec2 ext = hi - lo;

  // phase 1: global localization by quadtree bound-and-prune. The inradius
  // is 1-Lipschitz in the center, so sd(center) + cell_radius bounds the
  // best value inside a cell; pruning against the incumbent makes this a
  // guaranteed global search down to the cell-size tolerance. A local
  // search alone is not enough: the inradius field has creases along the
  // medial axis where compass descent stalls below the true maximum.
  struct Cell {
    Vec2 c;
    double half;       // half side length
    double potential;  // sd(c) + half*sqrt(2)
    long id;
  };
  auto worse = [](const Cell& a, const Cell& b) {
    if (a.potential != b.potential) return a.potential < b.potential;
    return a.id > b.id;
  };
  std::priority_queue<Cell, std::vector<Cell>, decltype(worse)> queue(worse);
  long next_id = 0;

  Vec2 best_p = Vec2::Zero();
  double best_r = -std::numeric_limits<double>::infinity();
  auto push = [&](const Vec2& c, double half) {
    Nearest n = nearest_scan(curve, c);
    double sd = n.inside ? n.d : -n.d;
    if (sd > best_r) {
      best_r = sd;
      best_p = c;
    }
    queue.push({c, half, sd + half * std::numbers::sqrt2, next_id++});
  };

  const int G0 = 16;
  double half0 = 0.5 * std::max(ext.x(), ext.y()) / G0;
  for (int iy = 0; iy < G0; ++iy)
    for (int ix = 0; ix < G0; ++ix)
      push(lo + Vec2(ext.x() * (ix + 0.5) / G0, ext.y() * (iy + 0.5) / G0), half0);

  double cell_min = 2e-4 * g.diameter;
  while (!queue.empty()) {
    Cell cell = queue.top();
    queue.pop();
    if (cell.potential <= best_r + 1e-12 * g.diameter) break;  // max-heap: done
    if (cell.half < cell_min) continue;
    double h = 0.5 * cell.half;
    for (double sx : {-1.0, 1.0})
      for (double sy : {-1.0, 1.0}) push(cell.c + Vec2(sx * h, sy * h), h);
  }
  if (best_r <= 0)
    throw Error(Error::Kind::NotSimple, "no interior point found");

  // phase 2: compass refinement from the localized maximum, restarted with
  // a fresh step so a single sweep cannot stall on a crease
  Vec2 x = best_p;
  double f = best_r;
  double step_min = 1e-8 * g.diameter;
  for (int round = 0; round < 5; ++round) {
    double f0 = f;
    double step = 4.0 * cell_min;
    while (step > step_min) {
      bool moved = false;
      static const Vec2 dirs[8] = {Vec2(1, 0),  Vec2(-1, 0), Vec2(0, 1),
                                   Vec2(0, -1), Vec2(1, 1),  Vec2(1, -1),
                                   Vec2(-1, 1), Vec2(-1, -1)};
      for (const Vec2& u : dirs) {
        Vec2 cand = x + step * u;
        Nearest n = nearest_scan(curve, cand);
        if (n.inside && n.d > f) {
          x = cand;
          f = n.d;
          moved = true;
        }
      }
      if (!moved) step *= 0.5;
    }
    if (f - f0 < 1e-10 * g.diameter) break;
  }

  InscribedDisc best;
  best.center = x;
  best.radius = f;
  return best;
}

}  // namespace circline
