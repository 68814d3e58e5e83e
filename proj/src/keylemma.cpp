#include "circline/keylemma.hpp"

#include <algorithm>
#include <cmath>

namespace circline {

namespace {

// True if u lies strictly inside the arc (endpoints excluded by `margin`).
bool arc_contains_interior(const Arc& arc, double u, double margin) {
  if (arc.is_full()) return true;
  double d = wrap_param(u - arc.start);
  return d > margin && d < arc.span - margin;
}

}  // namespace

InsideSupportResult find_inside_support(const PlaneCurve& curve, double base,
                                        const Tolerances& tol) {
  const GridCache& g = curve.grid();
  base = wrap_param(base);
  Arc full{base, two_pi};
  double total = arc_length(curve, full, tol);
  double eps_term = tol.eps_term_rel * total;

  IterationTrace trace;
  // start at the arc-length antipode of the base
  double p = param_at_length(curve, full, 0.5 * total, tol);
  Arc prev_arc = full;

  auto finish = [&](double t_star, double relax) -> InsideSupportResult {
    Circline circ = osculating_circline(curve, t_star, tol);
    SupportVerdict v = classify_support(curve, t_star, circ, tol, relax);
    if (v.kind != SupportKind::InsideSupport)
      throw Error(Error::Kind::NoConvergence,
                  "arc bisection converged to a point whose osculating circline "
                  "does not support from inside (violation " +
                      std::to_string(v.max_violation) + ")");
    if (param_distance(t_star, base) < tol.delta_param)
      throw Error(Error::Kind::NoConvergence,
                  "returned point collapsed onto the base");
    return {t_star, circ, std::move(trace)};
  };

  for (int iter = 0; iter < 200; ++iter) {
    Circline circ = osculating_circline(curve, p, tol);
    SupportVerdict v = classify_support(curve, p, circ, tol);
    if (v.kind == SupportKind::InsideSupport &&
        param_distance(p, base) >= tol.delta_param)
      return {p, circ, std::move(trace)};

    Incircle inc = incircle_at(curve, p, tol);
    if (inc.contacts.dense) return finish(p, 10.0);

    // first contact in each direction from p
    double fwd = two_pi + 1, bwd = two_pi + 1;
    double qf = 0, qb = 0;
    for (double q : inc.contacts.contacts) {
      if (param_distance(q, p) <= tol.delta_param) continue;
      double df = wrap_param(q - p);
      double db = wrap_param(p - q);
      if (df < fwd) {
        fwd = df;
        qf = q;
      }
      if (db < bwd) {
        bwd = db;
        qb = q;
      }
    }
    if (fwd > two_pi && bwd > two_pi) return finish(p, 10.0);  // only contact is p itself

    struct Cand {
      Arc arc;
      double q;
      double len;
    };
    std::vector<Cand> cands;
    if (fwd <= two_pi) {
      Arc a = Arc::between(p, qf);
      if (!arc_contains_interior(a, base, tol.delta_param))
        cands.push_back({a, qf, arc_length(curve, a, tol)});
    }
    if (bwd <= two_pi) {
      Arc a = Arc::between(qb, p);
      if (!arc_contains_interior(a, base, tol.delta_param))
        cands.push_back({a, qb, arc_length(curve, a, tol)});
    }
    if (cands.empty())
      throw Error(Error::Kind::NoConvergence,
                  "every contact arc passes through the base point");
    const Cand& best =
        (cands.size() == 1 || cands[0].len <= cands[1].len) ? cands[0] : cands[1];

    trace.steps.push_back({p, inc.circle, best.q, best.arc, best.len});
    prev_arc = best.arc;
    p = arc_midpoint(curve, best.arc, tol);
    if (best.len < eps_term) return finish(p, 10.0);
  }
  (void)g;
  throw Error(Error::Kind::NoConvergence,
              "no inside-supporting osculating circline after 200 bisection steps");
}

MoonDisc moon_in_puddle(const PlaneCurve& curve, const Tolerances& tol) {
  auto [kmax, arg] = max_abs_curvature(curve);
  if (kmax > 1.0 + 1e-9)
    throw Error(Error::Kind::CurvatureTooLarge,
                "max |kappa| = " + std::to_string(kmax) + " > 1 at t=" +
                    std::to_string(arg));
  InsideSupportResult r = find_inside_support(curve, 0.0, tol);
  if (r.circ.k <= 0)
    throw Error(Error::Kind::NoConvergence,
                "inside-supporting circline has nonpositive curvature");
  MoonDisc disc;
  disc.radius = 1.0 / r.circ.k;
  disc.center = r.circ.center();
  disc.support_param = r.t;
  disc.trace = std::move(r.trace);
  double eps = 1e-6 * curve.grid().diameter;
  double cr = containment_radius(curve, disc.center, tol);
  if (cr < disc.radius - eps)
    throw Error(Error::Kind::NoConvergence,
                "returned disc is not contained in the region");
  return disc;
}

MoonRadReport exercise_moon_rad(const PlaneCurve& curve, const PlaneCurve& container,
                                const Tolerances& tol) {
  const GridCache& g = curve.grid();
  double eps_geo = tol.eps_geo_rel * container.grid().diameter;
  int samples = std::min(256, g.n);
  for (int i = 0; i < samples; ++i) {
    const Vec2& p = g.pos[i * g.n / samples];
    RegionVerdict rv = point_in_region(container, p, tol);
    if (rv.region == Region::Outside && rv.distance > eps_geo)
      throw Error(Error::Kind::NotContained,
                  "curve leaves the container region near t=" +
                      std::to_string(g.t[i * g.n / samples]));
  }
  MoonRadReport rep;
  rep.R = largest_inscribed_disc(container, tol).radius;
  rep.max_abs_curvature = max_abs_curvature(curve).first;
  rep.holds = rep.max_abs_curvature >= 1.0 / rep.R - 1e-6;
  return rep;
}

}  // namespace circline
