#pragma once

#include "circline/incircle.hpp"

namespace circline {

/// One step of the arc-bisection procedure: tangency point, its incircle,
/// the chosen contact, the arc to it, and the arc's length.
struct IterationStep {
  double p = 0.0;
  Circline incircle;
  double q = 0.0;
  Arc arc;
  double arc_len = 0.0;
};

struct IterationTrace {
  std::vector<IterationStep> steps;
};

struct InsideSupportResult {
  double t = 0.0;
  Circline circ;
  IterationTrace trace;
};

/// Finds a point (distinct from `base`) whose osculating circline supports
/// the curve from inside, by recursive incircle contact-arc bisection
/// starting from the arc-length antipode of the base.
InsideSupportResult find_inside_support(const PlaneCurve& curve, double base,
                                        const Tolerances& tol = {});

struct MoonDisc {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
  double support_param = 0.0;
  IterationTrace trace;
};

/// For a simple curve with |kappa| <= 1 everywhere, produces a disc of
/// radius >= 1 contained in the enclosed region.
MoonDisc moon_in_puddle(const PlaneCurve& curve, const Tolerances& tol = {});

struct MoonRadReport {
  double R = 0.0;                 // largest inscribed disc radius of the container
  double max_abs_curvature = 0.0; // of the inner curve
  bool holds = false;             // max|kappa| >= 1/R - 1e-6
};

/// Curvature lower bound for a closed curve (self-intersections allowed)
/// lying inside a simple container curve.
MoonRadReport exercise_moon_rad(const PlaneCurve& curve,
                                const PlaneCurve& container,
                                const Tolerances& tol = {});

}  // namespace circline
