#pragma once

#include "circline/circline.hpp"

namespace circline {

/// Parameters where an inscribed circle touches the curve, cyclically
/// sorted; contacts closer than delta_param are merged. `dense` flags the
/// circle-on-circle case (more than 25% of grid nodes in contact).
struct ContactSet {
  std::vector<double> contacts;
  bool dense = false;
};

struct Incircle {
  Circline circle;
  double r = 0.0;
  Vec2 center = Vec2::Zero();
  ContactSet contacts;
};

/// Maximal circle inside the region tangent to the curve at t (the
/// region's incircle at that point). Radius by bisection to relative 1e-10.
Incircle incircle_at(const PlaneCurve& curve, double t, const Tolerances& tol = {});

/// Largest r with disc(center, r) contained in the region: the distance
/// from the center to the curve. Center must be strictly inside.
double containment_radius(const PlaneCurve& curve, const Vec2& center,
                          const Tolerances& tol = {});

struct InscribedDisc {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
};

/// Largest inscribed disc: multi-start pattern search over interior grid
/// seeds, deterministic tie-break (lowest seed index wins).
InscribedDisc largest_inscribed_disc(const PlaneCurve& curve,
                                     const Tolerances& tol = {});

}  // namespace circline
