#pragma once

#include <cstdint>
#include <optional>

#include "circline/curve.hpp"

namespace circline {

double signed_curvature(const PlaneCurve& curve, double t,
                        const Tolerances& tol = {});

/// d(kappa)/dt, from exact third derivatives.
double curvature_derivative(const PlaneCurve& curve, double t,
                            const Tolerances& tol = {});

/// Arc length by adaptive quadrature, absolute error <= eps_quad.
double arc_length(const PlaneCurve& curve, const Arc& arc,
                  const Tolerances& tol = {});

/// Parameter splitting the arc into two flanks of equal arc length.
double arc_midpoint(const PlaneCurve& curve, const Arc& arc,
                    const Tolerances& tol = {});

/// Parameter at arc length `s` from arc.start along the arc.
double param_at_length(const PlaneCurve& curve, const Arc& arc, double s,
                       const Tolerances& tol = {});

struct SimplicityVerdict {
  bool simple = true;
  double s = 0.0, t = 0.0;  // witness pair when self-intersecting
};

/// Self-intersection test by adaptive subdivision with bounding boxes and
/// local refinement. Pairs closer than delta_param in parameter are the
/// trivial coincidence and do not count.
SimplicityVerdict is_simple(const PlaneCurve& curve, const Tolerances& tol = {});

/// Signed enclosed area (periodic trapezoid rule; spectrally accurate).
double signed_area(const PlaneCurve& curve);

/// Returns the curve with positive signed area, reversing if needed.
CurvePtr normalize_orientation(CurvePtr curve, const Tolerances& tol = {});

enum class Region { Inside, Outside, Boundary };

struct RegionVerdict {
  Region region;
  double distance;       // distance to the curve
  double nearest_param;  // parameter of the nearest curve point
};

/// Region membership for a simple CCW-normalized curve: side of the
/// nearest boundary point (left = inside).
RegionVerdict point_in_region(const PlaneCurve& curve, const Vec2& p,
                              const Tolerances& tol = {});

/// Nearest curve point to p: (parameter, distance). Grid scan plus
/// golden-section refinement of every local minimum.
std::pair<double, double> nearest_point(const PlaneCurve& curve, const Vec2& p);

/// Global farthest curve point from p: (parameter, distance).
std::pair<double, double> farthest_point(const PlaneCurve& curve, const Vec2& p);

/// Winding number of the curve around p (grid polygon crossing count).
int winding_number(const PlaneCurve& curve, const Vec2& p);

/// Total turning: integral of kappa ds over the full curve (periodic
/// trapezoid). Equals 2*pi for a simple CCW curve.
double total_turning(const PlaneCurve& curve);

/// Global maximum of |kappa| with its parameter (grid + local refinement).
std::pair<double, double> max_abs_curvature(const PlaneCurve& curve);

// --- presets ---

CurvePtr make_circle(double radius);
CurvePtr make_ellipse(double a, double b);
/// Limacon r = a + b cos(theta); non-simple (inner loop) when b > a.
CurvePtr make_limacon(double a, double b);
/// n-lobed wave around radius r0: r(theta) = r0 + amp * cos(n theta).
CurvePtr make_wavy(double r0, double amp, int lobes);
/// Random trigonometric perturbation of the unit circle, rejection-sampled
/// until simple and regular. Deterministic in the seed.
CurvePtr make_fourier_random(int degree, double amplitude, std::uint64_t seed,
                             const Tolerances& tol = {});

CurvePtr preset_curve(const std::string& name, const std::vector<double>& params,
                      const Tolerances& tol = {});

}  // namespace circline
