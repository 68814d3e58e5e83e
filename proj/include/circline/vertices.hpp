#pragma once

#include "circline/keylemma.hpp"

namespace circline {

enum class VertexTag { LocalMax, LocalMin, Degenerate };

struct Vertex {
  double t = 0.0;
  double kappa = 0.0;
  VertexTag tag = VertexTag::Degenerate;
};

struct VertexList {
  std::vector<Vertex> vertices;  // cyclically sorted
  bool constant_curvature = false;
};

/// Roots of d(kappa)/dt, isolated by grid sign changes and refined by
/// bisection; clusters within delta_param merge as degenerate.
VertexList find_vertices(const PlaneCurve& curve, const Tolerances& tol = {});

struct FourVertexReport {
  std::vector<double> inside;   // >= 2 parameters with inside-supporting osculating circlines
  std::vector<double> outside;  // >= 2 with outside support
  bool dense_support = false;   // circle case: every circline is the curve
  Vec2 inversion_center = Vec2::Zero();
  double inversion_radius = 0.0;
};

/// Two inside supports via the arc-bisection lemma (re-based on the first
/// hit), two outside supports via the same procedure on the inverted curve.
FourVertexReport four_vertex_report(CurvePtr curve, const Tolerances& tol = {});

struct NestingVerdict {
  bool holds = true;
  double s = 0.0, t = 0.0;  // witness pair when nesting fails
};

/// Osculating circles along a monotone-curvature arc must be pairwise
/// nested (smaller strictly inside larger). Requires kappa' and kappa of
/// constant sign on the arc.
NestingVerdict tait_kneser_check(const PlaneCurve& curve, const Arc& arc,
                                 const Tolerances& tol = {});

struct CrossingReport {
  int n = 0;  // half the number of transversal crossings
  bool interleaved = false;
  int vertex_count = 0;
  bool constant_curvature = false;  // circle case: every point is a vertex
  bool holds = false;               // not interleaved, or vertex_count >= 2n
  std::vector<double> crossing_params;
};

/// Counts transversal crossings of the curve with a circle, checks whether
/// they appear in the same cyclic order on both, and compares the vertex
/// count against 2n.
CrossingReport crossing_vertex_check(const PlaneCurve& curve, const Circline& circle,
                                     const Tolerances& tol = {});

}  // namespace circline
