#pragma once

#include <optional>

#include "circline/curve.hpp"
#include "circline/curve_ops.hpp"

namespace circline {

/// Circle-or-line, stored as (anchor, unit tangent, signed curvature) so the
/// representation stays continuous through k = 0. For k != 0 the center is
/// anchor + (1/k) * left_normal(tangent), radius 1/|k|.
struct Circline {
  Vec2 anchor = Vec2::Zero();
  Vec2 tangent = Vec2::UnitX();
  double k = 0.0;

  bool is_line(double eps_k) const { return std::abs(k) < eps_k; }
  Vec2 center() const { return anchor + (1.0 / k) * left_normal(tangent); }
  double radius() const { return 1.0 / std::abs(k); }

  /// Point on the circline; for a circle, at angle offset u from the anchor,
  /// for a line, at signed distance u along the tangent.
  Vec2 point_at(double u, double eps_k) const;

  /// Distance from p to the circline.
  double distance_to(const Vec2& p, double eps_k) const;
};

Circline osculating_circline(const PlaneCurve& curve, double t,
                             const Tolerances& tol = {});

enum class SupportKind { InsideSupport, OutsideSupport, NotSupporting };

struct SupportVerdict {
  SupportKind kind = SupportKind::NotSupporting;
  std::optional<double> violation_witness;  // curve parameter of worst violation
  double max_violation = 0.0;               // signed penetration depth
};

/// Global support classification of a circline tangent to the curve at t:
/// inside_support if it lies in the closed bounded region, outside_support
/// if in the closed unbounded one, within eps_sup (optionally scaled by
/// `relax`). Coincident circline counts as inside support.
SupportVerdict classify_support(const PlaneCurve& curve, double t,
                                const Circline& c, const Tolerances& tol = {},
                                double relax = 1.0);

Vec2 invert_point(const Vec2& center, double radius, const Vec2& p,
                  const Tolerances& tol = {});

/// Image of a circline under inversion, built from three spread points;
/// orientation convention preserved (left side maps consistently).
Circline invert_circline(const Vec2& center, double radius, const Circline& c,
                         double scale_hint = 1.0, const Tolerances& tol = {});

/// Derived curve: composition of the curve with the inversion map, with
/// derivatives up to order 3 via truncated Taylor (jet) arithmetic.
class InvertedCurve final : public PlaneCurve {
 public:
  InvertedCurve(Vec2 center, double radius, CurvePtr base)
      : center_(std::move(center)), radius_(radius), base_(std::move(base)) {}

  void derivatives(double t, Vec2* out, int max_order) const override;
  int degree() const override { return base_->degree(); }

  const Vec2& inv_center() const { return center_; }
  double inv_radius() const { return radius_; }
  const CurvePtr& base() const { return base_; }

 private:
  Vec2 center_;
  double radius_;
  CurvePtr base_;
};

/// Inversion image of a whole curve. Requires the center strictly inside
/// the region, at distance >= d_min from the curve.
CurvePtr invert_curve(const Vec2& center, double radius, CurvePtr curve,
                      const Tolerances& tol = {});

}  // namespace circline
