#pragma once

#include <string>
#include <vector>

#include "circline/curve.hpp"

namespace circline {

/// Byte-stable SVG writer: fixed 1000x1000 viewbox, world coordinates
/// mapped from a bounding box with margin, curves sampled at 1024 points.
class SvgCanvas {
 public:
  explicit SvgCanvas(const Eigen::AlignedBox2d& world, double margin_frac = 0.05);

  void add_curve(const PlaneCurve& curve, const std::string& stroke,
                 double width = 2.0);
  void add_circle(const Vec2& center, double radius, const std::string& stroke,
                  double width = 1.5, const std::string& fill = "none");
  void add_dot(const Vec2& p, double px_radius, const std::string& fill);
  void add_polyline(const std::vector<Vec2>& pts, const std::string& stroke,
                    double width = 1.5);

  std::string str() const;
  void save(const std::string& path) const;

  /// World bbox of a curve, extended by the given extra points.
  static Eigen::AlignedBox2d fit_box(const PlaneCurve& curve,
                                     const std::vector<Vec2>& extra = {});

 private:
  Vec2 to_view(const Vec2& w) const;
  double scale_;
  Vec2 offset_;
  std::vector<std::string> body_;
};

}  // namespace circline
