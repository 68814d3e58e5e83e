#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace circline {

using Vec2 = Eigen::Vector2d;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Canonical parameter representative in [0, 2*pi).
inline double wrap_param(double t) {
  double r = std::fmod(t, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

/// Cyclic distance between two parameters, in [0, pi].
inline double param_distance(double a, double b) {
  double d = std::abs(wrap_param(a) - wrap_param(b));
  return std::min(d, two_pi - d);
}

/// Rotate a vector by +90 degrees (left normal of a tangent).
inline Vec2 left_normal(const Vec2& v) { return Vec2(-v.y(), v.x()); }

inline double cross2(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Directed parameter interval: runs from `start` forward (along the curve
/// orientation) over `span` radians of parameter. span in (0, 2*pi].
struct Arc {
  double start = 0.0;
  double span = two_pi;

  double end() const { return wrap_param(start + span); }
  bool is_full() const { return span >= two_pi; }

  /// True if parameter u lies on the (closed) arc.
  bool contains(double u, double margin = 0.0) const {
    if (is_full()) return true;
    double d = wrap_param(u - start);
    return d >= -margin && d <= span + margin;
  }

  /// Parameter at fraction f in [0,1] along the arc (parameter, not length).
  double at(double f) const { return wrap_param(start + f * span); }

  static Arc between(double from, double to) {
    double s = wrap_param(to - from);
    if (s == 0.0) s = two_pi;
    return Arc{wrap_param(from), s};
  }
};

/// All numerical tolerances in one place; relative ones scale with the
/// curve diameter or total length.
struct Tolerances {
  double eps_reg = 1e-6;        // minimal parametric speed
  double eps_geo_rel = 1e-9;    // geometric coincidence, x diameter
  double eps_quad_rel = 1e-10;  // arc-length quadrature, x total length
  double delta_param = 1e-4;    // parameter separation for distinct points
  double eps_k_rel = 1e-8;      // line/circle threshold, x (1/diameter)
  double eps_sup_rel = 1e-7;    // support violation, x diameter
  double eps_contact_rel = 1e-6;  // incircle contact, x diameter
  double eps_term_rel = 1e-8;   // arc-bisection stop, x total length
  double d_min_rel = 1e-3;      // inversion-center clearance, x diameter

  bool set(const std::string& key, double value);
};

class Error : public std::runtime_error {
 public:
  enum class Kind {
    Parse,
    DegenerateSpeed,
    ZeroArea,
    NotSimple,
    NotTangent,
    AtCenter,
    CenterTooClose,
    OutsideRegion,
    CurvatureTooLarge,
    NotContained,
    NotMonotone,
    TangentialIntersection,
    RejectionExhausted,
    NoConvergence,
  };

  Error(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

  /// CLI exit code: 2 parse, 3 precondition, 4 no-convergence.
  int exit_code() const {
    switch (kind_) {
      case Kind::Parse: return 2;
      case Kind::NoConvergence: return 4;
      default: return 3;
    }
  }

 private:
  Kind kind_;
};

}  // namespace circline
