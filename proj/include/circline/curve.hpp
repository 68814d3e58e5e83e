#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "circline/types.hpp"

namespace circline {

/// Grid of curve samples used by every global scan. Size is
/// max(1024, 256 * degree), resolving features at the Nyquist scale of the
/// trigonometric degree with margin.
struct GridCache {
  int n = 0;
  std::vector<double> t;
  std::vector<Vec2> pos;
  std::vector<Vec2> d1;
  std::vector<double> speed;
  std::vector<double> kappa;   // signed curvature at grid nodes
  std::vector<double> dkappa;  // d(kappa)/dt at grid nodes
  double min_speed = 0.0;
  double max_speed = 0.0;
  double diameter = 0.0;      // bounding-box diagonal
  double total_length = 0.0;  // periodic-trapezoid estimate
  Eigen::AlignedBox2d bbox;
};

/// Closed parametric plane curve with exact derivatives up to order 3,
/// t in [0, 2*pi). Concrete curves are trigonometric series; derived
/// wrappers (reversal, inversion) expose the same contract.
class PlaneCurve {
 public:
  PlaneCurve() = default;
  // the lazy grid cache is per-object and rebuilt after copies
  PlaneCurve(const PlaneCurve&) {}
  PlaneCurve& operator=(const PlaneCurve&) { return *this; }
  virtual ~PlaneCurve() = default;

  /// Fill out[0..max_order] with position and derivatives at t.
  virtual void derivatives(double t, Vec2* out, int max_order) const = 0;

  /// Trigonometric degree of the underlying series (wrappers forward it).
  virtual int degree() const = 0;

  Vec2 eval(double t, int order) const {
    Vec2 buf[4];
    derivatives(wrap_param(t), buf, order);
    return buf[order];
  }

  int grid_size() const { return std::max(1024, 256 * degree()); }

  const GridCache& grid() const;

 private:
  mutable std::once_flag grid_once_;
  mutable GridCache grid_;
};

using CurvePtr = std::shared_ptr<const PlaneCurve>;

/// Truncated trigonometric series: per coordinate, constant + m cosine +
/// m sine coefficients. Closed and 2*pi-periodic by construction.
class FourierCurve final : public PlaneCurve {
 public:
  struct Coeffs {
    double c0 = 0.0;
    std::vector<double> cos;  // coefficient of cos(j t), j = 1..m
    std::vector<double> sin;  // coefficient of sin(j t)
  };

  FourierCurve(Coeffs x, Coeffs y);

  void derivatives(double t, Vec2* out, int max_order) const override;
  int degree() const override { return degree_; }

  const Coeffs& x() const { return x_; }
  const Coeffs& y() const { return y_; }

  /// Uniform scaling about the origin (curvature scales by 1/factor).
  FourierCurve scaled(double factor) const;

 private:
  Coeffs x_, y_;
  int degree_;
};

/// Orientation reversal: t -> gamma(2*pi - t). Flips the sign of odd-order
/// derivatives and of the signed curvature.
class ReversedCurve final : public PlaneCurve {
 public:
  explicit ReversedCurve(CurvePtr base) : base_(std::move(base)) {}

  void derivatives(double t, Vec2* out, int max_order) const override {
    base_->derivatives(wrap_param(two_pi - t), out, max_order);
    for (int k = 1; k <= max_order; k += 2) out[k] = -out[k];
  }
  int degree() const override { return base_->degree(); }
  const CurvePtr& base() const { return base_; }

 private:
  CurvePtr base_;
};

}  // namespace circline
