#pragma once

#include <string>
#include <vector>

#include "circline/curve.hpp"
#include "circline/curve_ops.hpp"

namespace circline {

/// Parsed curve-spec file: either a preset invocation or explicit
/// trigonometric coefficients.
struct CurveSpec {
  bool is_preset = false;
  std::string preset;
  std::vector<double> params;
  FourierCurve::Coeffs x, y;
  bool has_x = false, has_y = false;
};

/// Line-oriented `key = value` grammar. Keys: `preset`, `params`, and
/// `x.const`, `x.cos`, `x.sin` (same for y). List values in brackets,
/// numbers separated by spaces or commas. `#` starts a comment. Unknown
/// keys are rejected with line/column diagnostics.
CurveSpec parse_curve_spec(const std::string& text);

CurveSpec load_curve_spec(const std::string& path);

CurvePtr build_curve(const CurveSpec& spec, const Tolerances& tol = {});

/// Canonical spec text for a trigonometric curve (round-trips through the
/// parser bit-exactly).
std::string format_curve_spec(const FourierCurve& curve);

/// Least-squares trigonometric fit of degree m to any curve wrapper
/// (dense-sample discrete Fourier projection). Returns the fit and the
/// maximal sample residual.
std::pair<FourierCurve, double> fourier_fit(const PlaneCurve& curve, int degree);

}  // namespace circline
