#include "circline/curvespec.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace circline {

namespace {

[[noreturn]] void parse_fail(int line, int col, const std::string& msg) {
  throw Error(Error::Kind::Parse, "parse error at line " + std::to_string(line) +
                                      ", column " + std::to_string(col) + ": " + msg);
}

std::vector<double> parse_numbers(const std::string& s, int line, int col0) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (std::isspace((unsigned char)s[i]) || s[i] == ',' ||
                            s[i] == '[' || s[i] == ']'))
      ++i;
    if (i >= s.size()) break;
    std::size_t end = 0;
    try {
      double v = std::stod(s.substr(i), &end);
      out.push_back(v);
    } catch (const std::exception&) {
      parse_fail(line, col0 + int(i) + 1, "expected a number, got '" + s.substr(i) + "'");
    }
    i += end;
  }
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

CurveSpec parse_curve_spec(const std::string& text) {
  CurveSpec spec;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool saw_coeff = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(lineno, 1, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    int vcol = int(eq) + 2;
    if (key == "preset") {
      spec.is_preset = true;
      spec.preset = val;
    } else if (key == "params") {
      spec.params = parse_numbers(val, lineno, vcol);
    } else if (key == "x.const" || key == "y.const" || key == "x.cos" ||
               key == "x.sin" || key == "y.cos" || key == "y.sin") {
      saw_coeff = true;
      auto nums = parse_numbers(val, lineno, vcol);
      FourierCurve::Coeffs& c = key[0] == 'x' ? spec.x : spec.y;
      (key[0] == 'x' ? spec.has_x : spec.has_y) = true;
      std::string field = key.substr(2);
      if (field == "const") {
        if (nums.size() != 1) parse_fail(lineno, vcol, key + " expects one number");
        c.c0 = nums[0];
      } else if (field == "cos") {
        c.cos = nums;
      } else {
        c.sin = nums;
      }
    } else {
      parse_fail(lineno, 1, "unknown key '" + key + "'");
    }
  }
  if (spec.is_preset && saw_coeff)
    parse_fail(lineno, 1, "spec mixes 'preset' with explicit coefficients");
  if (!spec.is_preset && !(spec.has_x && spec.has_y))
    parse_fail(lineno, 1, "spec needs a preset or both x.* and y.* coefficients");
  return spec;
}

CurveSpec load_curve_spec(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw Error(Error::Kind::Parse, "cannot open curve-spec file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_curve_spec(ss.str());
}

CurvePtr build_curve(const CurveSpec& spec, const Tolerances& tol) {
  if (spec.is_preset) return preset_curve(spec.preset, spec.params, tol);
  return std::make_shared<FourierCurve>(spec.x, spec.y);
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit_coeffs(std::ostringstream& out, const char* axis,
                 const FourierCurve::Coeffs& c) {
  out << axis << ".const = " << fmt(c.c0) << "\n";
  out << axis << ".cos = [";
  for (std::size_t i = 0; i < c.cos.size(); ++i)
    out << (i ? ", " : "") << fmt(c.cos[i]);
  out << "]\n" << axis << ".sin = [";
  for (std::size_t i = 0; i < c.sin.size(); ++i)
    out << (i ? ", " : "") << fmt(c.sin[i]);
  out << "]\n";
}

}  // namespace

std::string format_curve_spec(const FourierCurve& curve) {
  std::ostringstream out;
  emit_coeffs(out, "x", curve.x());
  emit_coeffs(out, "y", curve.y());
  return out.str();
}

std::pair<FourierCurve, double> fourier_fit(const PlaneCurve& curve, int degree) {
  const int N = std::max(4 * degree + 4, 1024);
  std::vector<Vec2> samples(N);
  for (int i = 0; i < N; ++i) samples[i] = curve.eval(two_pi * i / N, 0);

  FourierCurve::Coeffs x, y;
  x.cos.assign(degree, 0.0);
  x.sin.assign(degree, 0.0);
  y.cos.assign(degree, 0.0);
  y.sin.assign(degree, 0.0);
  for (int i = 0; i < N; ++i) {
    x.c0 += samples[i].x();
    y.c0 += samples[i].y();
  }
  x.c0 /= N;
  y.c0 /= N;
  for (int j = 1; j <= degree; ++j) {
    double xc = 0, xs = 0, yc = 0, ys = 0;
    for (int i = 0; i < N; ++i) {
      double a = two_pi * j * i / N;
      double c = std::cos(a), s = std::sin(a);
      xc += samples[i].x() * c;
      xs += samples[i].x() * s;
      yc += samples[i].y() * c;
      ys += samples[i].y() * s;
    }
    x.cos[j - 1] = 2.0 * xc / N;
    x.sin[j - 1] = 2.0 * xs / N;
    y.cos[j - 1] = 2.0 * yc / N;
    y.sin[j - 1] = 2.0 * ys / N;
  }
  FourierCurve fit(std::move(x), std::move(y));
  double resid = 0.0;
  for (int i = 0; i < N; ++i)
    resid = std::max(resid, (fit.eval(two_pi * i / N, 0) - samples[i]).norm());
  return {std::move(fit), resid};
}

}  // namespace circline
