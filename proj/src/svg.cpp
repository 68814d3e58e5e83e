#include "circline/svg.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace circline {

namespace {

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

SvgCanvas::SvgCanvas(const Eigen::AlignedBox2d& world, double margin_frac) {
  Vec2 ext = world.diagonal();
  double span = std::max(ext.x(), ext.y());
  if (span <= 0) span = 1.0;
  span *= 1.0 + 2.0 * margin_frac;
  scale_ = 1000.0 / span;
  Vec2 c = world.center();
  offset_ = Vec2(500.0, 500.0) - Vec2(scale_ * c.x(), -scale_ * c.y());
}

Vec2 SvgCanvas::to_view(const Vec2& w) const {
  // y flipped so the mathematical y-axis points up
  return Vec2(offset_.x() + scale_ * w.x(), offset_.y() - scale_ * w.y());
}

void SvgCanvas::add_polyline(const std::vector<Vec2>& pts, const std::string& stroke,
                             double width) {
  std::ostringstream s;
  s << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
    << px(width) << "\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Vec2 v = to_view(pts[i]);
    s << (i ? " " : "") << px(v.x()) << "," << px(v.y());
  }
  s << "\"/>";
  body_.push_back(s.str());
}

void SvgCanvas::add_curve(const PlaneCurve& curve, const std::string& stroke,
                          double width) {
  const int N = 1024;
  std::vector<Vec2> pts(N + 1);
  for (int i = 0; i <= N; ++i) pts[i] = curve.eval(two_pi * i / N, 0);
  add_polyline(pts, stroke, width);
}

void SvgCanvas::add_circle(const Vec2& center, double radius, const std::string& stroke,
                           double width, const std::string& fill) {
  Vec2 v = to_view(center);
  std::ostringstream s;
  s << "<circle cx=\"" << px(v.x()) << "\" cy=\"" << px(v.y()) << "\" r=\""
    << px(scale_ * radius) << "\" fill=\"" << fill << "\" stroke=\"" << stroke
    << "\" stroke-width=\"" << px(width) << "\"/>";
  body_.push_back(s.str());
}

void SvgCanvas::add_dot(const Vec2& p, double px_radius, const std::string& fill) {
  Vec2 v = to_view(p);
  std::ostringstream s;
  s << "<circle cx=\"" << px(v.x()) << "\" cy=\"" << px(v.y()) << "\" r=\""
    << px(px_radius) << "\" fill=\"" << fill << "\"/>";
  body_.push_back(s.str());
}

std::string SvgCanvas::str() const {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\">\n";
  for (const auto& b : body_) out << "  " << b << "\n";
  out << "</svg>\n";
  return out.str();
}

void SvgCanvas::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Error::Kind::Parse, "cannot write '" + path + "'");
  f << str();
}

Eigen::AlignedBox2d SvgCanvas::fit_box(const PlaneCurve& curve,
                                       const std::vector<Vec2>& extra) {
  Eigen::AlignedBox2d box = curve.grid().bbox;
  for (const Vec2& p : extra) box.extend(p);
  return box;
}

}  // namespace circline
