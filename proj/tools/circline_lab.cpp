#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "circline/curvespec.hpp"
#include "circline/report.hpp"
#include "circline/svg.hpp"
#include "circline/vertices.hpp"

namespace fs = std::filesystem;
using namespace circline;

namespace {

struct CommonOpts {
  std::string spec_path;
  std::vector<std::string> tol_overrides;
  std::uint64_t seed = 1;
  std::string out_dir;
  bool svg = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool need_spec) {
  auto* s = cmd->add_option("--spec", o.spec_path, "curve-spec file");
  if (need_spec) s->required();
  cmd->add_option("--tol", o.tol_overrides, "tolerance override KEY=VAL");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_flag("--svg", o.svg, "emit an SVG rendering");
}

Tolerances parse_tols(const std::vector<std::string>& overrides) {
  Tolerances tol;
  for (const std::string& kv : overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw Error(Error::Kind::Parse, "--tol expects KEY=VAL, got '" + kv + "'");
    std::string key = kv.substr(0, eq);
    double val = 0.0;
    try {
      std::size_t used = 0;
      val = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw Error(Error::Kind::Parse, "--tol " + key + ": bad number");
    }
    if (!tol.set(key, val))
      throw Error(Error::Kind::Parse, "--tol: unknown key '" + key + "'");
  }
  return tol;
}

struct LoadedCurve {
  CurvePtr curve;
  std::string hash;  // of the raw spec file bytes
};

LoadedCurve load(const CommonOpts& o, const Tolerances& tol) {
  std::ifstream f(o.spec_path);
  if (!f) throw Error(Error::Kind::Parse, "cannot open spec file: " + o.spec_path);
  std::stringstream ss;
  ss << f.rdbuf();
  std::string text = ss.str();
  CurveSpec spec = parse_curve_spec(text);
  return {normalize_orientation(build_curve(spec, tol), tol), fnv1a_hex(text)};
}

void start_report(Report& rep, const std::string& command, const LoadedCurve& lc,
                  const CommonOpts& o) {
  rep.add("command", command);
  rep.add("spec_hash", lc.hash);
  for (const std::string& kv : o.tol_overrides) rep.add("tol_override", kv);
}

void emit(const Report& rep, const CommonOpts& o, const std::string& command) {
  std::cout << rep.str();
  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    rep.save((fs::path(o.out_dir) / (command + "_report.txt")).string());
  }
}

void save_svg(const SvgCanvas& canvas, const CommonOpts& o, const std::string& command) {
  fs::path dir = o.out_dir.empty() ? fs::path(".") : fs::path(o.out_dir);
  fs::create_directories(dir);
  canvas.save((dir / (command + ".svg")).string());
}

std::pair<double, double> min_signed_curvature(const PlaneCurve& c) {
  const GridCache& g = c.grid();
  double h = two_pi / g.n;
  double best_v = std::numeric_limits<double>::infinity(), best_t = 0.0;
  for (int i = 0; i < g.n; ++i) {
    if (g.kappa[i] <= g.kappa[(i + 1) % g.n] &&
        g.kappa[i] <= g.kappa[(i + g.n - 1) % g.n]) {
      double lo = g.t[i] - h, hi = g.t[i] + h;
      // golden-section refinement of the local minimum
      const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
      double a = lo, b = hi;
      double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
      double f1 = signed_curvature(c, x1), f2 = signed_curvature(c, x2);
      while (b - a > 1e-12) {
        if (f1 < f2) {
          b = x2; x2 = x1; f2 = f1;
          x1 = b - gr * (b - a); f1 = signed_curvature(c, x1);
        } else {
          a = x1; x1 = x2; f1 = f2;
          x2 = a + gr * (b - a); f2 = signed_curvature(c, x2);
        }
      }
      double t = wrap_param(0.5 * (a + b));
      double v = signed_curvature(c, t);
      if (v < best_v) { best_v = v; best_t = t; }
    }
  }
  return {best_v, best_t};
}

const char* tag_name(VertexTag tag) {
  switch (tag) {
    case VertexTag::LocalMax: return "max";
    case VertexTag::LocalMin: return "min";
    default: return "degenerate";
  }
}

int cmd_analyze(const CommonOpts& o) {
  Tolerances tol = parse_tols(o.tol_overrides);
  LoadedCurve lc = load(o, tol);
  const PlaneCurve& c = *lc.curve;

  Report rep;
  start_report(rep, "analyze", lc, o);
  rep.add("degree", c.degree());
  rep.add("length", arc_length(c, Arc{0, two_pi}, tol));
  rep.add("area", signed_area(c));
  SimplicityVerdict sv = is_simple(c, tol);
  rep.add("simple", sv.simple);
  if (!sv.simple) {
    rep.add("self_intersection.s", sv.s);
    rep.add("self_intersection.t", sv.t);
  }
  auto [kmax, tmax] = max_abs_curvature(c);
  auto [kmin, tmin] = min_signed_curvature(c);
  rep.add("max_kappa", signed_curvature(c, tmax, tol));
  rep.add("max_kappa_param", tmax);
  rep.add("min_kappa", kmin);
  rep.add("min_kappa_param", tmin);
  (void)kmax;

  VertexList vl = find_vertices(c, tol);
  rep.add("constant_curvature", vl.constant_curvature);
  rep.add("vertex_count", int(vl.vertices.size()));
  for (std::size_t i = 0; i < vl.vertices.size(); ++i) {
    std::string p = "vertex." + std::to_string(i) + ".";
    rep.add(p + "t", vl.vertices[i].t);
    rep.add(p + "kappa", vl.vertices[i].kappa);
    rep.add(p + "tag", tag_name(vl.vertices[i].tag));
  }
  emit(rep, o, "analyze");

  if (o.svg) {
    SvgCanvas canvas(SvgCanvas::fit_box(c));
    canvas.add_curve(c, "#1a1a1a");
    for (const Vertex& v : vl.vertices)
      canvas.add_dot(c.eval(v.t, 0), 4.0,
                     v.tag == VertexTag::LocalMax ? "#c0392b" : "#2980b9");
    save_svg(canvas, o, "analyze");
  }
  return 0;
}

int cmd_moon(const CommonOpts& o) {
  Tolerances tol = parse_tols(o.tol_overrides);
  LoadedCurve lc = load(o, tol);
  const PlaneCurve& c = *lc.curve;

  Report rep;
  start_report(rep, "moon", lc, o);
  try {
    MoonDisc disc = moon_in_puddle(c, tol);
    rep.add("disc_center", disc.center);
    rep.add("disc_radius", disc.radius);
    rep.add("support_param", disc.support_param);
    rep.add("iterations", int(disc.trace.steps.size()));
    emit(rep, o, "moon");
    if (o.svg) {
      std::vector<Vec2> extra = {disc.center + Vec2(disc.radius, 0),
                                 disc.center - Vec2(disc.radius, 0)};
      SvgCanvas canvas(SvgCanvas::fit_box(c, extra));
      canvas.add_curve(c, "#1a1a1a");
      for (const IterationStep& st : disc.trace.steps)
        if (!st.incircle.is_line(tol.eps_k_rel / c.grid().diameter))
          canvas.add_circle(st.incircle.center(), st.incircle.radius(), "#95a5a6", 1.0);
      canvas.add_circle(disc.center, disc.radius, "#27ae60", 2.5);
      canvas.add_dot(disc.center, 3.0, "#27ae60");
      save_svg(canvas, o, "moon");
    }
    return 0;
  } catch (const Error& e) {
    if (e.kind() == Error::Kind::CurvatureTooLarge) {
      auto [kmax, targ] = max_abs_curvature(c);
      rep.add("error", e.what());
      rep.add("max_kappa", kmax);
      rep.add("max_kappa_param", targ);
      emit(rep, o, "moon");
    }
    throw;
  }
}

int cmd_vertices(const CommonOpts& o) {
  Tolerances tol = parse_tols(o.tol_overrides);
  LoadedCurve lc = load(o, tol);
  const PlaneCurve& c = *lc.curve;

  Report rep;
  start_report(rep, "vertices", lc, o);
  VertexList vl = find_vertices(c, tol);
  rep.add("constant_curvature", vl.constant_curvature);
  if (vl.constant_curvature)
    rep.add("notice", "constant curvature: every point is a vertex");
  rep.add("vertex_count", int(vl.vertices.size()));
  for (std::size_t i = 0; i < vl.vertices.size(); ++i) {
    std::string p = "vertex." + std::to_string(i) + ".";
    rep.add(p + "t", vl.vertices[i].t);
    rep.add(p + "kappa", vl.vertices[i].kappa);
    rep.add(p + "tag", tag_name(vl.vertices[i].tag));
  }
  emit(rep, o, "vertices");

  if (o.svg) {
    SvgCanvas canvas(SvgCanvas::fit_box(c));
    canvas.add_curve(c, "#1a1a1a");
    for (const Vertex& v : vl.vertices)
      canvas.add_dot(c.eval(v.t, 0), 4.0,
                     v.tag == VertexTag::LocalMax ? "#c0392b" : "#2980b9");
    save_svg(canvas, o, "vertices");
  }
  return 0;
}

int cmd_support(const CommonOpts& o, double t_at, bool has_t) {
  Tolerances tol = parse_tols(o.tol_overrides);
  LoadedCurve lc = load(o, tol);
  const PlaneCurve& c = *lc.curve;

  Report rep;
  start_report(rep, "support", lc, o);

  if (has_t) {
    Circline circ = osculating_circline(c, t_at, tol);
    SupportVerdict v = classify_support(c, t_at, circ, tol);
    rep.add("t", t_at);
    rep.add("kappa", signed_curvature(c, t_at, tol));
    const char* kinds[] = {"inside_support", "outside_support", "not_supporting"};
    rep.add("verdict", kinds[int(v.kind)]);
    if (v.violation_witness) {
      rep.add("violation_witness", *v.violation_witness);
      rep.add("max_violation", v.max_violation);
    }
    emit(rep, o, "support");
    return 0;
  }

  FourVertexReport fv = four_vertex_report(lc.curve, tol);
  rep.add("dense_support", fv.dense_support);
  rep.add("inversion_center", fv.inversion_center);
  rep.add("inversion_radius", fv.inversion_radius);
  auto dump = [&](const char* name, const std::vector<double>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::string p = std::string(name) + "." + std::to_string(i) + ".";
      rep.add(p + "t", pts[i]);
      rep.add(p + "kappa", signed_curvature(c, pts[i], tol));
    }
  };
  dump("inside", fv.inside);
  dump("outside", fv.outside);
  emit(rep, o, "support");

  if (o.svg) {
    SvgCanvas canvas(SvgCanvas::fit_box(c));
    canvas.add_curve(c, "#1a1a1a");
    double eps_k = tol.eps_k_rel / c.grid().diameter;
    for (double t : fv.inside) {
      Circline circ = osculating_circline(c, t, tol);
      if (!circ.is_line(eps_k))
        canvas.add_circle(circ.center(), circ.radius(), "#27ae60", 1.5);
      canvas.add_dot(c.eval(t, 0), 4.0, "#27ae60");
    }
    for (double t : fv.outside) {
      Circline circ = osculating_circline(c, t, tol);
      if (!circ.is_line(eps_k))
        canvas.add_circle(circ.center(), circ.radius(), "#c0392b", 1.5);
      canvas.add_dot(c.eval(t, 0), 4.0, "#c0392b");
    }
    save_svg(canvas, o, "support");
  }
  return 0;
}

int cmd_invert(const CommonOpts& o, const std::vector<double>& center_v, double radius) {
  Tolerances tol = parse_tols(o.tol_overrides);
  LoadedCurve lc = load(o, tol);
  Vec2 center(center_v[0], center_v[1]);

  CurvePtr img = invert_curve(center, radius, lc.curve, tol);

  // fit a trigonometric form until the residual is negligible
  double target = 1e-9 * img->grid().diameter;
  int deg = std::max(4, lc.curve->degree());
  FourierCurve fit = fourier_fit(*img, deg).first;
  double resid = 0.0;
  for (; deg <= 256; deg *= 2) {
    auto [f, r] = fourier_fit(*img, deg);
    fit = std::move(f);
    resid = r;
    if (resid <= target) break;
  }

  Report rep;
  start_report(rep, "invert", lc, o);
  rep.add("inversion_center", center);
  rep.add("inversion_radius", radius);
  rep.add("fit_degree", fit.degree());
  rep.add("fit_residual", resid);
  // the fitted spec lines are already `key = value`; merge them in
  std::istringstream coeffs(format_curve_spec(fit));
  for (std::string line; std::getline(coeffs, line);) {
    auto eq = line.find(" = ");
    if (eq != std::string::npos)
      rep.add("fit." + line.substr(0, eq), line.substr(eq + 3));
  }
  emit(rep, o, "invert");

  if (o.svg) {
    SvgCanvas canvas(SvgCanvas::fit_box(*lc.curve));
    canvas.add_curve(*lc.curve, "#1a1a1a");
    canvas.add_curve(*img, "#8e44ad");
    canvas.add_circle(center, radius, "#95a5a6", 1.0);
    save_svg(canvas, o, "invert");
  }
  return 0;
}

int cmd_render(const CommonOpts& o) {
  Tolerances tol = parse_tols(o.tol_overrides);
  LoadedCurve lc = load(o, tol);
  SvgCanvas canvas(SvgCanvas::fit_box(*lc.curve));
  canvas.add_curve(*lc.curve, "#1a1a1a");
  save_svg(canvas, o, "render");
  Report rep;
  start_report(rep, "render", lc, o);
  rep.add("svg", "render.svg");
  emit(rep, o, "render");
  return 0;
}

// --- fuzz -------------------------------------------------------------------

struct FuzzCase {
  std::string manifest;
  std::string spec_text;  // for failure dumps
  bool pass = false;
  bool rejected = false;
};

FuzzCase run_fuzz_case(int index, int degree, double amplitude, std::uint64_t seed,
                       const Tolerances& tol) {
  FuzzCase out;
  Report m;
  std::uint64_t case_seed = seed + std::uint64_t(index);
  m.add("case", index);
  m.add("case_seed", double(case_seed));

  CurvePtr c;
  try {
    c = normalize_orientation(make_fourier_random(degree, amplitude, case_seed, tol), tol);
  } catch (const Error& e) {
    if (e.kind() == Error::Kind::RejectionExhausted) {
      m.add("outcome", "rejection_exhausted");
      out.rejected = true;
      out.manifest = m.str();
      return out;
    }
    throw;
  }
  auto f = std::dynamic_pointer_cast<const FourierCurve>(c);
  if (!f) {
    auto rev = std::dynamic_pointer_cast<const ReversedCurve>(c);
    f = std::dynamic_pointer_cast<const FourierCurve>(rev->base());
  }
  out.spec_text = format_curve_spec(*f);
  m.add("spec_hash", fnv1a_hex(out.spec_text));

  bool all = true;
  auto check = [&](const char* name, bool ok) {
    m.add(std::string("check.") + name, ok ? "pass" : "fail");
    all = all && ok;
  };

  const GridCache& g = c->grid();
  double diam = g.diameter;

  try {
    check("regular", g.min_speed >= tol.eps_reg);
    check("simple", is_simple(*c, tol).simple);
    check("turning", std::abs(total_turning(*c) - two_pi) < 1e-6);

    VertexList vl = find_vertices(*c, tol);
    check("four_vertices", vl.vertices.size() >= 4);

    InsideSupportResult ins = find_inside_support(*c, 0.0, tol);
    SupportVerdict sv = classify_support(*c, ins.t, ins.circ, tol, 10.0);
    check("inside_support", sv.kind == SupportKind::InsideSupport);

    bool halving = true;
    double prev = std::numeric_limits<double>::infinity();
    for (const IterationStep& st : ins.trace.steps) {
      if (st.arc_len > 0.5 * prev + 1e-9 * g.total_length) halving = false;
      prev = st.arc_len;
    }
    check("halving", halving);

    double kmax = max_abs_curvature(*c).first;
    auto scaled = std::make_shared<FourierCurve>(f->scaled(kmax));
    CurvePtr moon_curve = normalize_orientation(scaled, tol);
    MoonDisc disc = moon_in_puddle(*moon_curve, tol);
    double cont = containment_radius(*moon_curve, disc.center, tol);
    check("moon", disc.radius >= 1.0 - 1e-6 &&
                      cont >= disc.radius - 1e-6 * moon_curve->grid().diameter);

    InscribedDisc big = largest_inscribed_disc(*c, tol);
    CurvePtr img = invert_curve(big.center, big.radius, c, tol);
    bool contact = true;
    for (int i = 0; i < 8 && contact; ++i) {
      double t = two_pi * i / 8;
      Circline direct = osculating_circline(*img, t, tol);
      Circline mapped =
          invert_circline(big.center, big.radius, osculating_circline(*c, t, tol), diam, tol);
      double idiam = img->grid().diameter;
      double eps_k = tol.eps_k_rel / idiam;
      if (direct.is_line(eps_k) != mapped.is_line(eps_k)) contact = false;
      else if (!direct.is_line(eps_k) &&
               ((direct.center() - mapped.center()).norm() > 1e-6 * idiam ||
                std::abs(direct.radius() - mapped.radius()) > 1e-6 * direct.radius()))
        contact = false;
    }
    check("inversion_contact", contact);

    // nesting on arcs between consecutive vertices where kappa keeps its sign
    bool nested = true;
    int arcs_checked = 0;
    for (std::size_t i = 0; i < vl.vertices.size() && arcs_checked < 4; ++i) {
      double a = vl.vertices[i].t;
      double b = vl.vertices[(i + 1) % vl.vertices.size()].t;
      Arc arc = Arc::between(a, b);
      if (arc.span < 20 * tol.delta_param) continue;
      Arc inner = Arc::between(arc.at(0.02), arc.at(0.98));
      bool sign_ok = true;
      for (int j = 0; j <= 16; ++j)
        if (signed_curvature(*c, inner.at(j / 16.0), tol) <= 0) sign_ok = false;
      if (!sign_ok) continue;
      try {
        if (!tait_kneser_check(*c, inner, tol).holds) nested = false;
        ++arcs_checked;
      } catch (const Error& e) {
        if (e.kind() != Error::Kind::NotMonotone) throw;
      }
    }
    check("tait_kneser", nested);
  } catch (const Error& e) {
    m.add("error", e.what());
    all = false;
  }

  m.add("outcome", all ? "pass" : "fail");
  out.pass = all;
  out.manifest = m.str();
  return out;
}

int cmd_fuzz(const CommonOpts& o, int count, int degree, double amplitude) {
  if (count < 1) throw Error(Error::Kind::Parse, "fuzz: count must be >= 1");
  Tolerances tol = parse_tols(o.tol_overrides);

  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CIRCLINE_LAB_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1) threads = unsigned(v);
  }
  threads = std::min<unsigned>(threads, unsigned(count));

  std::vector<FuzzCase> results(count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= count) return;
      results[i] = run_fuzz_case(i, degree, amplitude, o.seed, tol);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  int passed = 0, failed = 0, rejected = 0;
  for (const FuzzCase& fc : results) {
    if (fc.rejected) ++rejected;
    else if (fc.pass) ++passed;
    else ++failed;
  }

  Report summary;
  summary.add("command", "fuzz");
  summary.add("count", count);
  summary.add("degree", degree);
  summary.add("amplitude", amplitude);
  summary.add("seed", double(o.seed));
  for (const std::string& kv : o.tol_overrides) summary.add("tol_override", kv);
  summary.add("cases_passed", passed);
  summary.add("cases_failed", failed);
  summary.add("cases_rejected", rejected);
  summary.add("rejection_rate", count ? double(rejected) / count : 0.0);
  summary.add("outcome", failed == 0 ? "pass" : "fail");

  // one deterministic manifest: summary, then each case block in index order
  std::string manifest = summary.str();
  for (const FuzzCase& fc : results) manifest += "\n" + fc.manifest;

  fs::path dir = o.out_dir.empty() ? fs::path(".") : fs::path(o.out_dir);
  fs::create_directories(dir);
  {
    std::ofstream mf(dir / "fuzz_manifest.txt", std::ios::binary);
    mf << manifest;
  }
  for (int i = 0; i < count; ++i) {
    if (results[i].pass || results[i].rejected) continue;
    fs::create_directories(dir / "failures");
    char name[32];
    std::snprintf(name, sizeof(name), "case_%04d", i);
    std::ofstream sf(dir / "failures" / (std::string(name) + ".curve"), std::ios::binary);
    sf << results[i].spec_text;
    std::ofstream ff(dir / "failures" / (std::string(name) + ".manifest"), std::ios::binary);
    ff << results[i].manifest;
  }

  std::cout << summary.str();
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constructive geometry of inscribed circles and curve vertices"};
  app.require_subcommand(1);

  CommonOpts o;
  int fuzz_count = 20, fuzz_degree = 4;
  double fuzz_amplitude = 0.2;
  double support_t = 0.0;
  std::vector<double> inv_center = {0.0, 0.0};
  double inv_radius = 1.0;

  auto* analyze = app.add_subcommand("analyze", "curvature, length, area, vertices");
  add_common(analyze, o, true);
  auto* moon = app.add_subcommand("moon", "inscribed unit disc for curves with |kappa| <= 1");
  add_common(moon, o, true);
  auto* vertices = app.add_subcommand("vertices", "critical points of the signed curvature");
  add_common(vertices, o, true);
  auto* support = app.add_subcommand("support", "supporting osculating circlines");
  add_common(support, o, true);
  auto* t_opt = support->add_option("--t", support_t, "classify the osculating circline at t");
  auto* invert = app.add_subcommand("invert", "inversion image of the curve");
  add_common(invert, o, true);
  invert->add_option("--center", inv_center, "inversion center x y")->expected(2);
  invert->add_option("--radius", inv_radius, "inversion radius");
  auto* fuzz = app.add_subcommand("fuzz", "random-curve invariant suite");
  add_common(fuzz, o, false);
  fuzz->add_option("--count", fuzz_count, "number of cases");
  fuzz->add_option("--degree", fuzz_degree, "trigonometric degree");
  fuzz->add_option("--amplitude", fuzz_amplitude, "perturbation amplitude");
  auto* render = app.add_subcommand("render", "SVG rendering of the curve");
  add_common(render, o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(analyze)) return cmd_analyze(o);
    if (app.got_subcommand(moon)) return cmd_moon(o);
    if (app.got_subcommand(vertices)) return cmd_vertices(o);
    if (app.got_subcommand(support)) return cmd_support(o, support_t, t_opt->count() > 0);
    if (app.got_subcommand(invert)) return cmd_invert(o, inv_center, inv_radius);
    if (app.got_subcommand(fuzz)) return cmd_fuzz(o, fuzz_count, fuzz_degree, fuzz_amplitude);
    if (app.got_subcommand(render)) return cmd_render(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
