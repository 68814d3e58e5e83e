// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria.
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "circline/curvespec.hpp"
#include "circline/vertices.hpp"
#include "test_helpers.hpp"

namespace fs = std::filesystem;
using namespace circline;
using namespace circline::testing;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void verdict(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  (%s)\n", criterion, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

// --- criterion 1: ellipse ground truth --------------------------------------

void criterion_1() {
  auto t0 = Clock::now();
  auto ell = normalize_orientation(make_ellipse(2.0, 1.0));
  const double pi = std::numbers::pi;
  const double params[] = {0.0, pi / 2, pi, 3 * pi / 2};
  const double expected[] = {2.0, 0.25, 2.0, 0.25};
  bool ok = true;
  for (int i = 0; i < 4; ++i)
    if (std::abs(signed_curvature(*ell, params[i]) - expected[i]) > 1e-9) ok = false;
  VertexList vl = find_vertices(*ell);
  if (vl.vertices.size() != 4) ok = false;
  for (int i = 0; ok && i < 4; ++i)
    if (param_distance(vl.vertices[i].t, params[i]) > 1e-8) ok = false;
  double dt = seconds_since(t0);
  verdict(1, ok && dt < 1.0, fmt("curvatures and 4 vertices, %.3f s", dt));
}

// --- criterion 2: Key Lemma suite -------------------------------------------

void criterion_2(const std::vector<CurvePtr>& corpus) {
  auto t0 = Clock::now();
  int bad = 0;
  for (const auto& c : corpus) {
    InsideSupportResult r = find_inside_support(*c, 0.0);
    // relax 10 puts the acceptance bound at 1e-6 * diameter exactly
    SupportVerdict v = classify_support(*c, r.t, r.circ, {}, 10.0);
    if (v.kind != SupportKind::InsideSupport) ++bad;
    double prev = std::numeric_limits<double>::infinity();
    for (const IterationStep& st : r.trace.steps) {
      if (st.arc_len > 0.5 * prev + 1e-9 * c->grid().total_length) ++bad;
      prev = st.arc_len;
    }
  }
  double dt = seconds_since(t0);
  verdict(2, bad == 0 && dt < 300.0,
          fmt("%zu curves, %d violations, %.1f s", corpus.size(), bad, dt));
}

// --- criterion 3: moon in a puddle ------------------------------------------

void criterion_3(const std::vector<CurvePtr>& corpus) {
  int bad = 0, n = 0;
  for (std::size_t i = 0; i < corpus.size() && n < 50; ++i, ++n) {
    auto f = std::dynamic_pointer_cast<const FourierCurve>(corpus[i]);
    if (!f) {
      auto rev = std::dynamic_pointer_cast<const ReversedCurve>(corpus[i]);
      f = std::dynamic_pointer_cast<const FourierCurve>(rev->base());
    }
    double kmax = max_abs_curvature(*corpus[i]).first;
    auto big = normalize_orientation(std::make_shared<FourierCurve>(f->scaled(kmax)));
    try {
      MoonDisc m = moon_in_puddle(*big);
      if (m.radius < 1.0 - 1e-6) ++bad;
      if (containment_radius(*big, m.center) < m.radius - 1e-6 * big->grid().diameter)
        ++bad;
    } catch (const Error&) {
      ++bad;
    }
  }
  verdict(3, bad == 0, fmt("%d rescaled curves, %d violations", n, bad));
}

// --- criterion 4: four-vertex generalization --------------------------------

void criterion_4(const std::vector<CurvePtr>& corpus) {
  auto t0 = Clock::now();
  int bad = 0;
  for (const auto& c : corpus) {
    try {
      FourVertexReport r = four_vertex_report(c);
      if (r.inside.size() < 2 || r.outside.size() < 2) {
        ++bad;
        continue;
      }
      std::vector<double> all = r.inside;
      all.insert(all.end(), r.outside.begin(), r.outside.end());
      for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = a + 1; b < all.size(); ++b)
          if (param_distance(all[a], all[b]) < 1e-4) ++bad;
      VertexList vl = find_vertices(*c);
      for (double t : all) {
        double best = two_pi;
        for (const Vertex& vx : vl.vertices)
          best = std::min(best, param_distance(t, vx.t));
        if (best > 1e-4) ++bad;
      }
      for (double t : r.inside)
        if (classify_support(*c, t, osculating_circline(*c, t), {}, 10.0).kind !=
            SupportKind::InsideSupport)
          ++bad;
      for (double t : r.outside)
        if (classify_support(*c, t, osculating_circline(*c, t), {}, 10.0).kind !=
            SupportKind::OutsideSupport)
          ++bad;
    } catch (const Error&) {
      ++bad;
    }
  }
  double dt = seconds_since(t0);
  verdict(4, bad == 0, fmt("%zu curves, %d violations, %.1f s", corpus.size(), bad, dt));
}

// --- criterion 5: inversion contact preservation ----------------------------

void criterion_5(const std::vector<CurvePtr>& corpus) {
  int bad = 0, n = 0;
  for (std::size_t i = 0; i < corpus.size() && n < 50; ++i, ++n) {
    const CurvePtr& c = corpus[i];
    InscribedDisc disc = largest_inscribed_disc(*c);
    double diam = c->grid().diameter;
    CurvePtr img = invert_curve(disc.center, disc.radius, c);
    double idiam = img->grid().diameter;
    for (int j = 0; j < 64; ++j) {
      double t = two_pi * j / 64;
      Circline direct = osculating_circline(*img, t);
      Circline mapped =
          invert_circline(disc.center, disc.radius, osculating_circline(*c, t), diam);
      double eps_k = 1e-8 / idiam;
      if (direct.is_line(eps_k) != mapped.is_line(eps_k)) {
        ++bad;
        continue;
      }
      if (direct.is_line(eps_k)) continue;
      if ((direct.center() - mapped.center()).norm() > 1e-6 * idiam ||
          std::abs(direct.radius() - mapped.radius()) > 1e-6 * direct.radius())
        ++bad;
    }
  }
  verdict(5, bad == 0, fmt("%d curves x 64 parameters, %d mismatches", n, bad));
}

// --- criterion 6: Tait-Kneser on maximal monotone arcs ----------------------

void criterion_6(const std::vector<CurvePtr>& corpus) {
  auto t0 = Clock::now();
  int bad = 0, arcs = 0, skipped = 0;
  for (const auto& c : corpus) {
    VertexList vl = find_vertices(*c);
    if (vl.constant_curvature) continue;
    std::size_t nv = vl.vertices.size();
    for (std::size_t i = 0; i < nv; ++i) {
      Arc full = Arc::between(vl.vertices[i].t, vl.vertices[(i + 1) % nv].t);
      // split at curvature zero-crossings: the osculating circline degenerates
      // to a line there and nesting is only defined piecewise
      std::vector<double> cuts = {0.0};
      const int S = 64;
      for (int j = 0; j < S; ++j) {
        double a = signed_curvature(*c, full.at(double(j) / S));
        double b = signed_curvature(*c, full.at(double(j + 1) / S));
        if (a * b < 0) {
          double lo = double(j) / S, hi = double(j + 1) / S;
          for (int it = 0; it < 50; ++it) {
            double mid = 0.5 * (lo + hi);
            if ((signed_curvature(*c, full.at(mid)) > 0) == (a > 0)) lo = mid;
            else hi = mid;
          }
          cuts.push_back(0.5 * (lo + hi));
        }
      }
      cuts.push_back(1.0);
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        double span = (cuts[k + 1] - cuts[k]) * full.span;
        if (span < 20 * 1e-4) {
          ++skipped;
          continue;
        }
        // inset from vertices (kappa' -> 0) and zero crossings (kappa -> 0)
        Arc piece = Arc::between(full.at(cuts[k] + 0.02 * (cuts[k + 1] - cuts[k])),
                                 full.at(cuts[k + 1] - 0.02 * (cuts[k + 1] - cuts[k])));
        try {
          if (!tait_kneser_check(*c, piece).holds) ++bad;
          ++arcs;
        } catch (const Error& e) {
          if (e.kind() == Error::Kind::NotMonotone) ++skipped;
          else ++bad;
        }
      }
    }
  }
  double dt = seconds_since(t0);
  verdict(6, bad == 0 && arcs > 0,
          fmt("%d arcs nested, %d degenerate skipped, %d failures, %.1f s", arcs,
              skipped, bad, dt));
}

// --- criterion 7: exercise oracles ------------------------------------------

void criterion_7(const std::vector<CurvePtr>& corpus) {
  auto t0 = Clock::now();
  auto container = normalize_orientation(make_circle(2.0));
  int bad = 0, n = 0;
  for (std::size_t i = 0; i < corpus.size() && n < 100; ++i, ++n) {
    try {
      if (!exercise_moon_rad(*corpus[i], *container).holds) ++bad;
    } catch (const Error&) {
      ++bad;
    }
  }

  int crossings_ok = 0, tried = 0;
  for (std::size_t i = 0; i < corpus.size() && crossings_ok < 99; ++i) {
    const CurvePtr& c = corpus[i];
    const GridCache& g = c->grid();
    Vec2 z = Vec2::Zero();
    for (const Vec2& p : g.pos) z += p;
    z /= double(g.n);
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    for (const Vec2& p : g.pos) {
      double d = (p - z).norm();
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    }
    ++tried;
    for (double frac : {0.5, 0.42, 0.58, 0.34, 0.66}) {
      double rho = dmin + frac * (dmax - dmin);
      Circline circ;
      circ.anchor = z + Vec2(rho, 0);
      circ.tangent = Vec2(0, 1);
      circ.k = 1.0 / rho;
      try {
        CrossingReport r = crossing_vertex_check(*c, circ);
        if (r.n >= 1 && r.interleaved) {
          if (r.holds) ++crossings_ok;
          else ++bad;
          break;
        }
      } catch (const Error&) {
        continue;  // tangential or odd count: try the next radius
      }
    }
  }
  // the constructed 8-crossing case
  auto wav = normalize_orientation(make_wavy(1.0, 0.15, 4));
  Circline c8;
  c8.anchor = Vec2(1.03, 0);
  c8.tangent = Vec2(0, 1);
  c8.k = 1.0 / 1.03;
  try {
    CrossingReport r8 = crossing_vertex_check(*wav, c8);
    if (r8.n == 4 && r8.interleaved && r8.holds) ++crossings_ok;
    else ++bad;
  } catch (const Error&) {
    ++bad;
  }
  double dt = seconds_since(t0);
  verdict(7, bad == 0 && n == 100 && crossings_ok >= 100,
          fmt("%d moon-rad + %d interleaved-crossing instances, %d violations, %.1f s",
              n, crossings_ok, bad, dt));
}

// --- criterion 8: brute-force equivalence -----------------------------------

// Independent largest-disc oracle: 512x512 grid, scanline parity for the
// inside test, bucketed nearest-sample distance.
double grid_disc_oracle(const PlaneCurve& c) {
  const int M = 16384;
  std::vector<Vec2> poly(M);
  for (int i = 0; i < M; ++i) poly[i] = c.eval(two_pi * i / M, 0);

  Eigen::AlignedBox2d box = c.grid().bbox;
  Vec2 lo = box.min(), size = box.sizes();
  const int G = 512;

  // bucket the samples on a coarse grid for nearest-neighbour queries
  const int B = 128;
  std::vector<std::vector<int>> bucket(B * B);
  auto bx = [&](const Vec2& p) {
    int i = int((p.x() - lo.x()) / size.x() * B);
    int j = int((p.y() - lo.y()) / size.y() * B);
    return std::pair(std::clamp(i, 0, B - 1), std::clamp(j, 0, B - 1));
  };
  for (int i = 0; i < M; ++i) {
    auto [a, b] = bucket.empty() ? std::pair(0, 0) : bx(poly[i]);
    bucket[a * B + b].push_back(i);
  }
  // buckets are anisotropic; only the smaller extent bounds the distance
  // guaranteed by a ring, so prune with that one
  double cell = std::min(size.x(), size.y()) / B;
  auto nearest = [&](const Vec2& p) {
    auto [ci, cj] = bx(p);
    double best = std::numeric_limits<double>::infinity();
    for (int ring = 0; ring < B; ++ring) {
      if (best < (ring - 1) * cell) break;
      for (int i = std::max(0, ci - ring); i <= std::min(B - 1, ci + ring); ++i)
        for (int j = std::max(0, cj - ring); j <= std::min(B - 1, cj + ring); ++j) {
          if (std::max(std::abs(i - ci), std::abs(j - cj)) != ring) continue;
          for (int idx : bucket[i * B + j])
            best = std::min(best, (poly[idx] - p).norm());
        }
    }
    return best;
  };

  double best = 0.0;
  std::vector<double> xs;
  for (int j = 0; j < G; ++j) {
    double y = lo.y() + (j + 0.5) / G * size.y();
    xs.clear();
    for (int i = 0; i < M; ++i) {
      const Vec2 &a = poly[i], &b = poly[(i + 1) % M];
      if ((a.y() > y) != (b.y() > y))
        xs.push_back(a.x() + (y - a.y()) / (b.y() - a.y()) * (b.x() - a.x()));
    }
    std::sort(xs.begin(), xs.end());
    for (int i = 0; i < G; ++i) {
      double x = lo.x() + (i + 0.5) / G * size.x();
      std::size_t k = std::lower_bound(xs.begin(), xs.end(), x) - xs.begin();
      if (k % 2 == 0) continue;  // outside
      best = std::max(best, nearest(Vec2(x, y)));
    }
  }
  return best;
}

void criterion_8(const std::vector<CurvePtr>& corpus) {
  auto t0 = Clock::now();
  int bad_disc = 0;
  for (int i = 0; i < 20; ++i) {
    const CurvePtr& c = corpus[i];
    double oracle = grid_disc_oracle(*c);
    double got = largest_inscribed_disc(*c).radius;
    if (std::abs(got - oracle) > 1e-3 * c->grid().diameter) ++bad_disc;
  }
  int bad_simple = 0;
  for (const auto& c : corpus)
    if (is_simple(*c).simple != polygon_simplicity_oracle(*c, 4096).simple)
      ++bad_simple;
  // non-simple cases must agree too
  if (is_simple(*make_limacon(1.0, 2.0)).simple !=
      polygon_simplicity_oracle(*make_limacon(1.0, 2.0), 4096).simple)
    ++bad_simple;
  double dt = seconds_since(t0);
  verdict(8, bad_disc == 0 && bad_simple == 0,
          fmt("disc oracle on 20 curves (%d off), simplicity on %zu curves (%d off), %.1f s",
              bad_disc, corpus.size() + 1, bad_simple, dt));
}

// --- criterion 9: fuzz determinism ------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void criterion_9() {
  fs::path base = fs::temp_directory_path() / "circline_acceptance";
  fs::path a = base / "a", b = base / "b";
  fs::remove_all(a);
  fs::remove_all(b);
  std::string bin = CIRCLINE_LAB_BIN;
  int r1 = std::system(
      (bin + " fuzz --count 10 --seed 7 --out " + a.string() + " > /dev/null").c_str());
  int r2 = std::system(
      (bin + " fuzz --count 10 --seed 7 --out " + b.string() + " > /dev/null").c_str());
  std::string ma = slurp(a / "fuzz_manifest.txt");
  bool ok = r1 == 0 && r2 == 0 && !ma.empty() && ma == slurp(b / "fuzz_manifest.txt");
  verdict(9, ok, fmt("two fuzz runs, manifests %s", ok ? "byte-identical" : "differ"));
}

}  // namespace

int main() {
  auto corpus = test_corpus(200);
  criterion_1();
  criterion_2(corpus);
  criterion_3(corpus);
  criterion_4(corpus);
  criterion_5(corpus);
  criterion_6(corpus);
  criterion_7(corpus);
  criterion_8(corpus);
  criterion_9();
  std::printf("%s (%d/9)\n", failures == 0 ? "ALL CRITERIA PASS" : "FAILURES PRESENT",
              9 - failures);
  return failures;
}
