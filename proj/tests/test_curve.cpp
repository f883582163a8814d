#include "netforge/curve.hpp"

#include <random>

#include "doctest.h"
#include "netforge/errors.hpp"

using namespace netforge;

TEST_CASE("four symmetric points give the unit circle") {
  CurveSpec spec;
  spec.through_points = {cplx(1), cplx(0, 1), cplx(-1), cplx(0, -1)};
  spec.fourier_degree = 4;
  auto c = curve_through(spec);
  CHECK(std::abs(c.coeff(1) - cplx(1)) < 1e-6);
  for (int k = -4; k <= 4; ++k)
    if (k != 1) CHECK(std::abs(c.coeff(k)) < 1e-6);
}

TEST_CASE("two points give an analytic oval, not a segment") {
  CurveSpec spec;
  spec.through_points = {cplx(-1), cplx(1)};
  spec.fourier_degree = 2;
  auto c = curve_through(spec);
  auto rep = is_jordan(c, 512);
  CHECK(rep.jordan);
  // c_{+-1} = (1 +- eps)/2 with smoothing-determined eps > 0.
  double eps = (c.coeff(1) - c.coeff(-1)).real();
  CHECK(eps > 1e-6);
  CHECK(std::abs(c.coeff(1) + c.coeff(-1) - cplx(1)) < 1e-8);
  CHECK(chordal(c(0.0), SpherePoint(cplx(1))) < 1e-10);
  CHECK(chordal(c(kPi), SpherePoint(cplx(-1))) < 1e-10);
}

TEST_CASE("curve through infinity uses a chart") {
  CurveSpec spec;
  spec.through_points = {cplx(-2), cplx(2), SpherePoint::infinity()};
  auto c = curve_through(spec);
  CHECK(c.chart.has_value());
  // All three points hit to 1e-10 at their nodes.
  int hits = 0;
  for (int j = 0; j < 3; ++j) {
    double t = 2.0 * kPi * j / 3;
    for (auto& p : spec.through_points)
      if (chordal(c(t), p) < 1e-10) ++hits;
  }
  CHECK(hits == 3);
  CHECK(is_jordan(c, 512).jordan);
}

TEST_CASE("figure eight fails the jordan check, monotonically") {
  AnalyticJordanCurve c;
  c.M = 1;
  c.fourier = {cplx(1), cplx(0), cplx(1)};  // 2 cos t: degenerate segment
  auto rep = is_jordan(c, 256);
  CHECK_FALSE(rep.jordan);
  auto rep2 = is_jordan(c, 512);
  CHECK_FALSE(rep2.jordan);
  // Refined witness stays in the neighborhood of the coarse one.
  if (rep.witness_a >= 0 && rep2.witness_a >= 0) {
    double ta = 2.0 * kPi * rep.witness_a / 256;
    double tb = 2.0 * kPi * rep2.witness_a / 512;
    double d = std::abs(std::remainder(ta - tb, 2.0 * kPi));
    CHECK(d < 4.0 * 2.0 * kPi / 256);
  }
}

TEST_CASE("ellipse passes and min gap matches the chord formula on a circle") {
  AnalyticJordanCurve e;
  e.M = 1;
  e.fourier = {cplx(0.2), cplx(0), cplx(1.2)};
  CHECK(is_jordan(e, 512).jordan);

  auto circ = unit_circle_curve();
  auto rep = is_jordan(circ, 512);
  CHECK(rep.jordan);
  CHECK(rep.min_gap == doctest::Approx(2.0 * std::sin(kPi / 512)).epsilon(1e-6));
}

TEST_CASE("random specs interpolate to 1e-10") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 6; ++trial) {
    CurveSpec spec;
    int n = 3 + int(rng() % 4);
    for (int i = 0; i < n; ++i) {
      cplx p;
      bool ok = false;
      while (!ok) {
        p = cplx(u(rng), u(rng));
        ok = true;
        for (auto& q : spec.through_points)
          if (chordal(q, SpherePoint(p)) < 0.3) ok = false;
      }
      spec.through_points.push_back(p);
    }
    AnalyticJordanCurve c;
    try {
      c = curve_through(spec);
    } catch (const Error&) {
      continue;  // retry-capped draws are fine to skip
    }
    double worst = 0;
    for (int j = 0; j < n; ++j) {
      double t = 2.0 * kPi * j / n;
      double best = 4;
      for (auto& p : spec.through_points)
        best = std::min(best, chordal(c(t), p));
      worst = std::max(worst, best);
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("extended real line hits 0, 1, infinity") {
  auto c = extended_real_line();
  CHECK(chordal(c(0.0), SpherePoint(cplx(0))) < 1e-12);
  CHECK(chordal(c(kPi / 2), SpherePoint(cplx(1))) < 1e-12);
  CHECK(chordal(c(kPi), SpherePoint::infinity()) < 1e-12);
  // Real-valued everywhere.
  for (double t = 0.1; t < 6.2; t += 0.37) {
    SpherePoint p = c(t);
    if (p.finite()) CHECK(std::abs(p.value.imag()) < 1e-12);
  }
}
