#include "netforge/curve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "netforge/errors.hpp"

namespace netforge {

cplx AnalyticJordanCurve::f(double t) const {
  cplx acc = 0;
  for (int k = -M; k <= M; ++k)
    acc += coeff(k) * std::polar(1.0, k * t);
  return acc;
}

cplx AnalyticJordanCurve::df(double t) const {
  cplx acc = 0;
  for (int k = -M; k <= M; ++k)
    acc += coeff(k) * cplx(0, k) * std::polar(1.0, k * t);
  return acc;
}

cplx AnalyticJordanCurve::ddf(double t) const {
  cplx acc = 0;
  for (int k = -M; k <= M; ++k)
    acc += coeff(k) * cplx(0, k) * cplx(0, k) * std::polar(1.0, k * t);
  return acc;
}

SpherePoint AnalyticJordanCurve::operator()(double t) const {
  cplx v = f(t);
  if (!chart) return sphere_of(v);
  return (*chart)(SpherePoint(v));
}

cplx AnalyticJordanCurve::deriv(double t) const {
  cplx v = f(t), d = df(t);
  if (!chart) return d;
  return chart->deriv(v) * d;
}

namespace {

double seg_dist(cplx a0, cplx a1, cplx b0, cplx b1) {
  auto point_seg = [](cplx p, cplx s0, cplx s1) {
    cplx d = s1 - s0;
    double len2 = std::norm(d);
    if (len2 == 0) return std::abs(p - s0);
    double t = std::clamp(((p - s0) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(p - (s0 + t * d));
  };
  auto orient = [](cplx a, cplx b, cplx c) {
    return ((b - a) * std::conj(c - a)).imag();
  };
  // Proper crossing => distance 0.
  double o1 = orient(a0, a1, b0), o2 = orient(a0, a1, b1);
  double o3 = orient(b0, b1, a0), o4 = orient(b0, b1, a1);
  if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0))) return 0.0;
  return std::min(std::min(point_seg(b0, a0, a1), point_seg(b1, a0, a1)),
                  std::min(point_seg(a0, b0, b1), point_seg(a1, b0, b1)));
}

}  // namespace

JordanReport is_jordan(const AnalyticJordanCurve& c, int n) {
  JordanReport rep;
  rep.n_samples = n;
  std::vector<cplx> p(n);
  rep.min_speed = 1e300;
  for (int i = 0; i < n; ++i) {
    double t = 2.0 * kPi * i / n;
    p[i] = c.f(t);
    rep.min_speed = std::min(rep.min_speed, std::abs(c.df(t)));
  }
  rep.min_gap = 1e300;
  rep.jordan = rep.min_speed > 0;
  for (int i = 0; i < n && rep.jordan; ++i) {
    for (int j = i + 1; j < n; ++j) {
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      double d = seg_dist(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n]);
      if (d < rep.min_gap) rep.min_gap = d;
      if (d <= 0.0) {
        rep.jordan = false;
        rep.witness_a = i;
        rep.witness_b = j;
        break;
      }
    }
  }
  if (rep.min_gap == 1e300) rep.min_gap = 0;
  return rep;
}

namespace {

// High-frequency penalty. Asymmetric in k on purpose: the orientation mode
// c_1 is free, so a two-point spec comes out as an oval rather than the
// degenerate segment the conjugation-symmetric weight would pick.
double coeff_weight(int k, double mu) {
  double a = double(k) * double(k - 1);
  return a * a * (1.0 + mu * double(k) * double(k)) +
         1e-8 * (1.0 + std::pow(double(k), 4));
}

Mobius pick_chart(const std::vector<SpherePoint>& pts) {
  bool need = false;
  for (auto& p : pts)
    if (p.inf || std::abs(p.value) > 2.5) need = true;
  if (!need) return Mobius::identity();
  std::vector<cplx> cands;
  for (double x : {0.0, 1.0, -1.0, 0.5, -0.5, 2.0, -2.0, 0.25, -0.25})
    for (double y : {0.0, 1.0, -1.0, 0.5, -0.5, 0.3})
      cands.push_back(cplx(x, y));
  double best = -1;
  cplx pole = 0;
  for (cplx c : cands) {
    double dmin = 4;
    for (auto& p : pts) dmin = std::min(dmin, chordal(SpherePoint(c), p));
    if (dmin > best) {
      best = dmin;
      pole = c;
    }
  }
  Mobius inv = Mobius::inversion_about(pole);
  // Rescale mapped points into a moderate disk.
  std::vector<cplx> q;
  for (auto& p : pts) q.push_back(inv(p).value);
  cplx g = 0;
  for (cplx v : q) g += v;
  g /= double(q.size());
  double rad = 0;
  for (cplx v : q) rad = std::max(rad, std::abs(v - g));
  cplx s = rad > 0 ? cplx(1.0 / rad) : cplx(1.0);
  return inv.then(Mobius::affine(s, -s * g));
}

}  // namespace

AnalyticJordanCurve curve_through(const CurveSpec& spec) {
  const int npts = static_cast<int>(spec.through_points.size());
  if (npts < 1) throw input_error("curve_through: no points given");
  for (int i = 0; i < npts; ++i)
    for (int j = i + 1; j < npts; ++j)
      if (chordal(spec.through_points[i], spec.through_points[j]) < 1e-10)
        throw input_error("curve_through: through_points must be distinct");
  if (spec.fourier_degree != 0 && spec.fourier_degree < npts)
    throw input_error("curve_through: fourier_degree < number of points");

  Mobius chart_fwd = pick_chart(spec.through_points);  // sphere -> plane
  bool chart_used = !chart_fwd.is_identity();
  std::vector<cplx> q;
  for (auto& p : spec.through_points) q.push_back(chart_fwd(p).value);

  // Cyclic order: angular sort about the centroid, ties by modulus.
  std::vector<int> order(npts);
  if (spec.order_hint) {
    order = *spec.order_hint;
    if (static_cast<int>(order.size()) != npts)
      throw input_error("curve_through: order_hint size mismatch");
  } else {
    cplx g = 0;
    for (cplx v : q) g += v;
    g /= double(npts);
    auto angle = [&](int i) {
      double a = std::arg(q[i] - g);
      return a < 0 ? a + 2.0 * kPi : a;  // cycle starts at angle 0
    };
    for (int i = 0; i < npts; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      double aa = angle(a), ab = angle(b);
      if (aa != ab) return aa < ab;
      return std::abs(q[a]) < std::abs(q[b]);
    });
  }

  int M = spec.fourier_degree > 0 ? spec.fourier_degree : 2 * npts + 4;
  double mu = spec.smoothing;
  JordanReport last;
  for (int attempt = 0; attempt <= spec.max_retries; ++attempt) {
    const int nc = 2 * M + 1;
    Eigen::MatrixXcd A(npts, nc);
    Eigen::VectorXcd rhs(npts);
    for (int j = 0; j < npts; ++j) {
      double theta = 2.0 * kPi * j / npts;
      for (int k = -M; k <= M; ++k)
        A(j, k + M) = std::polar(1.0, k * theta);
      rhs(j) = q[order[j]];
    }
    Eigen::VectorXd shalf(nc);
    for (int k = -M; k <= M; ++k)
      shalf(k + M) = 1.0 / std::sqrt(coeff_weight(k, mu));
    // Minimum-weighted-norm interpolant: substitute c = S^(1/2) y and take
    // the minimum-norm solution of (A S^(1/2)) y = rhs, plus one step of
    // iterative refinement to pin the interpolation residual down.
    Eigen::MatrixXcd B = A * shalf.asDiagonal();
    auto cod = B.completeOrthogonalDecomposition();
    Eigen::VectorXcd y = cod.solve(rhs);
    y += cod.solve(rhs - B * y);
    Eigen::VectorXcd c = shalf.asDiagonal() * y;

    AnalyticJordanCurve curve;
    curve.M = M;
    curve.fourier.assign(nc, cplx(0));
    for (int k = 0; k < nc; ++k) curve.fourier[k] = c(k);
    if (chart_used) curve.chart = chart_fwd.inverse();

    last = is_jordan(curve, 512);
    if (last.jordan) {
      // Interpolation sanity at the nodes.
      for (int j = 0; j < npts; ++j) {
        double theta = 2.0 * kPi * j / npts;
        if (chordal(curve(theta), spec.through_points[order[j]]) > 1e-9)
          throw numerical_error("curve_through: interpolation solve failed");
      }
      return curve;
    }
    mu *= 10.0;
    M += 2;
  }
  std::ostringstream os;
  os << "curve_through: no Jordan curve within retry cap; last attempt "
     << "min_speed=" << last.min_speed << " witness segments ("
     << last.witness_a << ", " << last.witness_b << ")";
  throw numerical_error(os.str());
}

AnalyticJordanCurve unit_circle_curve() {
  AnalyticJordanCurve c;
  c.M = 1;
  c.fourier = {cplx(0), cplx(0), cplx(1)};
  return c;
}

AnalyticJordanCurve extended_real_line() {
  // Image of the unit circle under w -> i(1-w)/(1+w): hits 0 at t=0,
  // 1 at t=-pi/2, infinity at t=pi.
  AnalyticJordanCurve c = unit_circle_curve();
  c.chart = Mobius{cplx(0, -1), cplx(0, 1), cplx(1), cplx(1)};
  return c;
}

}  // namespace netforge
