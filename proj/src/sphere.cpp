#include "netforge/sphere.hpp"

namespace netforge {

double chordal(const SpherePoint& a, const SpherePoint& b) {
  if (a.inf && b.inf) return 0.0;
  if (a.inf || b.inf) {
    const cplx z = a.inf ? b.value : a.value;
    double m = std::abs(z);
    if (m > 1e150) return 2.0 / std::hypot(1.0 / m, 1.0) / m;  // stay finite
    return 2.0 / std::sqrt(1.0 + m * m);
  }
  double ma = std::abs(a.value), mb = std::abs(b.value);
  // Large moduli overflow (1+|a|^2)(1+|b|^2); the metric is inversion
  // invariant, so flip both points into the w = 1/z chart instead.
  if (ma > 1e100 || mb > 1e100) {
    return chordal(sphere_invert(a), sphere_invert(b));
  }
  double num = 2.0 * std::abs(a.value - b.value);
  double den = std::sqrt((1.0 + ma * ma) * (1.0 + mb * mb));
  return num / den;
}

SpherePoint Mobius::operator()(const SpherePoint& p) const {
  if (p.inf) {
    if (std::abs(c) == 0.0) return SpherePoint::infinity();
    return SpherePoint(a / c);
  }
  cplx num = a * p.value + b;
  cplx den = c * p.value + d;
  double nn = std::abs(num), dd = std::abs(den);
  if (dd == 0.0 || (nn > 1e-30 && dd / nn < 1e-280)) {
    return SpherePoint::infinity();
  }
  return sphere_of(num / den);
}

bool Mobius::is_identity(double tol) const {
  // Identity up to scalar: b = c = 0 and a = d.
  return std::abs(b) <= tol && std::abs(c) <= tol && std::abs(a - d) <= tol;
}

double chart_stretch(const Mobius& M, const SpherePoint& p) {
  // ds_chart = |M'(z)| |dz|, ds_chordal = 2|dz|/(1+|z|^2) in the z chart.
  if (!p.inf && std::abs(p.value) <= 2.0) {
    cplx z = p.value;
    return std::abs(M.deriv(z)) * (1.0 + std::norm(z)) / 2.0;
  }
  // Near infinity switch to w = 1/z: chart position M(1/w).
  cplx w = p.inf ? cplx(0, 0) : 1.0 / p.value;
  // d/dw M(1/w) = (bc - ad)/(c + d w)^2
  cplx q = M.c + M.d * w;
  double dMdw = std::abs(M.b * M.c - M.a * M.d) / std::norm(q);
  return dMdw * (1.0 + std::norm(w)) / 2.0;
}

}  // namespace netforge
