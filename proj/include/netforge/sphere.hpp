#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace netforge {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// Point on the Riemann sphere: a finite complex value or the point at
// infinity. Finite values always carry finite components.
struct SpherePoint {
  cplx value{0.0, 0.0};
  bool inf = false;

  SpherePoint() = default;
  SpherePoint(cplx z) : value(z) {}          // NOLINT: implicit by design
  SpherePoint(double x) : value(x, 0.0) {}   // NOLINT

  static SpherePoint infinity() {
    SpherePoint p;
    p.inf = true;
    p.value = cplx(std::numeric_limits<double>::infinity(), 0.0);
    return p;
  }

  bool finite() const { return !inf; }
};

inline bool is_bad(cplx z) {
  return !std::isfinite(z.real()) || !std::isfinite(z.imag());
}

// Promotes an overflowed evaluation to the infinity flag.
inline SpherePoint sphere_of(cplx z) {
  if (is_bad(z)) return SpherePoint::infinity();
  return SpherePoint(z);
}

// Chordal metric from the stereographic embedding; range [0, 2].
double chordal(const SpherePoint& a, const SpherePoint& b);

inline SpherePoint sphere_invert(const SpherePoint& p) {
  if (p.inf) return SpherePoint(cplx(0, 0));
  if (std::abs(p.value) == 0.0) return SpherePoint::infinity();
  return SpherePoint(1.0 / p.value);
}

// Mobius transform (a z + b) / (c z + d), acting on the whole sphere.
struct Mobius {
  cplx a{1}, b{0}, c{0}, d{1};

  static Mobius identity() { return Mobius{}; }
  static Mobius inversion_about(cplx pole) {  // z -> 1/(z - pole)
    return Mobius{cplx(0), cplx(1), cplx(1), -pole};
  }
  static Mobius affine(cplx scale, cplx shift) {  // z -> scale*z + shift
    return Mobius{scale, shift, cplx(0), cplx(1)};
  }

  SpherePoint operator()(const SpherePoint& p) const;
  Mobius inverse() const { return Mobius{d, -b, -c, a}; }
  Mobius then(const Mobius& m) const {  // m ∘ this
    return Mobius{m.a * a + m.b * c, m.a * b + m.b * d,
                  m.c * a + m.d * c, m.c * b + m.d * d};
  }
  cplx det() const { return a * d - b * c; }
  // Derivative at a finite non-pole point.
  cplx deriv(cplx z) const {
    cplx q = c * z + d;
    return det() / (q * q);
  }
  bool is_identity(double tol = 0.0) const;
};

// Stretch factor d s_chart / d s_chordal of the chart w = M(z) at p.
// Used to convert densities between chart arclength and chordal arclength.
double chart_stretch(const Mobius& M, const SpherePoint& p);

// Chart convention: work in z for |z| <= 2, in w = 1/z beyond.
inline bool prefer_inverted_chart(const SpherePoint& p) {
  return p.inf || std::abs(p.value) > 2.0;
}

}  // namespace netforge
