#include "netforge/sphere.hpp"

#include <vector>

#include "doctest.h"

using namespace netforge;

TEST_CASE("chordal distance basics") {
  CHECK(chordal(SpherePoint(cplx(0)), SpherePoint(cplx(0))) == 0.0);
  CHECK(chordal(SpherePoint(cplx(0)), SpherePoint::infinity()) == doctest::Approx(2.0));
  CHECK(chordal(SpherePoint(cplx(1)), SpherePoint(cplx(-1))) == doctest::Approx(2.0));
  CHECK(chordal(SpherePoint::infinity(), SpherePoint::infinity()) == 0.0);
}

TEST_CASE("chordal metric axioms on a sample set") {
  std::vector<SpherePoint> pts = {cplx(0),          cplx(1),
                                  cplx(0, 1),       cplx(-3, 2),
                                  cplx(1e8, -1e8),  SpherePoint::infinity(),
                                  cplx(0.5, -0.25), cplx(1e-9, 0)};
  for (auto& a : pts)
    for (auto& b : pts) {
      double d = chordal(a, b);
      CHECK(d >= 0.0);
      CHECK(d <= 2.0 + 1e-12);
      CHECK(d == doctest::Approx(chordal(b, a)));
      // Inversion invariance.
      CHECK(chordal(sphere_invert(a), sphere_invert(b)) == doctest::Approx(d).epsilon(1e-9));
      for (auto& c : pts)
        CHECK(chordal(a, c) <= chordal(a, b) + chordal(b, c) + 1e-12);
    }
}

TEST_CASE("mobius action and inverse") {
  Mobius m{cplx(1), cplx(-1), cplx(1), cplx(1)};  // (z-1)/(z+1)
  CHECK(chordal(m(SpherePoint(cplx(0))), SpherePoint(cplx(-1))) < 1e-15);
  CHECK(chordal(m(SpherePoint::infinity()), SpherePoint(cplx(1))) < 1e-15);
  CHECK(chordal(m(SpherePoint(cplx(-1))), SpherePoint::infinity()) < 1e-15);
  Mobius id = m.then(m.inverse());
  CHECK(id.is_identity(1e-12));  // identity up to a scalar factor
  for (cplx z : {cplx(0.3, 0.4), cplx(-2, 1), cplx(5, 5)}) {
    SpherePoint back = m.inverse()(m(SpherePoint(z)));
    CHECK(chordal(back, SpherePoint(z)) < 1e-12);
  }
}

TEST_CASE("chart stretch matches finite-difference arclength ratio") {
  Mobius m = Mobius::inversion_about(cplx(0.5, 0.25));
  cplx z(1.25, -0.75);
  double h = 1e-6;
  // Move along a unit chordal direction and compare chart displacement.
  cplx dz = cplx(h, 0);
  double ds_chordal = 2.0 * std::abs(dz) / (1.0 + std::norm(z));
  cplx w0 = m(SpherePoint(z)).value, w1 = m(SpherePoint(z + dz)).value;
  double ratio = std::abs(w1 - w0) / ds_chordal;
  CHECK(chart_stretch(m, SpherePoint(z)) == doctest::Approx(ratio).epsilon(1e-4));
}
