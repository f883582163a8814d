#include "netforge/poly.hpp"

#include <random>

#include "doctest.h"
#include "netforge/errors.hpp"

using namespace netforge;

TEST_CASE("aberth solves simple polynomials") {
  // z^2 - 4
  auto roots = poly_roots({cplx(-4), cplx(0), cplx(1)});
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots[0].center - cplx(-2)) < 1e-12);
  CHECK(std::abs(roots[1].center - cplx(2)) < 1e-12);

  // (z - 1)^3 : multiple root clusters to multiplicity 3
  Poly p{cplx(-1), cplx(3), cplx(-3), cplx(1)};
  auto r3 = poly_roots(p);
  REQUIRE(r3.size() == 1);
  CHECK(r3[0].multiplicity == 3);
  CHECK(std::abs(r3[0].center - cplx(1)) < 1e-5);
}

TEST_CASE("aberth on random polynomials reproduces products of roots") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 12; ++trial) {
    int n = 2 + int(rng() % 7);
    std::vector<cplx> roots;
    Poly p{cplx(1)};
    for (int i = 0; i < n; ++i) {
      cplx r(u(rng), u(rng));
      roots.push_back(r);
      p = poly_mul(p, Poly{-r, cplx(1)});
    }
    auto found = aberth_roots(p);
    REQUIRE(found.size() == roots.size());
    for (auto& r : roots) {
      double best = 1e9;
      for (auto& f : found) best = std::min(best, std::abs(f - r));
      CHECK(best < 1e-8 * (1.0 + std::abs(r)));
    }
  }
}

TEST_CASE("high degree sparse polynomial (iota derivative shape)") {
  // m z^(m-1) + delta, m = 200: moduli (delta/m)^(1/(m-1))
  int m = 200;
  double delta = 0.01;
  Poly p(m, cplx(0));
  p[0] = delta;
  p[m - 1] = m;
  auto roots = aberth_roots(p);
  REQUIRE(int(roots.size()) == m - 1);
  double want = std::pow(delta / m, 1.0 / (m - 1));
  for (auto& r : roots) CHECK(std::abs(std::abs(r) - want) < 1e-12);
}

TEST_CASE("relative resultant flags shared roots") {
  Poly a{cplx(-1), cplx(0), cplx(1)};  // z^2-1
  Poly b{cplx(-1), cplx(1)};           // z-1
  CHECK(relative_resultant(a, b) < 1e-14);
  Poly c{cplx(1), cplx(1)};            // z+1 shifted: no shared root with z-1
  CHECK(relative_resultant(b, c) > 1e-3);
}
