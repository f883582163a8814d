#include "netforge/ratmap.hpp"

#include <random>

#include "doctest.h"
#include "netforge/errors.hpp"

using namespace netforge;

namespace {
RationalMap zsq() { return parse_map("z^2"); }
RationalMap joukowski() { return parse_map("(z + 1/z)/2"); }
RationalMap cubic() { return parse_map("z^3 - 3z"); }

bool has_point(const CriticalData& cd, const SpherePoint& p, int mult) {
  for (auto& [q, m] : cd.points)
    if (chordal(p, q) < 1e-7 && m == mult) return true;
  return false;
}
bool has_value(const CriticalData& cd, const SpherePoint& v) {
  for (auto& q : cd.values)
    if (chordal(v, q) < 1e-7) return true;
  return false;
}
}  // namespace

TEST_CASE("parser and evaluation") {
  CHECK(chordal(rm_eval(zsq(), cplx(3)), SpherePoint(cplx(9))) < 1e-14);
  CHECK(chordal(rm_eval(joukowski(), cplx(0, 1)), SpherePoint(cplx(0))) < 1e-14);
  CHECK(chordal(rm_eval(zsq(), SpherePoint::infinity()), SpherePoint::infinity()) == 0.0);
  CHECK(chordal(rm_eval(joukowski(), cplx(0)), SpherePoint::infinity()) == 0.0);
  CHECK(chordal(rm_eval(cubic(), cplx(2)), SpherePoint(cplx(2))) < 1e-13);
  // 3z parses with implicit multiplication; degree bookkeeping right.
  CHECK(cubic().degree() == 3);
  CHECK(joukowski().degree() == 2);
}

TEST_CASE("validate rejects shared factors and degree zero") {
  RationalMap bad{{cplx(-1), cplx(0), cplx(1)}, {cplx(-1), cplx(1)}};
  CHECK_THROWS_AS((void)validate_map(bad), Error);
  RationalMap constant{{cplx(2)}, {cplx(1)}};
  CHECK_THROWS_AS((void)validate_map(constant), Error);
}

TEST_CASE("critical data of the three reference maps") {
  auto cd1 = critical_data(zsq());
  CHECK(cd1.total_multiplicity() == 2);
  CHECK(has_point(cd1, cplx(0), 1));
  CHECK(has_point(cd1, SpherePoint::infinity(), 1));
  CHECK(has_value(cd1, cplx(0)));
  CHECK(has_value(cd1, SpherePoint::infinity()));

  auto cd2 = critical_data(joukowski());
  CHECK(cd2.total_multiplicity() == 2);
  CHECK(has_point(cd2, cplx(1), 1));
  CHECK(has_point(cd2, cplx(-1), 1));
  CHECK(has_value(cd2, cplx(1)));
  CHECK(has_value(cd2, cplx(-1)));

  auto cd3 = critical_data(cubic());
  CHECK(cd3.total_multiplicity() == 4);
  CHECK(has_point(cd3, cplx(1), 1));
  CHECK(has_point(cd3, cplx(-1), 1));
  CHECK(has_point(cd3, SpherePoint::infinity(), 2));
  CHECK(has_value(cd3, cplx(-2)));
  CHECK(has_value(cd3, cplx(2)));
  CHECK(has_value(cd3, SpherePoint::infinity()));
}

TEST_CASE("fibers with multiplicity and polish residual") {
  auto f1 = fiber(zsq(), cplx(4));
  REQUIRE(f1.size() == 2);
  CHECK(chordal(f1[0].first, cplx(-2)) < 1e-12);
  CHECK(chordal(f1[1].first, cplx(2)) < 1e-12);

  auto f2 = fiber(zsq(), cplx(0));
  REQUIRE(f2.size() == 1);
  CHECK(f2[0].second == 2);

  auto f3 = fiber(joukowski(), cplx(0));
  REQUIRE(f3.size() == 2);
  for (auto& [z, m] : f3) CHECK(std::abs(std::abs(z.value) - 1.0) < 1e-12);

  // fiber of infinity: poles of the map
  auto f4 = fiber(joukowski(), SpherePoint::infinity());
  int total = 0;
  for (auto& [z, m] : f4) total += m;
  CHECK(total == 2);

  // Polish property: r(fiber point) within 1e-8 chordal of target.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 16; ++t) {
    SpherePoint w(cplx(u(rng), u(rng)));
    for (auto& [z, m] : fiber(cubic(), w))
      CHECK(chordal(rm_eval(cubic(), z), w) < 1e-8);
  }
}

TEST_CASE("riemann-hurwitz for random maps") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  int made = 0;
  while (made < 8) {
    int dn = 1 + int(rng() % 4), dd = int(rng() % 4);
    Poly num(dn + 1), den(dd + 1);
    for (auto& c : num) c = cplx(u(rng), u(rng));
    for (auto& c : den) c = cplx(u(rng), u(rng));
    try {
      RationalMap r = validate_map({num, den});
      auto cd = critical_data(r);
      CHECK(cd.total_multiplicity() == 2 * r.degree() - 2);
      ++made;
    } catch (const Error&) {
      // skip degenerate draws
    }
  }
}

TEST_CASE("critical points invariant under postcomposed mobius") {
  Mobius M{cplx(2, 1), cplx(0.5), cplx(0.3), cplx(1)};
  auto r = cubic();
  auto cd = critical_data(r);
  auto cd2 = critical_data(compose_mobius(M, r));
  REQUIRE(cd.points.size() == cd2.points.size());
  for (auto& [p, m] : cd.points) {
    bool found = false;
    for (auto& [q, m2] : cd2.points)
      if (chordal(p, q) < 1e-6 && m == m2) found = true;
    CHECK(found);
  }
}

TEST_CASE("mobius_normalize brings critical values into the disk") {
  for (auto r : {zsq(), joukowski(), cubic()}) {
    auto [rn, M] = mobius_normalize(r);
    auto cd = critical_data(rn);
    for (auto& v : cd.values) {
      CHECK(v.finite());
      CHECK(std::abs(v.value) <= 2.0);
    }
    // Same critical points (normalization acts on the range side).
    auto cd0 = critical_data(r);
    for (auto& [p, m] : cd0.points) {
      bool found = false;
      for (auto& [q, m2] : cd.points)
        if (chordal(p, q) < 1e-6) found = true;
      CHECK(found);
    }
  }
  // Already-normalized maps stay put.
  RationalMap tame = parse_map("z^2 - 1/2");  // CV {-1/2, inf}... not tame
  auto [rn, M] = mobius_normalize(joukowski());
  CHECK(M.is_identity());
  (void)tame;
}
