#include "netforge/netgraph.hpp"

#include "doctest.h"
#include "netforge/errors.hpp"
#include "netforge/examples.hpp"

using namespace netforge;

TEST_CASE("edge arc interpolation through infinity") {
  // Positive real ray 0 -> infinity.
  std::vector<SpherePoint> src;
  for (int k = 0; k <= 800; ++k) {
    double t = kPi * k / 800.0;
    src.push_back(k == 800 ? SpherePoint::infinity()
                           : SpherePoint(std::tan(t / 2)));
  }
  auto arc = EdgeArc::from_samples(0, 1, src);
  CHECK(arc.length == doctest::Approx(kPi).epsilon(1e-6));
  // Points stay on the positive real axis; u is proportional to arclength.
  for (double u : {0.1, 0.3, 0.5, 0.7, 0.9, 0.97}) {
    SpherePoint p = arc.at(u);
    if (p.finite()) {
      CHECK(std::abs(p.value.imag()) < 1e-9);
      CHECK(p.value.real() == doctest::Approx(std::tan(u * kPi / 2)).epsilon(1e-6));
    }
  }
  CHECK(arc.at(1.0).inf);
  // Tangent near infinity is finite in the w chart.
  cplx t = arc.local_tangent(0.999);
  CHECK(std::isfinite(t.real()));
}

TEST_CASE("quadrant net structure") {
  NetGraph g = make_quadrant_net();
  CHECK(g.vertices.size() == 2);
  CHECK(g.edges.size() == 4);
  CHECK(g.faces.size() == 4);
  auto rep = validate_graph(g);
  CHECK(rep.structure_ok);
  CHECK(rep.valence_ok);
  CHECK(rep.coloring_ok);
  CHECK(rep.euler == 2);
  CHECK(rep.max_angle_defect < 1e-6);
  CHECK(rep.ok());

  // Opposite quadrants share a color, adjacent differ.
  int f1 = face_containing(g, SpherePoint(std::polar(1.0, kPi / 4)));
  int f2 = face_containing(g, SpherePoint(std::polar(1.0, 3 * kPi / 4)));
  int f3 = face_containing(g, SpherePoint(std::polar(1.0, 5 * kPi / 4)));
  CHECK(g.coloring[f1] == 0);
  CHECK(g.coloring[f3] == 0);
  CHECK(g.coloring[f2] == 1);

  // Probes live in their own faces.
  for (size_t f = 0; f < g.faces.size(); ++f)
    CHECK(point_in_face(g, int(f), g.face_probe[f]));
}

TEST_CASE("joukowski net structure") {
  NetGraph g = make_joukowski_net();
  CHECK(g.vertices.size() == 2);
  CHECK(g.edges.size() == 4);
  CHECK(g.faces.size() == 4);
  auto rep = validate_graph(g);
  CHECK(rep.ok());
  CHECK(rep.max_angle_defect < 1e-6);
  // 2 white, 2 black.
  int white = 0;
  for (int c : g.coloring) white += (c == 0);
  CHECK(white == 2);
  // White faces are upper-outside and lower-inside.
  CHECK(g.coloring[face_containing(g, SpherePoint(cplx(0, 2)))] == 0);
  CHECK(g.coloring[face_containing(g, SpherePoint(cplx(0, -0.5)))] == 0);
  CHECK(g.coloring[face_containing(g, SpherePoint(cplx(0, 0.5)))] == 1);
  CHECK(g.coloring[face_containing(g, SpherePoint(cplx(0, -2)))] == 1);
}

TEST_CASE("wavy net is analytic 4-valent") {
  NetGraph g = make_wavy_net();
  auto rep = validate_graph(g);
  CHECK(rep.ok());
  CHECK(rep.max_angle_defect < 1e-5);
}

TEST_CASE("odd valence rejected") {
  // Quadrant graph with one ray deleted: vertices of valence 3.
  std::vector<SpherePoint> verts = {SpherePoint(cplx(0)), SpherePoint::infinity()};
  std::vector<EdgeArc> edges;
  std::vector<SpherePoint> ray;
  for (int k = 0; k <= 400; ++k) {
    double t = kPi * k / 400.0;
    ray.push_back(k == 400 ? SpherePoint::infinity()
                           : SpherePoint(std::tan(t / 2)));
  }
  for (double a : {0.0, kPi / 2, kPi}) {
    std::vector<SpherePoint> rs;
    for (auto& p : ray)
      rs.push_back(p.inf ? p : SpherePoint(p.value * std::polar(1.0, a)));
    edges.push_back(EdgeArc::from_samples(0, 1, rs));
  }
  NetGraph g = build_graph(std::move(verts), std::move(edges));
  g.coloring.assign(g.faces.size(), 0);
  auto rep = validate_graph(g);
  CHECK_FALSE(rep.valence_ok);
  CHECK_FALSE(rep.ok());
}

TEST_CASE("markings validate") {
  NetGraph g = make_quadrant_net();
  Marking m = quadrant_symmetric_marking(g);
  CHECK_NOTHROW(validate_marking(g, m));
  // Base outside its face fails.
  Marking bad = m;
  bad.base[0] = bad.base[1];
  CHECK_THROWS_AS(validate_marking(g, bad), Error);

  NetGraph j = make_joukowski_net();
  CHECK_NOTHROW(validate_marking(j, joukowski_canonical_marking(j)));
}

TEST_CASE("branched cover model from nets") {
  NetGraph g = make_quadrant_net();
  // Both vertices map to distinct branch values (0 and infinity).
  auto m = branched_cover_from_net(g, {0, 1});
  CHECK(m.degree == 2);
  CHECK_NOTHROW(validate_branched_cover(m));
  for (int d : m.vertex_local_degree) CHECK(d == 2);

  NetGraph j = make_joukowski_net();
  auto mj = branched_cover_from_net(j, {0, 1});
  CHECK(mj.degree == 2);
  CHECK_NOTHROW(validate_branched_cover(mj));

  // Breaking the coloring breaks the count invariants.
  auto broken = m;
  broken.faces[0].color = 1 - broken.faces[0].color;
  CHECK_THROWS_AS(validate_branched_cover(broken), Error);
}
