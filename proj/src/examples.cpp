#include "netforge/examples.hpp"

#include <cmath>

#include "netforge/errors.hpp"

namespace netforge {

namespace {

constexpr int kSrc = 1601;  // source sampling before arclength resampling

std::vector<SpherePoint> ray_samples(double angle) {
  // 0 to infinity along e^{i angle}; chordal-uniform via r = tan(s/2).
  std::vector<SpherePoint> s(kSrc);
  cplx dir = std::polar(1.0, angle);
  for (int k = 0; k < kSrc; ++k) {
    double t = kPi * k / double(kSrc - 1);  // chordal arclength position
    if (k == kSrc - 1) {
      s[k] = SpherePoint::infinity();
    } else {
      s[k] = SpherePoint(dir * std::tan(t / 2.0));
    }
  }
  return s;
}

std::vector<SpherePoint> real_segment_samples() {
  // -1 to 1, chordal-uniform: x = tan(a), a in [-pi/4, pi/4].
  std::vector<SpherePoint> s(kSrc);
  for (int k = 0; k < kSrc; ++k) {
    double a = -kPi / 4 + (kPi / 2) * k / double(kSrc - 1);
    s[k] = SpherePoint(std::tan(a));
  }
  return s;
}

std::vector<SpherePoint> outer_real_samples() {
  // 1 through infinity to -1: x = tan(pi/4 + s/2), s in [0, pi].
  std::vector<SpherePoint> s(kSrc);
  for (int k = 0; k < kSrc; ++k) {
    double t = kPi * k / double(kSrc - 1);
    if (2 * k == kSrc - 1) {
      s[k] = SpherePoint::infinity();
      continue;
    }
    double a = kPi / 4 + t / 2;
    double x = std::tan(a);
    s[k] = std::abs(x) > 1e14 ? SpherePoint::infinity() : SpherePoint(x);
  }
  return s;
}

std::vector<SpherePoint> arc_samples(double th0, double th1,
                                     double amp = 0.0, int kw = 0) {
  std::vector<SpherePoint> s(kSrc);
  for (int k = 0; k < kSrc; ++k) {
    double th = th0 + (th1 - th0) * k / double(kSrc - 1);
    double r = 1.0;
    if (amp != 0.0) {
      double sn = std::sin(kw * th);
      r += amp * sn * sn;
    }
    s[k] = SpherePoint(std::polar(r, th));
  }
  return s;
}

}  // namespace

NetGraph make_quadrant_net() {
  std::vector<SpherePoint> verts = {SpherePoint(cplx(0)), SpherePoint::infinity()};
  std::vector<EdgeArc> edges;
  for (double a : {0.0, kPi / 2, kPi, 3 * kPi / 2})
    edges.push_back(EdgeArc::from_samples(0, 1, ray_samples(a)));
  NetGraph g = build_graph(std::move(verts), std::move(edges));
  int q1 = face_containing(g, SpherePoint(std::polar(1.0, kPi / 4)));
  color_graph(g, q1);
  return g;
}

NetGraph make_joukowski_net() {
  std::vector<SpherePoint> verts = {SpherePoint(cplx(1)), SpherePoint(cplx(-1))};
  std::vector<EdgeArc> edges;
  edges.push_back(EdgeArc::from_samples(1, 0, real_segment_samples()));  // 0: [-1,1]
  edges.push_back(EdgeArc::from_samples(0, 1, arc_samples(0, kPi)));     // 1: upper T
  edges.push_back(EdgeArc::from_samples(1, 0, arc_samples(kPi, 2 * kPi)));  // 2: lower T
  edges.push_back(EdgeArc::from_samples(0, 1, outer_real_samples()));    // 3: outer R
  NetGraph g = build_graph(std::move(verts), std::move(edges));
  // White faces map to the upper half plane under (z + 1/z)/2.
  int upper_out = face_containing(g, SpherePoint(cplx(0, 2)));
  color_graph(g, upper_out);
  return g;
}

NetGraph make_wavy_net(double amp, int k) {
  std::vector<SpherePoint> verts = {SpherePoint(cplx(1)), SpherePoint(cplx(-1))};
  std::vector<EdgeArc> edges;
  edges.push_back(EdgeArc::from_samples(1, 0, real_segment_samples()));
  edges.push_back(EdgeArc::from_samples(0, 1, arc_samples(0, kPi, amp, k)));
  edges.push_back(EdgeArc::from_samples(1, 0, arc_samples(kPi, 2 * kPi)));
  edges.push_back(EdgeArc::from_samples(0, 1, outer_real_samples()));
  NetGraph g = build_graph(std::move(verts), std::move(edges));
  int inner_upper = face_containing(g, SpherePoint(cplx(0, 0.5)));
  color_graph(g, inner_upper);
  return g;
}

int face_containing(const NetGraph& g, const SpherePoint& p) {
  for (size_t f = 0; f < g.faces.size(); ++f)
    if (point_in_face(g, static_cast<int>(f), p)) return static_cast<int>(f);
  throw input_error("face_containing: point on no face interior");
}

namespace {

int quadrant_edge_along(const NetGraph& g, double angle) {
  // Edge whose midpoint direction matches e^{i angle}.
  for (size_t e = 0; e < g.edges.size(); ++e) {
    SpherePoint m = g.edges[e].at(0.5);
    if (!m.inf && std::abs(std::arg(m.value) -
                           std::remainder(angle, 2 * kPi)) < 1e-9)
      return static_cast<int>(e);
  }
  throw input_error("quadrant edge not found");
}

}  // namespace

Marking quadrant_symmetric_marking(const NetGraph& g) {
  Marking m;
  m.base.resize(g.faces.size());
  m.anchor.resize(g.faces.size());
  int e_px = quadrant_edge_along(g, 0.0);
  int e_nx = quadrant_edge_along(g, kPi);
  for (int q = 0; q < 4; ++q) {
    double a = kPi / 4 + q * kPi / 2;
    int f = face_containing(g, SpherePoint(std::polar(1.0, a)));
    m.base[f] = SpherePoint(std::polar(1.0, a));
    // Anchor at the fiber of y=1 under z^2: the boundary point +-1.
    bool touches_px = false;
    for (int h : g.faces[f].cycle)
      if (g.halves[h].edge == e_px) touches_px = true;
    m.anchor[f] = {touches_px ? e_px : e_nx, 0.5};
  }
  return m;
}

Marking joukowski_canonical_marking(const NetGraph& g) {
  Marking m;
  m.base.resize(g.faces.size());
  m.anchor.resize(g.faces.size());
  const double s2 = std::sqrt(2.0);
  struct Entry {
    cplx probe, base;
  };
  // Bases: fibers of +-i under (z+1/z)/2; faces identified by probes.
  Entry entries[4] = {
      {cplx(0, 2), cplx(0, 1 + s2)},       // upper outside (white)
      {cplx(0, -0.5), cplx(0, -(s2 - 1))}, // lower inside (white)
      {cplx(0, 0.5), cplx(0, s2 - 1)},     // upper inside (black)
      {cplx(0, -2), cplx(0, -(1 + s2))},   // lower outside (black)
  };
  for (auto& e : entries) {
    int f = face_containing(g, SpherePoint(e.probe));
    m.base[f] = SpherePoint(e.base);
    // Anchor over y = 0: each face boundary holds exactly one of +-i, the
    // midpoint of its single semicircle edge.
    int chosen = -1;
    for (int h : g.faces[f].cycle) {
      int ed = g.halves[h].edge;
      SpherePoint mid = g.edges[ed].at(0.5);
      if (!mid.inf && std::abs(std::abs(mid.value) - 1.0) < 1e-9 &&
          std::abs(mid.value.real()) < 1e-9) {
        chosen = ed;
        break;
      }
    }
    if (chosen < 0) throw input_error("joukowski marking: no semicircle edge");
    m.anchor[f] = {chosen, 0.5};
  }
  return m;
}

}  // namespace netforge
