#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netforge/sphere.hpp"

namespace netforge {

// Analytic arc stored as samples uniform in chordal arclength; evaluation
// interpolates a 6-point stencil in whichever chart (z or w = 1/z) keeps the
// window bounded, so arcs may pass through or end at infinity.
struct EdgeArc {
  int v0 = -1, v1 = -1;
  std::vector<SpherePoint> samples;
  double length = 0.0;  // total chordal arclength

  static EdgeArc from_samples(int v0, int v1,
                              const std::vector<SpherePoint>& source,
                              int n_out = 1025);

  SpherePoint at(double u) const;  // u in [0,1], proportional to arclength
  // Derivative d/du of M(arc(u)) as a complex number in the M chart.
  cplx deriv_in(const Mobius& M, double u) const;
  cplx second_in(const Mobius& M, double u) const;
  // Tangent direction (unit complex) at u in the local chart of the point.
  cplx local_tangent(double u) const;
};

struct HalfEdge {
  int twin = -1, next = -1, origin = -1, edge = -1;
  bool forward = true;  // runs v0 -> v1 of its edge
};

struct Face {
  std::vector<int> cycle;  // half-edge ids, face on the left
};

// Planar embedded graph on the sphere with half-edge combinatorics.
struct NetGraph {
  std::vector<SpherePoint> vertices;
  std::vector<EdgeArc> edges;
  std::vector<HalfEdge> halves;
  std::vector<Face> faces;
  std::vector<int> coloring;  // per face: 0 = white, 1 = black
  std::vector<SpherePoint> face_probe;  // cached interior points

  int face_of_half(int h) const;  // linear scan cache-free helper
  int head(int h) const { return halves[halves[h].twin].origin; }
  // u-parameter of half-edge h at its own parameter s in [0,1].
  double edge_u(int h, double s) const {
    return halves[h].forward ? s : 1.0 - s;
  }
  SpherePoint half_point(int h, double s) const {
    return edges[halves[h].edge].at(edge_u(h, s));
  }
};

// Assembles twin/next/faces from vertices + edges by sorting stubs around
// each vertex; throws on inconsistent data. Coloring is left empty.
NetGraph build_graph(std::vector<SpherePoint> vertices,
                     std::vector<EdgeArc> edges);

// Proper 2-coloring with faces[white_hint] white; throws if not bipartite.
void color_graph(NetGraph& g, int white_hint = 0);

// Closed polyline of a face (oriented, face on left), stride-subsampled.
std::vector<SpherePoint> face_polyline(const NetGraph& g, int f, int stride = 8);

// Winding-based membership test; q_out must lie outside the closed face.
bool point_in_face(const NetGraph& g, int f, const SpherePoint& p);

// Interior probe point, pushed away from the boundary.
SpherePoint compute_face_probe(const NetGraph& g, int f);

struct GraphValidation {
  bool structure_ok = false;
  bool valence_ok = false;
  bool coloring_ok = false;
  int euler = 0;  // V - E + F
  double max_angle_defect = 0.0;  // max |gap - pi/k| over vertices
  std::vector<double> vertex_angle_defect;
  std::string message;
  bool ok() const {
    return structure_ok && valence_ok && coloring_ok && euler == 2;
  }
};

GraphValidation validate_graph(const NetGraph& g);

// One base point per face plus one non-vertex boundary anchor per face.
struct Marking {
  std::vector<SpherePoint> base;                 // z_F
  std::vector<std::pair<int, double>> anchor;    // x_F as (edge, u)
};

void validate_marking(const NetGraph& g, const Marking& m);

// Combinatorial branched-cover data: cyclic branch values on an abstract
// circle and per-face boundary words over the arcs between them.
struct BranchedCoverModel {
  int degree = 0;
  int n_branch_values = 0;
  struct FaceWord {
    int color = 0;
    std::vector<int> arcs;  // arc j runs branch value j -> j+1 (mod n)
  };
  std::vector<FaceWord> faces;
  std::vector<int> vertex_local_degree;  // per vertex of the source graph
};

// Derives the model from a colored net plus a vertex -> branch value map.
BranchedCoverModel branched_cover_from_net(const NetGraph& g,
                                           const std::vector<int>& vertex_value);

// Checks the covering counts: every arc in exactly `degree` white words and
// `degree` black words; local degrees = valence/2. Throws on failure.
void validate_branched_cover(const BranchedCoverModel& m);

}  // namespace netforge
