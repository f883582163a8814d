#pragma once

#include "netforge/netgraph.hpp"

namespace netforge {

// The z^2 net: coordinate axes plus vertices at 0 and infinity, quadrant
// faces, white = the quadrants mapping to the upper half plane under z^2.
NetGraph make_quadrant_net();

// The Joukowski net R ∪ T for (z + 1/z)/2: vertices +-1, four faces.
NetGraph make_joukowski_net();

// Same combinatorics as the Joukowski net but with the upper semicircle
// replaced by an undulating analytic arc r(th) = 1 + amp*sin^2(k*th); meets
// the axis at right angles, so the graph is analytic 4-valent but carries
// extra harmonic-density oscillation along the wavy edge.
NetGraph make_wavy_net(double amp = 0.25, int k = 3);

// Index of the face whose interior contains p.
int face_containing(const NetGraph& g, const SpherePoint& p);

// Rotationally symmetric marking of the quadrant net: bases at e^{i pi/4}
// times the four quadrant directions, anchors at the fiber of y = 1.
Marking quadrant_symmetric_marking(const NetGraph& g);

// Canonical pulled-back marking of the Joukowski net (bases over +-i,
// anchors over 0).
Marking joukowski_canonical_marking(const NetGraph& g);

}  // namespace netforge
