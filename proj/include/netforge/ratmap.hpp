#pragma once

#include <string>
#include <utility>
#include <vector>

#include "netforge/poly.hpp"
#include "netforge/sphere.hpp"

namespace netforge {

// Rational self-map of the sphere, stored as coprime numerator/denominator.
struct RationalMap {
  Poly num;
  Poly den{cplx(1)};

  int degree() const {
    return std::max(poly_degree(num), poly_degree(den));
  }
};

// Trims, checks coprimality (relative resultant), checks degree >= 1.
// Throws input_error on violations.
RationalMap validate_map(RationalMap r, double coprime_tol = 1e-10);

// Compiles shorthand like "z^3 - 3z" or "(z + 1/z)/2".
RationalMap parse_map(const std::string& text);

SpherePoint rm_eval(const RationalMap& r, const SpherePoint& z);

// Derivative in the z chart at a finite point that is not a pole.
cplx rm_deriv(const RationalMap& r, cplx z);

struct CriticalData {
  std::vector<std::pair<SpherePoint, int>> points;  // (point, multiplicity)
  std::vector<SpherePoint> values;                  // deduplicated
  std::vector<int> point_to_value;                  // index into values
  int total_multiplicity() const {
    int s = 0;
    for (auto& p : points) s += p.second;
    return s;
  }
};

// Roots of p'q - pq' plus the inverted-chart analysis at infinity.
CriticalData critical_data(const RationalMap& r);

// Full fiber r^{-1}(w) with multiplicities; sizes sum to degree.
std::vector<std::pair<SpherePoint, int>> fiber(const RationalMap& r,
                                               const SpherePoint& w);

// Post-compose with a Mobius map: returns M ∘ r as a rational map.
RationalMap compose_mobius(const Mobius& M, const RationalMap& r);

// Chooses M so all critical values of M∘r are finite with |v| <= 2.
std::pair<RationalMap, Mobius> mobius_normalize(const RationalMap& r);

}  // namespace netforge
