#pragma once

#include <optional>
#include <vector>

#include "netforge/sphere.hpp"

namespace netforge {

// Closed analytic curve: trig polynomial f(t) = sum c_k e^{ikt}, optionally
// pushed through a Mobius chart so the curve may pass through infinity.
struct AnalyticJordanCurve {
  std::vector<cplx> fourier;  // c_{-M} .. c_{M}
  int M = 0;
  std::optional<Mobius> chart;  // gamma = chart(f); nullopt = identity

  cplx coeff(int k) const { return fourier[size_t(k + M)]; }
  cplx f(double t) const;
  cplx df(double t) const;
  cplx ddf(double t) const;
  SpherePoint operator()(double t) const;
  // d gamma / dt in the standard chart (finite points only).
  cplx deriv(double t) const;
};

struct JordanReport {
  bool jordan = false;
  double min_gap = 0.0;    // between non-adjacent polyline segments (chart plane)
  double min_speed = 0.0;  // min |f'(t)| over samples
  int witness_a = -1, witness_b = -1;  // offending segment pair when !jordan
  int n_samples = 0;
};

JordanReport is_jordan(const AnalyticJordanCurve& c, int n_samples = 512);

struct CurveSpec {
  std::vector<SpherePoint> through_points;
  std::optional<std::vector<int>> order_hint;  // cyclic order of the points
  double smoothing = 1e-4;
  int fourier_degree = 0;  // 0 = default 2*(#points)+4
  int max_retries = 5;
};

// Trig-polynomial interpolation through the points at uniform nodes,
// minimizing a high-frequency penalty; retries with more smoothing and
// degree until the sampled Jordan check passes.
AnalyticJordanCurve curve_through(const CurveSpec& spec);

// Convenience: the extended real line as a curve (unit circle in a chart).
AnalyticJordanCurve extended_real_line();

// Unit circle (identity chart).
AnalyticJordanCurve unit_circle_curve();

}  // namespace netforge
