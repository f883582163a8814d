#pragma once

#include <vector>

#include "netforge/sphere.hpp"

namespace netforge {

// Dense polynomial, ascending coefficients. poly[k] multiplies z^k.
using Poly = std::vector<cplx>;

Poly poly_trim(Poly p, double rel_tol = 1e-13);
int poly_degree(const Poly& p);  // -1 for the zero polynomial
cplx poly_eval(const Poly& p, cplx z);
// Evaluates p(z) = z^deg * prev(1/z) for |z| > 1 without overflow; returns
// the value of prev(u) at u = 1/z (the caller tracks the z^deg factor).
Poly poly_reverse(const Poly& p);
Poly poly_derivative(const Poly& p);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, cplx s);

struct RootSolveOptions {
  int max_iters = 400;
  double tol = 1e-14;
  // Roots closer than cluster_tol * (1 + |root|) merge into one multiple root.
  double cluster_tol = 1e-7;
  int polish_steps = 3;
};

// Aberth-Ehrlich simultaneous iteration with Newton polish.
// Throws numerical_error on non-convergence (residuals in the message).
std::vector<cplx> aberth_roots(const Poly& p, const RootSolveOptions& opt = {});

struct RootCluster {
  cplx center;
  int multiplicity;
};

std::vector<RootCluster> cluster_roots(const std::vector<cplx>& roots,
                                       double cluster_tol = 1e-7);

// Roots with multiplicities; convenience wrapper of the above.
std::vector<RootCluster> poly_roots(const Poly& p,
                                    const RootSolveOptions& opt = {});

// Sylvester resultant magnitude normalized by the Hadamard bound of the
// matrix rows; ~1 for well-separated root sets, ~0 for a shared root.
double relative_resultant(const Poly& p, const Poly& q);

}  // namespace netforge
