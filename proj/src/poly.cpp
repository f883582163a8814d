#include "netforge/poly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "netforge/errors.hpp"

namespace netforge {

Poly poly_trim(Poly p, double rel_tol) {
  double m = 0;
  for (const cplx& c : p) m = std::max(m, std::abs(c));
  if (m == 0) return {};
  while (!p.empty() && std::abs(p.back()) <= rel_tol * m) p.pop_back();
  return p;
}

int poly_degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

cplx poly_eval(const Poly& p, cplx z) {
  cplx acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Poly poly_reverse(const Poly& p) { return Poly(p.rbegin(), p.rend()); }

Poly poly_derivative(const Poly& p) {
  Poly d;
  for (size_t k = 1; k < p.size(); ++k) d.push_back(double(k) * p[k]);
  return d;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), cplx(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

Poly poly_sub(const Poly& a, const Poly& b) {
  return poly_add(a, poly_scale(b, cplx(-1)));
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, cplx(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly poly_scale(const Poly& a, cplx s) {
  Poly r = a;
  for (cplx& c : r) c *= s;
  return r;
}

std::vector<cplx> aberth_roots(const Poly& p_in, const RootSolveOptions& opt) {
  Poly p = poly_trim(p_in);
  int n = poly_degree(p);
  if (n < 0) throw numerical_error("aberth_roots: zero polynomial");
  if (n == 0) return {};
  // Strip roots at the origin exactly; keeps starting circles sane.
  int zeros = 0;
  double m = 0;
  for (const cplx& c : p) m = std::max(m, std::abs(c));
  while (zeros < n && std::abs(p[zeros]) <= 1e-300 * m) ++zeros;
  std::vector<cplx> roots(zeros, cplx(0));
  if (zeros > 0) p.erase(p.begin(), p.begin() + zeros);
  n = poly_degree(p);
  if (n == 0) return roots;
  if (n == 1) {
    roots.push_back(-p[0] / p[1]);
    return roots;
  }

  Poly dp = poly_derivative(p);
  // Cauchy-style radius from the coefficient profile.
  double lead = std::abs(p.back());
  double radius = 0;
  for (int k = 0; k < n; ++k) {
    double r = std::pow(std::abs(p[k]) / lead, 1.0 / double(n - k));
    radius = std::max(radius, r);
  }
  if (radius == 0) radius = 1.0;
  radius *= 1.1;

  std::vector<cplx> z(n);
  for (int i = 0; i < n; ++i) {
    double ang = 2.0 * kPi * i / n + 0.41;
    z[i] = radius * cplx(std::cos(ang), std::sin(ang));
  }

  std::vector<cplx> nw(n);
  bool done = false;
  for (int iter = 0; iter < opt.max_iters && !done; ++iter) {
    done = true;
    for (int i = 0; i < n; ++i) {
      cplx pv = poly_eval(p, z[i]);
      cplx dv = poly_eval(dp, z[i]);
      if (std::abs(pv) == 0.0) {
        nw[i] = 0;
        continue;
      }
      cplx newton = (std::abs(dv) > 0) ? pv / dv : cplx(1e-3, 1e-3);
      cplx sum = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        cplx diff = z[i] - z[j];
        if (std::abs(diff) < 1e-300) diff = cplx(1e-300, 0);
        sum += 1.0 / diff;
      }
      cplx denom = 1.0 - newton * sum;
      nw[i] = (std::abs(denom) > 1e-300) ? newton / denom : newton;
      if (std::abs(nw[i]) > opt.tol * (1.0 + std::abs(z[i]))) done = false;
    }
    for (int i = 0; i < n; ++i) z[i] -= nw[i];
  }

  // Newton polish; multiple roots stall here, clustering absorbs them.
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < opt.polish_steps; ++s) {
      cplx pv = poly_eval(p, z[i]);
      cplx dv = poly_eval(dp, z[i]);
      if (std::abs(dv) == 0.0) break;
      cplx step = pv / dv;
      if (std::abs(step) > 0.5 * (1.0 + std::abs(z[i]))) break;
      z[i] -= step;
    }
  }

  // Residual check, scaled by the local coefficient magnitude.
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    double scale = 0, zp = 1, za = std::abs(z[i]);
    for (int k = 0; k <= n; ++k) {
      scale += std::abs(p[k]) * zp;
      zp *= za;
    }
    worst = std::max(worst, std::abs(poly_eval(p, z[i])) / (scale + 1e-300));
  }
  if (worst > 1e-8) {
    std::ostringstream os;
    os << "aberth_roots: iteration did not converge, relative residual "
       << worst;
    throw numerical_error(os.str());
  }

  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

std::vector<RootCluster> cluster_roots(const std::vector<cplx>& roots,
                                       double cluster_tol) {
  const int n = static_cast<int>(roots.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double tol = cluster_tol * (1.0 + std::abs(roots[i]));
      if (std::abs(roots[i] - roots[j]) < tol) parent[find(i)] = find(j);
    }
  std::vector<RootCluster> out;
  std::vector<int> seen(n, -1);
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (seen[r] < 0) {
      seen[r] = static_cast<int>(out.size());
      out.push_back({cplx(0), 0});
    }
    RootCluster& c = out[seen[r]];
    c.center += roots[i];
    c.multiplicity += 1;
  }
  for (RootCluster& c : out) c.center /= double(c.multiplicity);
  // Deterministic order: by real part, then imaginary.
  std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
    if (a.center.real() != b.center.real())
      return a.center.real() < b.center.real();
    return a.center.imag() < b.center.imag();
  });
  return out;
}

namespace {

// Horner value plus the cancellation noise floor eps * sum |a_i||z|^i.
std::pair<cplx, double> eval_with_noise(const Poly& p, cplx z) {
  cplx acc = 0;
  double mag = 0, za = std::abs(z);
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    acc = acc * z + *it;
    mag = mag * za + std::abs(*it);
  }
  return {acc, 2.2e-16 * mag};
}

// Validates that p looks like t_k (z-c)^k near c at scale rho: every lower
// Taylor coefficient must be dominated or drowned in rounding noise.
bool taylor_multiplicity_ok(const Poly& p, cplx c, double rho, int k) {
  std::vector<double> t, noise;
  Poly q = p;
  double fact = 1.0;
  for (int j = 0; j <= k; ++j) {
    auto [v, nf] = eval_with_noise(q, c);
    t.push_back(std::abs(v) / fact);
    noise.push_back(nf / fact);
    q = poly_derivative(q);
    fact *= double(j + 1);
  }
  if (t[k] <= 8.0 * noise[k]) return false;  // top coefficient itself noisy
  double top = t[k] * std::pow(rho, k);
  for (int j = 0; j < k; ++j) {
    double lhs = t[j] * std::pow(rho, j);
    if (lhs > std::max(1e-3 * top, 64.0 * noise[j] * std::pow(rho, j)))
      return false;
  }
  return true;
}

std::vector<std::vector<int>> union_groups(const std::vector<cplx>& roots,
                                           const std::vector<int>& idx,
                                           double tol_rel) {
  const int n = static_cast<int>(idx.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double tol = tol_rel * (1.0 + std::abs(roots[idx[i]]));
      if (std::abs(roots[idx[i]] - roots[idx[j]]) < tol)
        parent[find(i)] = find(j);
    }
  std::vector<std::vector<int>> groups;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(idx[i]);
  }
  return groups;
}

}  // namespace

std::vector<RootCluster> poly_roots(const Poly& p_in, const RootSolveOptions& opt) {
  Poly p = poly_trim(p_in);
  std::vector<cplx> roots = aberth_roots(p, opt);
  const int n = static_cast<int>(roots.size());
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  // Permissive merge first (a k-fold root scatters Aberth iterates at
  // eps^(1/k)), then let the Taylor test arbitrate each candidate cluster.
  double permissive = std::max(opt.cluster_tol, 1e-4);
  std::vector<RootCluster> out;
  for (auto& group : union_groups(roots, all, permissive)) {
    cplx center = 0;
    double spread = 0;
    for (int i : group) center += roots[i];
    center /= double(group.size());
    for (int i : group) spread = std::max(spread, std::abs(roots[i] - center));
    int k = static_cast<int>(group.size());
    bool genuine = true;
    if (k > 1) {
      // Refine: a k-fold root is a simple root of the (k-1)th derivative.
      Poly q = p;
      for (int j = 1; j < k; ++j) q = poly_derivative(q);
      Poly dq = poly_derivative(q);
      cplx c = center;
      for (int s = 0; s < 10; ++s) {
        cplx dv = poly_eval(dq, c);
        if (std::abs(dv) == 0.0) break;
        cplx step = poly_eval(q, c) / dv;
        if (std::abs(step) > 0.1 * (1.0 + std::abs(c))) break;
        c -= step;
      }
      double rho = std::max({2.0 * spread, opt.cluster_tol * (1.0 + std::abs(c)),
                             1e-12 * (1.0 + std::abs(c))});
      if (taylor_multiplicity_ok(p, c, rho, k)) {
        center = c;
      } else {
        genuine = false;
      }
    }
    if (genuine) {
      out.push_back({center, k});
    } else {
      // Near-coincident but distinct roots: fall back to the strict radius.
      for (auto& sub : union_groups(roots, group, opt.cluster_tol)) {
        cplx c = 0;
        for (int i : sub) c += roots[i];
        out.push_back({c / double(sub.size()), static_cast<int>(sub.size())});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
    if (a.center.real() != b.center.real())
      return a.center.real() < b.center.real();
    return a.center.imag() < b.center.imag();
  });
  return out;
}

double relative_resultant(const Poly& p_in, const Poly& q_in) {
  Poly p = poly_trim(p_in), q = poly_trim(q_in);
  int dp = poly_degree(p), dq = poly_degree(q);
  if (dp < 0 || dq < 0) return 0.0;
  if (dp == 0 || dq == 0) return 1.0;  // nonzero constants share no root
  int n = dp + dq;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
  for (int r = 0; r < dq; ++r)
    for (int k = 0; k <= dp; ++k) s(r, r + dp - k) = p[k];
  for (int r = 0; r < dp; ++r)
    for (int k = 0; k <= dq; ++k) s(dq + r, r + dq - k) = q[k];
  double hadamard = 1.0;
  for (int r = 0; r < n; ++r) {
    double rn = s.row(r).norm();
    if (rn == 0) return 0.0;
    hadamard *= rn;
  }
  double det = std::abs(s.fullPivLu().determinant());
  return det / hadamard;
}

}  // namespace netforge
