#include "netforge/facemap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "netforge/errors.hpp"
#include "netforge/parallel.hpp"

namespace netforge {

namespace {

// 16-point Gauss-Legendre rule on [-1, 1].
constexpr int kQ = 16;
constexpr double kGLX[kQ] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
    -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
    -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
    0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
    0.9894009349916499};
constexpr double kGLW[kQ] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
    0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
    0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
    0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
    0.0271524594117541};

double legendre_p(int n, double x) {
  double p0 = 1, p1 = x;
  if (n == 0) return p0;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// Nodal values -> Legendre coefficients, exact through the GL rule.
std::vector<double> legendre_coeffs(const double* vals) {
  std::vector<double> a(kQ, 0.0);
  for (int k = 0; k < kQ; ++k) {
    double acc = 0;
    for (int j = 0; j < kQ; ++j) acc += kGLW[j] * legendre_p(k, kGLX[j]) * vals[j];
    a[k] = (2.0 * k + 1.0) / 2.0 * acc;
  }
  return a;
}

double legendre_eval(const std::vector<double>& a, double x) {
  double acc = 0;
  for (size_t k = 0; k < a.size(); ++k) acc += a[k] * legendre_p(int(k), x);
  return acc;
}

// Integral of the series from -1 to x: int P_k = (P_{k+1}-P_{k-1})/(2k+1).
double legendre_integral(const std::vector<double>& a, double x) {
  double acc = a[0] * (x + 1.0);
  for (size_t k = 1; k < a.size(); ++k) {
    double pkp = legendre_p(int(k) + 1, x), pkm = legendre_p(int(k) - 1, x);
    double pkp1 = legendre_p(int(k) + 1, -1.0), pkm1 = legendre_p(int(k) - 1, -1.0);
    acc += a[k] * ((pkp - pkm) - (pkp1 - pkm1)) / (2.0 * k + 1.0);
  }
  return acc;
}

Mobius inversion_chart(const SpherePoint& pole) {
  if (pole.inf) return Mobius::identity();
  return Mobius::inversion_about(pole.value);
}

}  // namespace

// ---------------------------------------------------------------------------
// Boundary evaluation

FaceMap::Node FaceMap::eval_boundary(int piece, double s) const {
  Node n;
  n.s = s;
  if (graph_) {
    int h = piece_half_[piece];
    const HalfEdge& he = graph_->halves[h];
    const EdgeArc& e = graph_->edges[he.edge];
    double u = he.forward ? s : 1.0 - s;
    n.pos = e.at(u);
    cplx d = e.deriv_in(chart_, u);
    cplx dd = e.second_in(chart_, u);
    if (!he.forward) d = -d;
    n.dzeta = d;
    n.zeta = chart_(n.pos).value;
    n.speed = std::abs(d);
    n.kappa = (dd * std::conj(d)).imag() / (n.speed * n.speed * n.speed);
    n.stretch = chart_stretch(chart_, n.pos);
  } else {
    const CurveSide& cs = *curve_;
    double dir = cs.reversed ? -2.0 * kPi : 2.0 * kPi;
    double t = cs.t_anchor + dir * s;
    cplx f = cs.curve.f(t), df = cs.curve.df(t) * dir,
         ddf = cs.curve.ddf(t) * dir * dir;
    Mobius W = cs.pre.then(chart_);  // f-plane -> solver chart
    cplx q = W.c * f + W.d;
    cplx w1 = W.det() / (q * q);
    cplx w2 = -2.0 * W.c * W.det() / (q * q * q);
    n.zeta = ((W.a * f + W.b) / q);
    n.dzeta = w1 * df;
    cplx dd = w2 * df * df + w1 * ddf;
    n.speed = std::abs(n.dzeta);
    n.kappa = (dd * std::conj(n.dzeta)).imag() / (n.speed * n.speed * n.speed);
    n.pos = cs.pre(SpherePoint(f));
    n.stretch = chart_stretch(chart_, n.pos);
  }
  if (n.speed == 0) throw numerical_error("face map: vanishing boundary speed");
  n.normal = cplx(0, -1) * n.dzeta / n.speed;
  return n;
}

SpherePoint FaceMap::point_of(int piece, double s) const {
  if (graph_) {
    int h = piece_half_[piece];
    const HalfEdge& he = graph_->halves[h];
    return graph_->edges[he.edge].at(he.forward ? s : 1.0 - s);
  }
  const CurveSide& cs = *curve_;
  double dir = cs.reversed ? -2.0 * kPi : 2.0 * kPi;
  return cs.pre(SpherePoint(cs.curve.f(cs.t_anchor + dir * s)));
}

cplx FaceMap::chart_point_of(int piece, double s) const {
  return chart_(point_of(piece, s)).value;
}

// ---------------------------------------------------------------------------
// Construction

namespace {

// Panel subdivision of [0,1]: base panels with dyadic grading into both ends
// (graded == true) or plain uniform panels (closed smooth pieces).
std::vector<std::pair<double, double>> panelize(int base, int levels, bool graded) {
  std::vector<std::pair<double, double>> out;
  if (!graded) {
    for (int i = 0; i < base; ++i)
      out.push_back({i / double(base), (i + 1) / double(base)});
    return out;
  }
  base = std::max(base, 3);
  double b0 = 1.0 / base, b1 = 1.0 - 1.0 / base;
  // left graded stack
  out.push_back({0.0, b0 * std::pow(0.5, levels)});
  for (int k = levels; k >= 1; --k)
    out.push_back({b0 * std::pow(0.5, k), b0 * std::pow(0.5, k - 1)});
  for (int i = 1; i + 1 < base; ++i)
    out.push_back({i / double(base), (i + 1) / double(base)});
  for (int k = 1; k <= levels; ++k)
    out.push_back({b1 + (1 - b1) * (1.0 - std::pow(0.5, k - 1)),
                   b1 + (1 - b1) * (1.0 - std::pow(0.5, k))});
  out.push_back({1.0 - (1 - b1) * std::pow(0.5, levels), 1.0});
  return out;
}

}  // namespace

void FaceMap::solve_density() {
  const int n = static_cast<int>(nodes_.size());
  Eigen::MatrixXd M(n, n);
  std::vector<double> wts(n);
  for (auto& p : panels_)
    for (int j = 0; j < kQ; ++j) {
      int id = p.node0 + j;
      wts[id] = kGLW[j] * (p.s1 - p.s0) / 2.0 * nodes_[id].speed;
    }
  par::parallel_for(n, [&](long i) {
    const Node& a = nodes_[i];
    for (int j = 0; j < n; ++j) {
      double k;
      if (j == int(i)) {
        k = a.kappa / (4.0 * kPi);
      } else {
        cplx d = a.zeta - nodes_[j].zeta;
        k = (a.normal / d).real() / (2.0 * kPi);
      }
      M(i, j) = k * wts[j] + (j == int(i) ? 0.5 : 0.0);
    }
  });
  lu_ = std::make_shared<Eigen::PartialPivLU<Eigen::MatrixXd>>(M);

  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i)
    rhs(i) = ((nodes_[i].normal / (nodes_[i].zeta - base_chart_)).real()) /
             (2.0 * kPi);
  rho_ = lu_->solve(rhs);
  residual_ = (M * rho_ - rhs).cwiseAbs().maxCoeff();

  total_mass_ = 0;
  for (int i = 0; i < n; ++i) total_mass_ += rho_(i) * wts[i];
  if (std::abs(total_mass_ - 1.0) > 1e-3 || residual_ > 1e-8) {
    std::ostringstream os;
    os << "face map: integral equation solve failed (mass " << total_mass_
       << ", residual " << residual_ << ")";
    throw numerical_error(os.str());
  }
}

void FaceMap::build_cumulative() {
  double cum = 0;
  for (auto& p : panels_) {
    double m[kQ], r[kQ];
    for (int j = 0; j < kQ; ++j) {
      int id = p.node0 + j;
      r[j] = rho_(id);
      m[j] = rho_(id) * nodes_[id].speed * (p.s1 - p.s0) / 2.0;
    }
    p.legendre = legendre_coeffs(m);
    p.rho_leg = legendre_coeffs(r);
    p.cum0 = cum;
    p.mass = 2.0 * p.legendre[0];
    cum += p.mass;
  }
  anchor_cum_ = 0;
  anchor_cum_ = panel_cumulative(panel_for(anchor_piece_, anchor_s_), anchor_s_) +
                panel_for(anchor_piece_, anchor_s_).cum0;
}

const FaceMap::Panel& FaceMap::panel_for(int piece, double s) const {
  int p0 = piece_panel0_[piece];
  int p1 = (piece + 1 < int(piece_panel0_.size())) ? piece_panel0_[piece + 1]
                                                   : int(panels_.size());
  for (int k = p0; k < p1; ++k)
    if (s <= panels_[k].s1) return panels_[k];
  return panels_[p1 - 1];
}

double FaceMap::panel_cumulative(const Panel& p, double s) const {
  double x = std::clamp(2.0 * (s - p.s0) / (p.s1 - p.s0) - 1.0, -1.0, 1.0);
  return legendre_integral(p.legendre, x);
}

double FaceMap::density_chart(int piece, double s) const {
  const Panel& p = panel_for(piece, s);
  double x = std::clamp(2.0 * (s - p.s0) / (p.s1 - p.s0) - 1.0, -1.0, 1.0);
  return legendre_eval(p.rho_leg, x) / total_mass_;
}

double FaceMap::density_chordal(int piece, double s) const {
  Node n = eval_boundary(piece, s);
  return density_chart(piece, s) * n.stretch;
}

double FaceMap::cumulative(int piece, double s) const {
  const Panel& p = panel_for(piece, s);
  double raw = p.cum0 + panel_cumulative(p, s) - anchor_cum_;
  double t = raw / total_mass_;
  t -= std::floor(t);
  return t;
}

std::pair<int, double> FaceMap::boundary_at(double t) const {
  t -= std::floor(t);
  double target = anchor_cum_ + t * total_mass_;
  if (target >= total_mass_) target -= total_mass_;
  // Locate the panel.
  int lo = 0, hi = static_cast<int>(panels_.size()) - 1;
  while (lo < hi) {
    int mid = (lo + hi + 1) / 2;
    if (panels_[mid].cum0 <= target) lo = mid;
    else hi = mid - 1;
  }
  const Panel& p = panels_[lo];
  double want = target - p.cum0;
  // Newton with bisection safety on the panel antiderivative.
  double a = -1.0, b = 1.0, x = 0.0;
  for (int it = 0; it < 60; ++it) {
    double F = legendre_integral(p.legendre, x) - want;
    if (F > 0) b = x;
    else a = x;
    double d = legendre_eval(p.legendre, x);
    double step = (d > 1e-14 * p.mass) ? -F / d : 0.0;
    double xn = x + step;
    if (!(xn > a && xn < b) || step == 0.0) xn = 0.5 * (a + b);
    if (std::abs(xn - x) < 1e-15) {
      x = xn;
      break;
    }
    x = xn;
  }
  double s = p.s0 + (x + 1.0) / 2.0 * (p.s1 - p.s0);
  // Identify the piece of this panel.
  int piece = p.piece;
  return {piece, s};
}

std::pair<int, double> FaceMap::locate_edge(int edge, double u) const {
  if (!graph_) throw input_error("face map: not a graph face");
  for (int k = 0; k < n_pieces(); ++k) {
    if (piece_edge_[k] == edge) {
      bool fwd = graph_->halves[piece_half_[k]].forward;
      return {k, fwd ? u : 1.0 - u};
    }
  }
  throw input_error("face map: edge not on this face");
}

double FaceMap::density_on_edge(int edge, double u) const {
  auto [p, s] = locate_edge(edge, u);
  return density_chordal(p, s);
}

double FaceMap::cumulative_on_edge(int edge, double u) const {
  auto [p, s] = locate_edge(edge, u);
  return cumulative(p, s);
}

void FaceMap::build_inverse_table() {
  const int m = static_cast<int>(inv_table_.size());
  for (int j = 0; j < m; ++j) {
    auto [piece, s] = boundary_at(j / double(m));
    inv_table_[j] = chart_point_of(piece, s);
  }
}

cplx FaceMap::disk_to_chart(cplx w) const {
  const int m = static_cast<int>(inv_table_.size());
  cplx acc = 0;
  for (int j = 0; j < m; ++j) {
    cplx e = std::polar(1.0, 2.0 * kPi * j / m);
    acc += inv_table_[j] * e / (e - w);
  }
  return acc / double(m);
}

SpherePoint FaceMap::disk_to_face(cplx w) const {
  return chart_.inverse()(SpherePoint(disk_to_chart(w)));
}

cplx FaceMap::map_to_disk(const SpherePoint& z) const {
  cplx zeta = chart_(z).value;
  // phi(zeta) = gauge * (zeta - base) * exp(-sum rho_j w_j log(zeta - x_j))
  // with the log branch unwrapped along the boundary walk.
  double prev_arg = 0;
  bool first = true;
  cplx S = 0;
  for (auto& p : panels_) {
    for (int j = 0; j < kQ; ++j) {
      int id = p.node0 + j;
      double wj = kGLW[j] * (p.s1 - p.s0) / 2.0 * nodes_[id].speed *
                  rho_(id) / total_mass_;
      cplx d = zeta - nodes_[id].zeta;
      double mag = std::log(std::abs(d));
      double ang = std::arg(d);
      if (!first) {
        while (ang - prev_arg > kPi) ang -= 2.0 * kPi;
        while (ang - prev_arg < -kPi) ang += 2.0 * kPi;
      }
      prev_arg = ang;
      first = false;
      S += wj * cplx(mag, ang);
    }
  }
  return forward_gauge_ * (zeta - base_chart_) * std::exp(-S);
}

void FaceMap::set_base(const SpherePoint& new_base) {
  base_ = new_base;
  base_chart_ = chart_(new_base).value;
  const int n = static_cast<int>(nodes_.size());
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i)
    rhs(i) = ((nodes_[i].normal / (nodes_[i].zeta - base_chart_)).real()) /
             (2.0 * kPi);
  rho_ = lu_->solve(rhs);
  std::vector<double> wts(n);
  for (auto& p : panels_)
    for (int j = 0; j < kQ; ++j)
      wts[p.node0 + j] = kGLW[j] * (p.s1 - p.s0) / 2.0 * nodes_[p.node0 + j].speed;
  total_mass_ = 0;
  for (int i = 0; i < n; ++i) total_mass_ += rho_(i) * wts[i];
  build_cumulative();
  build_inverse_table();
  // Re-gauge the forward map.
  forward_gauge_ = cplx(1);
  SpherePoint probe = disk_to_face(cplx(0.5, 0));
  cplx raw = map_to_disk(probe);
  forward_gauge_ = std::polar(0.5, 0.0) / raw * std::abs(raw) / 0.5;
}

void FaceMap::set_anchor(int piece, double s) {
  anchor_piece_ = piece;
  anchor_s_ = s;
  const Panel& p = panel_for(piece, s);
  anchor_cum_ = p.cum0 + panel_cumulative(p, s);
  build_inverse_table();
  forward_gauge_ = cplx(1);
  SpherePoint probe = disk_to_face(cplx(0.5, 0));
  cplx raw = map_to_disk(probe);
  forward_gauge_ = std::polar(0.5, 0.0) / raw * std::abs(raw) / 0.5;
}

void FaceMap::set_anchor_edge(int edge, double u) {
  auto [p, s] = locate_edge(edge, u);
  set_anchor(p, s);
}

namespace {

void finish_build(FaceMap& fm) {
  fm.set_base(fm.base());  // solves rhs, cumulative, table, gauge
}

}  // namespace

FaceMap face_map_graph(const NetGraph& g, int face, const SpherePoint& base,
                       std::optional<std::pair<int, double>> anchor_edge_u,
                       const FaceMapOptions& opt) {
  FaceMap fm;
  fm.graph_ = &g;
  fm.face_ = face;
  auto poly = face_polyline(g, face, 4);

  // Chart pole: the other-face probe farthest from this boundary.
  SpherePoint pole;
  double best = -1;
  for (size_t f = 0; f < g.faces.size(); ++f) {
    if (int(f) == face) continue;
    double dmin = 4;
    for (auto& s : poly) dmin = std::min(dmin, chordal(g.face_probe[f], s));
    dmin = std::min(dmin, chordal(g.face_probe[f], base) * 2);
    if (dmin > best) {
      best = dmin;
      pole = g.face_probe[f];
    }
  }
  Mobius m0 = inversion_chart(pole);
  cplx cen = 0;
  double cnt = 0;
  for (auto& s : poly) {
    SpherePoint q = m0(s);
    if (q.inf) throw numerical_error("face map: chart pole on the boundary");
    cen += q.value;
    cnt += 1;
  }
  cen /= cnt;
  double rad = 0;
  for (auto& s : poly) rad = std::max(rad, std::abs(m0(s).value - cen));
  fm.chart_ = m0.then(Mobius::affine(cplx(1.0 / rad), -cen / rad));
  fm.base_ = base;
  fm.base_chart_ = fm.chart_(base).value;

  // Pieces = half-edges of the cycle; panels graded into both endpoints.
  const Face& fc = g.faces[face];
  int node0 = 0;
  for (int h : fc.cycle) {
    int piece = fm.n_pieces();
    fm.piece_half_.push_back(h);
    fm.piece_edge_.push_back(g.halves[h].edge);
    fm.piece_len_.push_back(g.edges[g.halves[h].edge].length);
    fm.boundary_len_ += fm.piece_len_.back();
    fm.piece_panel0_.push_back(static_cast<int>(fm.panels_.size()));
    int base_n = std::max(3, int(std::lround(opt.base_panels * opt.refine)));
    for (auto [s0, s1] : panelize(base_n, opt.levels, true)) {
      FaceMap::Panel p;
      p.piece = piece;
      p.s0 = s0;
      p.s1 = s1;
      p.node0 = node0;
      node0 += kQ;
      fm.panels_.push_back(p);
    }
  }
  fm.nodes_.resize(node0);
  for (auto& p : fm.panels_)
    for (int j = 0; j < kQ; ++j) {
      double s = p.s0 + (kGLX[j] + 1.0) / 2.0 * (p.s1 - p.s0);
      fm.nodes_[p.node0 + j] = fm.eval_boundary(p.piece, s);
    }

  fm.inv_table_.resize(opt.inverse_table);
  fm.solve_density();
  if (anchor_edge_u) {
    auto [pc, s] = fm.locate_edge(anchor_edge_u->first, anchor_edge_u->second);
    fm.anchor_piece_ = pc;
    fm.anchor_s_ = s;
  } else {
    fm.anchor_piece_ = 0;
    fm.anchor_s_ = 0.5;
  }
  finish_build(fm);
  return fm;
}

FaceMap face_map_curve_side(const AnalyticJordanCurve& c, bool interior_side,
                            std::optional<SpherePoint> base, double t_anchor,
                            const FaceMapOptions& opt) {
  FaceMap fm;
  FaceMap::CurveSide cs;
  cs.curve = c;
  cs.pre = c.chart ? *c.chart : Mobius::identity();
  cs.t_anchor = t_anchor;

  // Orientation of the trig polynomial in its own plane.
  double area = 0;
  const int ns = 512;
  for (int i = 0; i < ns; ++i) {
    double t = 2.0 * kPi * i / ns;
    area += (std::conj(c.f(t)) * c.df(t)).imag();
  }
  bool ccw = area > 0;
  cs.reversed = interior_side ? !ccw : ccw;

  // f-plane centroid (inside the bounded component for our mild curves).
  cplx cent = 0;
  for (int i = 0; i < ns; ++i) cent += c.f(2.0 * kPi * i / ns);
  cent /= double(ns);
  double radius = 0;
  for (int i = 0; i < ns; ++i)
    radius = std::max(radius, std::abs(c.f(2.0 * kPi * i / ns) - cent));

  Mobius chart;
  if (interior_side) {
    // The curve's own plane already bounds this side.
    chart = cs.pre.inverse();
    // Normalize scale in the f-plane.
    chart = chart.then(Mobius::affine(cplx(1.0 / radius), -cent / radius));
    if (!base) base = cs.pre(SpherePoint(cent));
  } else {
    // Invert about the interior centroid.
    Mobius inv = Mobius::inversion_about(cent);
    chart = cs.pre.inverse().then(inv);
    double rad2 = 0;
    cplx cen2 = 0;
    for (int i = 0; i < ns; ++i)
      cen2 += inv(SpherePoint(c.f(2.0 * kPi * i / ns))).value;
    cen2 /= double(ns);
    for (int i = 0; i < ns; ++i)
      rad2 = std::max(rad2, std::abs(inv(SpherePoint(c.f(2.0 * kPi * i / ns))).value - cen2));
    chart = chart.then(Mobius::affine(cplx(1.0 / rad2), -cen2 / rad2));
    if (!base) base = cs.pre(SpherePoint::infinity());
  }
  fm.curve_ = cs;
  fm.chart_ = chart;
  fm.base_ = *base;
  fm.base_chart_ = chart(*base).value;

  fm.piece_edge_.push_back(-1);
  fm.piece_panel0_.push_back(0);
  int n_panels = std::max(8, int(std::lround(opt.curve_nodes * opt.refine / kQ)));
  int node0 = 0;
  for (auto [s0, s1] : panelize(n_panels, 0, false)) {
    FaceMap::Panel p;
    p.piece = 0;
    p.s0 = s0;
    p.s1 = s1;
    p.node0 = node0;
    node0 += kQ;
    fm.panels_.push_back(p);
  }
  fm.nodes_.resize(node0);
  for (auto& p : fm.panels_)
    for (int j = 0; j < kQ; ++j) {
      double s = p.s0 + (kGLX[j] + 1.0) / 2.0 * (p.s1 - p.s0);
      fm.nodes_[p.node0 + j] = fm.eval_boundary(0, s);
    }
  // Chordal length of the curve.
  double len = 0;
  SpherePoint prev = fm.point_of(0, 0.0);
  for (int i = 1; i <= 512; ++i) {
    SpherePoint cur = fm.point_of(0, i / 512.0);
    len += chordal(prev, cur);
    prev = cur;
  }
  fm.piece_len_.push_back(len);
  fm.boundary_len_ = len;

  fm.inv_table_.resize(opt.inverse_table);
  fm.solve_density();
  fm.anchor_piece_ = 0;
  fm.anchor_s_ = 0.0;
  finish_build(fm);
  return fm;
}

FaceMap riemann_map_face(const NetGraph& g, int face, const SpherePoint& base,
                         std::optional<std::pair<int, double>> anchor,
                         double settle_tol, int max_doublings,
                         const FaceMapOptions& opt) {
  FaceMapOptions o = opt;
  FaceMap fm = face_map_graph(g, face, base, anchor, o);
  for (int k = 0; k < max_doublings; ++k) {
    FaceMapOptions o2 = o;
    o2.refine = o.refine * 2;
    o2.levels = o.levels + 1;
    FaceMap fm2 = face_map_graph(g, face, base, anchor, o2);
    double diff = 0;
    for (int piece = 0; piece < fm.n_pieces(); ++piece)
      for (double s : {0.3, 0.5, 0.7})
        diff = std::max(diff, std::abs(fm.density_chart(piece, s) -
                                       fm2.density_chart(piece, s)));
    fm = std::move(fm2);
    o = o2;
    if (diff < settle_tol) break;
  }
  return fm;
}

}  // namespace netforge
