#include "netforge/netgraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "netforge/errors.hpp"

namespace netforge {

namespace {

// Barycentric Lagrange interpolation on a small stencil (arbitrary nodes).
struct Stencil {
  double x[6];
  cplx y[6];
  int n = 6;

  cplx value(double t) const {
    // Exact hit guard.
    for (int i = 0; i < n; ++i)
      if (t == x[i]) return y[i];
    double wsum = 0;
    cplx acc = 0;
    for (int i = 0; i < n; ++i) {
      double w = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) w /= (x[i] - x[j]);
      w /= (t - x[i]);
      acc += w * y[i];
      wsum += w;
    }
    return acc / wsum;
  }
  cplx deriv(double t, int order = 1) const {
    // Differentiate the Newton form; n is tiny so do divided differences.
    // Build coefficients of the interpolating polynomial in the monomial
    // basis shifted by x[0] via repeated synthetic steps (n = 6: stable
    // enough for our uniform micro-stencils).
    cplx dd[6][6];
    for (int i = 0; i < n; ++i) dd[0][i] = y[i];
    for (int k = 1; k < n; ++k)
      for (int i = 0; i + k < n; ++i)
        dd[k][i] = (dd[k - 1][i + 1] - dd[k - 1][i]) / (x[i + k] - x[i]);
    // Newton evaluation with derivatives at t.
    cplx p = dd[n - 1][0], d1 = 0, d2 = 0;
    for (int i = n - 2; i >= 0; --i) {
      d2 = d2 * (t - x[i]) + 2.0 * d1;
      d1 = d1 * (t - x[i]) + p;
      p = p * (t - x[i]) + dd[i][0];
    }
    return order == 1 ? d1 : d2;
  }
};

enum class LocalChart { Z, W };

LocalChart window_chart(const SpherePoint* pts, int n) {
  bool zok = true;
  for (int i = 0; i < n; ++i)
    if (pts[i].inf || std::abs(pts[i].value) > 3.0) zok = false;
  return zok ? LocalChart::Z : LocalChart::W;
}

cplx in_chart(const SpherePoint& p, LocalChart c) {
  if (c == LocalChart::Z) {
    if (p.inf) throw numerical_error("edge interpolation: infinity in z chart");
    return p.value;
  }
  return sphere_invert(p).value;
}

SpherePoint from_chart(cplx v, LocalChart c) {
  if (c == LocalChart::Z) return sphere_of(v);
  return sphere_invert(sphere_of(v));
}

// Compose M with the chart-to-sphere map (identity or 1/w).
Mobius chart_mobius(const Mobius& M, LocalChart c) {
  if (c == LocalChart::Z) return M;
  return Mobius{M.b, M.a, M.d, M.c};  // M(1/w)
}

cplx mobius_second(const Mobius& N, cplx z) {
  cplx q = N.c * z + N.d;
  return -2.0 * N.c * N.det() / (q * q * q);
}

}  // namespace

EdgeArc EdgeArc::from_samples(int v0, int v1,
                              const std::vector<SpherePoint>& source,
                              int n_out) {
  if (source.size() < 2) throw input_error("edge: needs at least 2 samples");
  const int ns = static_cast<int>(source.size());
  std::vector<double> cum(ns, 0.0);
  for (int i = 1; i < ns; ++i)
    cum[i] = cum[i - 1] + chordal(source[i - 1], source[i]);
  double total = cum.back();
  if (total <= 0) throw input_error("edge: degenerate samples");

  EdgeArc arc;
  arc.v0 = v0;
  arc.v1 = v1;
  arc.length = total;
  arc.samples.resize(n_out);
  arc.samples[0] = source.front();
  arc.samples[n_out - 1] = source.back();
  for (int k = 1; k < n_out - 1; ++k) {
    double s = total * k / double(n_out - 1);
    int j = int(std::lower_bound(cum.begin(), cum.end(), s) - cum.begin());
    j = std::clamp(j, 1, ns - 1);
    int i0 = std::clamp(j - 3, 0, ns - 6);
    if (ns < 6) {
      // Short source: linear interpolation in the local chart.
      double f = (s - cum[j - 1]) / (cum[j] - cum[j - 1]);
      SpherePoint w2[2] = {source[j - 1], source[j]};
      LocalChart c = window_chart(w2, 2);
      arc.samples[k] =
          from_chart((1 - f) * in_chart(w2[0], c) + f * in_chart(w2[1], c), c);
      continue;
    }
    LocalChart c = window_chart(&source[i0], 6);
    Stencil st;
    for (int i = 0; i < 6; ++i) {
      st.x[i] = cum[i0 + i];
      st.y[i] = in_chart(source[i0 + i], c);
    }
    arc.samples[k] = from_chart(st.value(s), c);
  }
  return arc;
}

namespace {

struct EdgeWindow {
  Stencil st;
  LocalChart chart;
  double t;  // evaluation parameter in sample-index units
};

EdgeWindow edge_window(const EdgeArc& arc, double u) {
  const int n = static_cast<int>(arc.samples.size());
  double x = std::clamp(u, 0.0, 1.0) * (n - 1);
  int i0 = std::clamp(int(std::floor(x)) - 2, 0, n - 6);
  EdgeWindow w;
  w.chart = window_chart(&arc.samples[i0], 6);
  for (int i = 0; i < 6; ++i) {
    w.st.x[i] = double(i0 + i);
    w.st.y[i] = in_chart(arc.samples[i0 + i], w.chart);
  }
  w.t = x;
  return w;
}

}  // namespace

SpherePoint EdgeArc::at(double u) const {
  if (u <= 0.0) return samples.front();
  if (u >= 1.0) return samples.back();
  EdgeWindow w = edge_window(*this, u);
  return from_chart(w.st.value(w.t), w.chart);
}

cplx EdgeArc::deriv_in(const Mobius& M, double u) const {
  EdgeWindow w = edge_window(*this, u);
  const double scale = double(samples.size() - 1);  // d(index)/du
  cplx p = w.st.value(w.t);
  cplx dp = w.st.deriv(w.t, 1) * scale;
  Mobius N = chart_mobius(M, w.chart);
  return N.deriv(p) * dp;
}

cplx EdgeArc::second_in(const Mobius& M, double u) const {
  EdgeWindow w = edge_window(*this, u);
  const double scale = double(samples.size() - 1);
  cplx p = w.st.value(w.t);
  cplx dp = w.st.deriv(w.t, 1) * scale;
  cplx ddp = w.st.deriv(w.t, 2) * scale * scale;
  Mobius N = chart_mobius(M, w.chart);
  return mobius_second(N, p) * dp * dp + N.deriv(p) * ddp;
}

cplx EdgeArc::local_tangent(double u) const {
  EdgeWindow w = edge_window(*this, u);
  cplx dp = w.st.deriv(w.t, 1);
  double m = std::abs(dp);
  if (m == 0) throw numerical_error("edge: vanishing tangent");
  return dp / m;
}

int NetGraph::face_of_half(int h) const {
  for (size_t f = 0; f < faces.size(); ++f)
    for (int e : faces[f].cycle)
      if (e == h) return static_cast<int>(f);
  return -1;
}

namespace {

// Direction of departure of half-edge h from its origin, in the local chart
// of the origin vertex (z chart if the vertex is moderate, else w = 1/z).
cplx stub_direction(const NetGraph& g, int h) {
  const HalfEdge& he = g.halves[h];
  const EdgeArc& e = g.edges[he.edge];
  const SpherePoint v = g.vertices[he.origin];
  Mobius chart = prefer_inverted_chart(v) ? Mobius{cplx(0), cplx(1), cplx(1), cplx(0)}
                                          : Mobius::identity();
  double u = he.forward ? 0.0 : 1.0;
  cplx d = e.deriv_in(chart, u);
  if (!he.forward) d = -d;
  double m = std::abs(d);
  if (m == 0) throw input_error("graph: zero-speed edge end");
  return d / m;
}

double winding_total(const std::vector<cplx>& loop, cplx p) {
  double total = 0;
  for (size_t i = 0; i < loop.size(); ++i) {
    cplx a = loop[i] - p, b = loop[(i + 1) % loop.size()] - p;
    total += std::arg(b / a);
  }
  return total / (2.0 * kPi);
}

}  // namespace

NetGraph build_graph(std::vector<SpherePoint> vertices,
                     std::vector<EdgeArc> edges) {
  NetGraph g;
  g.vertices = std::move(vertices);
  g.edges = std::move(edges);
  const int ne = static_cast<int>(g.edges.size());
  g.halves.resize(2 * ne);
  for (int e = 0; e < ne; ++e) {
    if (g.edges[e].v0 < 0 || g.edges[e].v1 < 0 ||
        g.edges[e].v0 >= int(g.vertices.size()) ||
        g.edges[e].v1 >= int(g.vertices.size()))
      throw input_error("graph: edge endpoint out of range");
    g.halves[2 * e] = {2 * e + 1, -1, g.edges[e].v0, e, true};
    g.halves[2 * e + 1] = {2 * e, -1, g.edges[e].v1, e, false};
  }

  // Rotation system: outgoing halves sorted counterclockwise per vertex.
  std::vector<std::vector<int>> out(g.vertices.size());
  for (int h = 0; h < 2 * ne; ++h) out[g.halves[h].origin].push_back(h);
  std::vector<int> pos(2 * ne, -1);
  for (auto& list : out) {
    std::vector<double> ang(list.size());
    for (size_t i = 0; i < list.size(); ++i)
      ang[i] = std::arg(stub_direction(g, list[i]));
    std::vector<int> idx(list.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return ang[a] < ang[b]; });
    for (size_t i = 0; i + 1 < idx.size(); ++i)
      if (std::abs(ang[idx[i]] - ang[idx[i + 1]]) < 1e-9)
        throw input_error("graph: coincident stub directions (invalid embedding)");
    std::vector<int> sorted;
    for (int i : idx) sorted.push_back(list[i]);
    list = sorted;
    for (size_t i = 0; i < list.size(); ++i) pos[list[i]] = static_cast<int>(i);
  }

  // next(h): clockwise neighbor of twin(h) around head(h); faces on the left.
  for (int h = 0; h < 2 * ne; ++h) {
    int t = g.halves[h].twin;
    const auto& list = out[g.halves[t].origin];
    int m = static_cast<int>(list.size());
    g.halves[h].next = list[(pos[t] - 1 + m) % m];
  }

  // Faces from next-cycles.
  std::vector<int> seen(2 * ne, 0);
  for (int h = 0; h < 2 * ne; ++h) {
    if (seen[h]) continue;
    Face f;
    int cur = h;
    do {
      seen[cur] = 1;
      f.cycle.push_back(cur);
      cur = g.halves[cur].next;
      if (int(f.cycle.size()) > 2 * ne)
        throw input_error("graph: broken next cycles");
    } while (cur != h);
    g.faces.push_back(std::move(f));
  }

  g.face_probe.resize(g.faces.size());
  for (size_t f = 0; f < g.faces.size(); ++f)
    g.face_probe[f] = compute_face_probe(g, static_cast<int>(f));
  return g;
}

std::vector<SpherePoint> face_polyline(const NetGraph& g, int f, int stride) {
  std::vector<SpherePoint> line;
  for (int h : g.faces[f].cycle) {
    const EdgeArc& e = g.edges[g.halves[h].edge];
    const int n = static_cast<int>(e.samples.size());
    for (int i = 0; i < n - 1; i += stride) {
      int idx = g.halves[h].forward ? i : (n - 1 - i);
      line.push_back(e.samples[idx]);
    }
  }
  return line;
}

namespace {

// Winding of the face polyline around p, computed in the chart that sends
// q_out (a point off the closed face) to infinity.
int winding_about(const std::vector<SpherePoint>& poly, const SpherePoint& q_out,
                  const SpherePoint& p) {
  Mobius chart = q_out.inf ? Mobius::identity()
                           : Mobius::inversion_about(q_out.value);
  std::vector<cplx> loop;
  loop.reserve(poly.size());
  for (auto& s : poly) {
    SpherePoint m = chart(s);
    if (m.inf) throw numerical_error("winding: boundary hits the chart pole");
    loop.push_back(m.value);
  }
  SpherePoint mp = chart(p);
  if (mp.inf) return 0;
  return int(std::lround(winding_total(loop, mp.value)));
}

double min_dist_to_poly(const std::vector<SpherePoint>& poly, const SpherePoint& p) {
  double d = 4;
  for (auto& s : poly) d = std::min(d, chordal(s, p));
  return d;
}

}  // namespace

SpherePoint compute_face_probe(const NetGraph& g, int f) {
  const Face& face = g.faces[f];
  auto poly = face_polyline(g, f, 4);
  double best_score = -1;
  SpherePoint best;
  for (int h : face.cycle) {
    const EdgeArc& e = g.edges[g.halves[h].edge];
    double s_mid = 0.5;
    double u = g.edge_u(h, s_mid);
    SpherePoint m = e.at(u);
    Mobius chart = prefer_inverted_chart(m)
                       ? Mobius{cplx(0), cplx(1), cplx(1), cplx(0)}
                       : Mobius::identity();
    cplx mc = chart(m).value;
    cplx dir = e.deriv_in(chart, u);
    if (!g.halves[h].forward) dir = -dir;
    dir /= std::abs(dir);
    double spacing = e.length / double(e.samples.size() - 1);
    SpherePoint q_out = chart.inverse()(SpherePoint(mc - cplx(0, 1) * dir * (4 * spacing)));
    for (double eps : {0.5, 0.25, 0.1, 0.04, 0.01}) {
      SpherePoint cand = chart.inverse()(SpherePoint(mc + cplx(0, 1) * dir * eps));
      int w;
      try {
        w = winding_about(poly, q_out, cand);
      } catch (const Error&) {
        continue;
      }
      if (w != 1) continue;
      double score = min_dist_to_poly(poly, cand);
      if (score > best_score) {
        best_score = score;
        best = cand;
      }
      break;  // largest passing offset per edge is enough
    }
  }
  if (best_score < 0) throw numerical_error("face probe: no interior point found");
  return best;
}

bool point_in_face(const NetGraph& g, int f, const SpherePoint& p) {
  // Probe of any other face serves as the outside reference.
  SpherePoint q_out;
  bool found = false;
  for (size_t k = 0; k < g.faces.size(); ++k)
    if (int(k) != f) {
      q_out = g.face_probe[k];
      found = true;
      break;
    }
  if (!found) throw input_error("point_in_face: graph has a single face");
  auto poly = face_polyline(g, f, 4);
  try {
    return winding_about(poly, q_out, p) == 1;
  } catch (const Error&) {
    return false;
  }
}

void color_graph(NetGraph& g, int white_hint) {
  const int nf = static_cast<int>(g.faces.size());
  std::vector<int> face_of(g.halves.size(), -1);
  for (int f = 0; f < nf; ++f)
    for (int h : g.faces[f].cycle) face_of[h] = f;
  std::vector<int> color(nf, -1);
  std::vector<int> stack{white_hint};
  color[white_hint] = 0;
  while (!stack.empty()) {
    int f = stack.back();
    stack.pop_back();
    for (int h : g.faces[f].cycle) {
      int fn = face_of[g.halves[h].twin];
      if (color[fn] < 0) {
        color[fn] = 1 - color[f];
        stack.push_back(fn);
      } else if (color[fn] == color[f]) {
        throw input_error("graph is not 2-colorable");
      }
    }
  }
  for (int c : color)
    if (c < 0) throw input_error("graph: disconnected face adjacency");
  g.coloring = color;
}

GraphValidation validate_graph(const NetGraph& g) {
  GraphValidation rep;
  std::ostringstream msg;
  const int nh = static_cast<int>(g.halves.size());
  const int ne = static_cast<int>(g.edges.size());
  const int nv = static_cast<int>(g.vertices.size());
  const int nf = static_cast<int>(g.faces.size());

  rep.structure_ok = (nh == 2 * ne);
  std::vector<int> in_face(nh, 0);
  for (auto& f : g.faces)
    for (int h : f.cycle) {
      if (h < 0 || h >= nh) {
        rep.structure_ok = false;
        break;
      }
      in_face[h] += 1;
    }
  for (int h = 0; h < nh && rep.structure_ok; ++h) {
    const HalfEdge& he = g.halves[h];
    if (he.twin < 0 || he.twin >= nh || g.halves[he.twin].twin != h ||
        he.twin == h) {
      rep.structure_ok = false;
      msg << "twin not involutive at half " << h << "; ";
    }
    if (he.next < 0 || he.next >= nh) {
      rep.structure_ok = false;
    } else if (g.halves[he.next].origin != g.head(h)) {
      rep.structure_ok = false;
      msg << "next origin mismatch at half " << h << "; ";
    }
    if (in_face[h] != 1) {
      rep.structure_ok = false;
      msg << "half " << h << " in " << in_face[h] << " faces; ";
    }
  }

  rep.euler = nv - ne + nf;

  std::vector<int> valence(nv, 0);
  for (auto& he : g.halves) valence[he.origin] += 1;
  rep.valence_ok = true;
  for (int v = 0; v < nv; ++v)
    if (valence[v] == 0 || valence[v] % 2 != 0) {
      rep.valence_ok = false;
      msg << "vertex " << v << " has odd valence " << valence[v] << "; ";
    }

  // Coloring propriety.
  rep.coloring_ok = (int(g.coloring.size()) == nf);
  if (rep.coloring_ok) {
    std::vector<int> face_of(nh, -1);
    for (int f = 0; f < nf; ++f)
      for (int h : g.faces[f].cycle) face_of[h] = f;
    for (int h = 0; h < nh; ++h) {
      int f = face_of[h], fn = face_of[g.halves[h].twin];
      if (f < 0 || fn < 0 || g.coloring[f] == g.coloring[fn]) {
        rep.coloring_ok = false;
        msg << "coloring improper across half " << h << "; ";
        break;
      }
    }
  }

  // Angle defects from one-sided tangents.
  rep.vertex_angle_defect.assign(nv, 0.0);
  std::vector<std::vector<int>> out(nv);
  for (int h = 0; h < nh; ++h) out[g.halves[h].origin].push_back(h);
  for (int v = 0; v < nv; ++v) {
    if (out[v].empty()) continue;
    std::vector<double> ang;
    for (int h : out[v]) ang.push_back(std::arg(stub_direction(g, h)));
    std::sort(ang.begin(), ang.end());
    int m = static_cast<int>(ang.size());
    double expect = 2.0 * kPi / m;
    double worst = 0;
    for (int i = 0; i < m; ++i) {
      double gap = (i + 1 < m) ? ang[i + 1] - ang[i]
                               : ang[0] + 2.0 * kPi - ang[m - 1];
      worst = std::max(worst, std::abs(gap - expect));
    }
    rep.vertex_angle_defect[v] = worst;
    rep.max_angle_defect = std::max(rep.max_angle_defect, worst);
  }

  rep.message = msg.str();
  return rep;
}

void validate_marking(const NetGraph& g, const Marking& m) {
  const int nf = static_cast<int>(g.faces.size());
  if (int(m.base.size()) != nf || int(m.anchor.size()) != nf)
    throw input_error("marking: needs one base point and one anchor per face");
  for (int f = 0; f < nf; ++f) {
    if (!point_in_face(g, f, m.base[f]))
      throw input_error("marking: base point not inside its face");
    auto [e, u] = m.anchor[f];
    if (e < 0 || e >= int(g.edges.size()) || u <= 1e-9 || u >= 1.0 - 1e-9)
      throw input_error("marking: anchor must be an interior edge point");
    bool on_boundary = false;
    for (int h : g.faces[f].cycle)
      if (g.halves[h].edge == e) on_boundary = true;
    if (!on_boundary)
      throw input_error("marking: anchor edge is not on the face boundary");
  }
}

BranchedCoverModel branched_cover_from_net(const NetGraph& g,
                                           const std::vector<int>& vertex_value) {
  if (vertex_value.size() != g.vertices.size())
    throw input_error("branched cover: vertex_value size mismatch");
  if (g.coloring.empty()) throw input_error("branched cover: graph not colored");
  BranchedCoverModel m;
  int nbv = 0;
  for (int v : vertex_value) nbv = std::max(nbv, v + 1);
  m.n_branch_values = nbv;
  int white = 0;
  for (int c : g.coloring)
    if (c == 0) ++white;
  m.degree = white;
  m.vertex_local_degree.assign(g.vertices.size(), 0);
  std::vector<int> valence(g.vertices.size(), 0);
  for (auto& he : g.halves) valence[he.origin] += 1;
  for (size_t v = 0; v < g.vertices.size(); ++v)
    m.vertex_local_degree[v] = valence[v] / 2;

  for (size_t f = 0; f < g.faces.size(); ++f) {
    BranchedCoverModel::FaceWord w;
    w.color = g.coloring[f];
    // Walk the cycle; each half-edge runs from one branch value to the next,
    // i.e. traverses the arc starting at its origin's value.
    for (int h : g.faces[f].cycle) {
      int bv = vertex_value[g.halves[h].origin];
      w.arcs.push_back(bv);
    }
    m.faces.push_back(std::move(w));
  }
  return m;
}

void validate_branched_cover(const BranchedCoverModel& m) {
  if (m.degree < 1) throw input_error("branched cover: degree < 1");
  std::map<int, std::pair<int, int>> counts;  // arc -> (white, black)
  for (auto& f : m.faces)
    for (int a : f.arcs) {
      auto& c = counts[a];
      if (f.color == 0) c.first += 1;
      else c.second += 1;
    }
  for (auto& [arc, c] : counts) {
    if (c.first != m.degree || c.second != m.degree) {
      std::ostringstream os;
      os << "branched cover: arc " << arc << " appears in " << c.first
         << " white and " << c.second << " black faces, expected degree "
         << m.degree;
      throw input_error(os.str());
    }
  }
  for (int d : m.vertex_local_degree)
    if (d < 2)
      throw input_error("branched cover: vertex with local degree < 2");
}

}  // namespace netforge
