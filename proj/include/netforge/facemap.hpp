#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "netforge/curve.hpp"
#include "netforge/netgraph.hpp"
#include "netforge/sphere.hpp"

namespace netforge {

struct FaceMapOptions {
  int gl_order = 16;       // nodes per panel (fixed table)
  int base_panels = 8;     // uniform panels per edge before grading
  int levels = 12;         // dyadic refinement levels toward each corner
  int curve_nodes = 512;   // trapezoid nodes for smooth closed curves
  int inverse_table = 2048;  // uniform-angle boundary table for Cauchy sums
  double refine = 1.0;     // multiplies base_panels and curve_nodes
};

// Boundary correspondence of the Riemann map of one face: harmonic-measure
// density along the boundary (solved by a second-kind integral equation),
// cumulative measure from the anchor, and interior evaluation both ways.
// Everything is computed in a Mobius chart in which the face is bounded;
// densities are exposed against chordal arclength so ratios between faces
// are chart-free.
class FaceMap {
 public:
  struct Node {
    cplx zeta;        // chart position
    cplx dzeta;       // d zeta / ds (piece parameter)
    cplx normal;      // outward unit normal in chart
    double speed;     // |dzeta/ds|
    double kappa;     // curvature in chart
    double stretch;   // ds_chart / ds_chordal
    SpherePoint pos;  // sphere position
    double s;         // piece parameter
  };
  struct Panel {
    int piece;
    double s0, s1;
    int node0;        // first node index
    double cum0;      // measure accumulated before this panel (unnormalized)
    double mass;      // measure carried by this panel (unnormalized)
    std::vector<double> legendre;  // coeffs of measure density m(x) on [-1,1]
    std::vector<double> rho_leg;   // coeffs of chart density rho(x)
  };

  // -- boundary queries ------------------------------------------------
  int n_pieces() const { return static_cast<int>(piece_edge_.size()); }
  // Density of harmonic measure wrt chordal arclength at (piece, s).
  double density_chordal(int piece, double s) const;
  double density_chart(int piece, double s) const;
  // Cumulative measure in [0,1) from the anchor, increasing along the cycle.
  double cumulative(int piece, double s) const;
  // Inverse of cumulative: boundary point at measure t.
  std::pair<int, double> boundary_at(double t) const;
  SpherePoint point_of(int piece, double s) const;
  cplx chart_point_of(int piece, double s) const;

  // Graph-face helpers: look up by (edge id, edge parameter u).
  std::pair<int, double> locate_edge(int edge, double u) const;
  double density_on_edge(int edge, double u) const;
  double cumulative_on_edge(int edge, double u) const;

  // -- interior evaluation ----------------------------------------------
  // Forward map to the unit disk (anchor at angle 0).
  cplx map_to_disk(const SpherePoint& z) const;
  // Inverse map from the disk (Cauchy integral of the boundary table).
  SpherePoint disk_to_face(cplx w) const;
  cplx disk_to_chart(cplx w) const;

  // -- maintenance -------------------------------------------------------
  // Re-solve for a new base point reusing the factored operator.
  void set_base(const SpherePoint& new_base);
  void set_anchor(int piece, double s);
  void set_anchor_edge(int edge, double u);

  const SpherePoint& base() const { return base_; }
  const Mobius& chart() const { return chart_; }
  double total_mass() const { return total_mass_; }  // pre-normalization
  double solve_residual() const { return residual_; }
  int n_nodes() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Node>& nodes() const { return nodes_; }
  int piece_edge(int piece) const { return piece_edge_[piece]; }
  // Arclength (chordal) of a piece and of the whole boundary.
  double piece_length(int piece) const { return piece_len_[piece]; }
  double boundary_length() const { return boundary_len_; }
  int graph_face() const { return face_; }

 private:
  friend FaceMap face_map_graph(const NetGraph&, int, const SpherePoint&,
                                std::optional<std::pair<int, double>>,
                                const FaceMapOptions&);
  friend FaceMap face_map_curve_side(const AnalyticJordanCurve&, bool,
                                     std::optional<SpherePoint>, double,
                                     const FaceMapOptions&);

  void solve_density();
  void build_cumulative();
  void build_inverse_table();
  double panel_cumulative(const Panel& p, double s) const;
  const Panel& panel_for(int piece, double s) const;

  // geometry sources (exactly one used)
  const NetGraph* graph_ = nullptr;
  int face_ = -1;
  std::vector<int> piece_half_;  // half-edge per piece (graph faces)
  struct CurveSide {
    AnalyticJordanCurve curve;
    bool reversed;   // s -> t runs backwards (exterior side)
    double t_anchor; // curve parameter at s = 0 of piece 0
    Mobius pre;      // curve chart composed before the solver chart
  };
  std::optional<CurveSide> curve_;

  Mobius chart_;  // sphere -> solver chart
  SpherePoint base_;
  cplx base_chart_;

  std::vector<int> piece_edge_;    // edge id per piece (-1 for curves)
  std::vector<double> piece_len_;  // chordal lengths
  double boundary_len_ = 0;

  std::vector<Node> nodes_;
  std::vector<Panel> panels_;
  std::vector<int> piece_panel0_;  // first panel of each piece
  Eigen::VectorXd rho_;
  std::shared_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
  double total_mass_ = 0;
  double residual_ = 0;
  int anchor_piece_ = 0;
  double anchor_s_ = 0;
  double anchor_cum_ = 0;  // unnormalized measure at the anchor

  std::vector<cplx> inv_table_;  // chart boundary points at uniform angle
  cplx forward_gauge_ = cplx(1);  // e^{iC} fixing anchor -> angle 0

  Node eval_boundary(int piece, double s) const;
};

// Builds the map of a graph face from the given base point; the anchor
// defaults to the midpoint of the face's first half-edge.
FaceMap face_map_graph(const NetGraph& g, int face, const SpherePoint& base,
                       std::optional<std::pair<int, double>> anchor_edge_u,
                       const FaceMapOptions& opt = {});

// Map of one complementary side of an analytic Jordan curve. interior_side
// refers to the bounded component in the curve's own plane. The anchor is
// the curve point at parameter t_anchor. Base defaults to a centroid probe
// (interior) or the image of infinity (exterior).
FaceMap face_map_curve_side(const AnalyticJordanCurve& c, bool interior_side,
                            std::optional<SpherePoint> base, double t_anchor,
                            const FaceMapOptions& opt = {});

// Spec-facing wrapper: solves, then doubles resolution until boundary
// densities settle below tol or the cap is reached.
FaceMap riemann_map_face(const NetGraph& g, int face, const SpherePoint& base,
                         std::optional<std::pair<int, double>> anchor,
                         double settle_tol = 1e-8, int max_doublings = 1,
                         const FaceMapOptions& opt = {});

}  // namespace netforge
