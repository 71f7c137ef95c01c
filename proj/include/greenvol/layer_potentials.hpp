#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "greenvol/geometry.hpp"
#include "greenvol/kernels.hpp"
#include "greenvol/poly_solutions.hpp"
#include "greenvol/quadrature.hpp"
#include "greenvol/types.hpp"

namespace greenvol {

/// Uniform parameter panels on [0, 2pi) with Gauss-Legendre nodes.
/// Node q of panel p has flat index p * order + q.
class BoundaryDiscretization {
 public:
  BoundaryDiscretization(BoundaryCurve curve, std::size_t panels, std::size_t gauss_order);

  const BoundaryCurve& curve() const { return curve_; }
  std::size_t panel_count() const { return panels_; }
  std::size_t gauss_order() const { return rule_.nodes.size(); }
  std::size_t node_count() const { return points_.size(); }
  double panel_width() const { return width_; }
  double panel_start(std::size_t p) const { return width_ * static_cast<double>(p); }
  /// Arc length of panel p.
  double panel_length(std::size_t p) const;
  std::size_t panel_of(double t) const;

  const GaussRule& rule() const { return rule_; }
  std::span<const double> parameters() const { return params_; }
  std::span<const Vec2> points() const { return points_; }
  std::span<const Vec2> normals() const { return normals_; }
  std::span<const double> speeds() const { return speeds_; }
  std::span<const double> weights() const { return weights_; }

  /// Lagrange basis of the panel's nodes evaluated at local coordinate s in [-1,1].
  void interpolation_weights(double s, std::span<double> out) const;

 private:
  BoundaryCurve curve_;
  std::size_t panels_;
  double width_;
  GaussRule rule_;
  std::vector<double> barycentric_;
  std::vector<double> params_;
  std::vector<Vec2> points_;
  std::vector<Vec2> normals_;
  std::vector<double> speeds_;
  std::vector<double> weights_;
};

BoundaryDiscretization discretize_boundary(const BoundaryCurve& curve, std::size_t panels,
                                           std::size_t gauss_order);

/// Dirichlet and Neumann data at the discretization nodes.
struct LayerDensityTrace {
  std::vector<cplx> dirichlet;
  std::vector<cplx> neumann;
};

/// Samples u and n.grad(u) at the discretization nodes.
LayerDensityTrace trace_of(const BoundaryDiscretization& bd, const SpatialFunction& u,
                           const std::function<std::pair<cplx, cplx>(const Vec2&)>& grad_u);
LayerDensityTrace trace_of(const BoundaryDiscretization& bd, const Polynomial2& p);

/// Target-specific quadrature weights on the discretization nodes such that
///   int_Gamma {dG/dn' phi - G psi} ds = sum_j double_layer[j] phi_j - single_layer[j] psi_j
/// for densities given by their node values (interpolated panelwise where refined).
struct LayerWeights {
  std::vector<cplx> double_layer;
  std::vector<cplx> single_layer;

  cplx apply(const LayerDensityTrace& trace) const;
};

struct CloseEvaluationOptions {
  double distance_factor{3.0};  // refine panels closer than this many panel lengths
  int max_depth{30};
  double min_spacing{1e-13};
};

/// Off-boundary target. Throws if r lies on Gamma or refinement exceeds max_depth.
LayerWeights layer_weights(Wavenumber k, const BoundaryDiscretization& bd, const Vec2& r,
                           const CloseEvaluationOptions& opts = {});

/// Principal-value weights for the boundary point gamma(t0).
LayerWeights layer_weights_on_boundary(Wavenumber k, const BoundaryDiscretization& bd, double t0,
                                       const CloseEvaluationOptions& opts = {});

/// int_Gamma {dG/dn' phi - G psi} ds at a target off Gamma.
cplx layer_combo(Wavenumber k, const BoundaryDiscretization& bd, const LayerDensityTrace& trace,
                 const Vec2& r, const CloseEvaluationOptions& opts = {});

/// Same integral with r = gamma(t0) in the principal-value sense.
cplx layer_combo_on_boundary(Wavenumber k, const BoundaryDiscretization& bd,
                             const LayerDensityTrace& trace, double t0);

/// Jump coefficient: 1 inside, 1/2 on Gamma, 0 outside.
double kappa(Location loc);

/// Layer weights dispatched on the location of r (on-boundary route for boundary points).
LayerWeights layer_weights_at(Wavenumber k, const BoundaryDiscretization& bd, const Vec2& r,
                              const ClosestPoint& where);

/// s_beta(r) = int_Gamma {dG/dn' P_beta - G dP_beta/dn} ds + kappa(r) P_beta(r) for every
/// beta of `family`, at one target. Result is indexed by basis position.
std::vector<cplx> s_beta_row(const BoundaryDiscretization& bd, const SolutionFamily& family,
                             std::span<const LayerDensityTrace> traces, const Vec2& r,
                             const ClosestPoint& where);

/// Column of s_beta over all grid nodes of the mesh.
std::vector<cplx> s_beta_column(Wavenumber k, const BoundaryDiscretization& bd,
                                const DomainMesh& mesh, MultiIndex beta);

/// -kappa(r) u(r) - int_Gamma {dG/dn' u - G du/dn} ds: the volume potential of (Delta+k^2)u.
cplx reference_potential(Wavenumber k, const BoundaryDiscretization& bd,
                         const LayerDensityTrace& u_trace, const SpatialFunction& u,
                         const Vec2& r, const ClosestPoint& where);

/// Refinement used for reference solutions: 4x the panel count, 16 Gauss nodes.
BoundaryDiscretization reference_discretization(const BoundaryCurve& curve,
                                                std::size_t base_panels);

}  // namespace greenvol
