#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "greenvol/quadrature.hpp"
#include "greenvol/types.hpp"

namespace greenvol {

/// Closed counterclockwise curve t in [0, 2pi) -> R^2 with analytic derivatives.
struct BoundaryCurve {
  std::string name;
  std::function<Vec2(double)> position;
  std::function<Vec2(double)> derivative;
  std::function<Vec2(double)> second_derivative;

  Vec2 normal(double t) const { return outward_normal(derivative(t)); }
};

/// Unit circle, kite and jellyfish curves.
BoundaryCurve builtin_curve(std::string_view name);

/// Curve on s in [-1,1] used as one side of a transfinite patch.
struct EdgeCurve {
  std::function<Vec2(double)> point;
  std::function<Vec2(double)> tangent;  // d/ds
};

EdgeCurve segment_edge(Vec2 from, Vec2 to);
/// Arc of `curve` for t running linearly from t_begin (s=-1) to t_end (s=+1).
EdgeCurve arc_edge(const BoundaryCurve& curve, double t_begin, double t_end);

/// Sides of the parameter square: bottom/top run along xi1 (xi2 = -1/+1),
/// left/right run along xi2 (xi1 = -1/+1).
struct TransfiniteEdges {
  EdgeCurve bottom;
  EdgeCurve top;
  EdgeCurve left;
  EdgeCurve right;
};

enum class PatchKind { analytic, transfinite, subpatch };

class PatchMap {
 public:
  using MapFn = std::function<Vec2(const ParamPoint&)>;
  using JacFn = std::function<Mat2(const ParamPoint&)>;

  static PatchMap analytic(MapFn map, JacFn jacobian);

  Vec2 map(const ParamPoint& xi) const { return map_(xi); }
  Mat2 jacobian(const ParamPoint& xi) const { return jac_(xi); }
  PatchKind kind() const { return kind_; }

  /// map(xi) = parent.map(offset + scale * xi).
  PatchMap subpatch(Vec2 offset, double scale) const;

  /// Images of (-1,-1), (1,-1), (1,1), (-1,1).
  std::array<Vec2, 4> corners() const;

 private:
  friend PatchMap transfinite_map(const TransfiniteEdges& edges);
  PatchMap(MapFn map, JacFn jac, PatchKind kind)
      : map_(std::move(map)), jac_(std::move(jac)), kind_(kind) {}

  MapFn map_;
  JacFn jac_;
  PatchKind kind_{PatchKind::analytic};
};

/// Bilinearly blended Coons patch. Throws if adjacent edges miss their
/// shared corner by more than 1e-12.
PatchMap transfinite_map(const TransfiniteEdges& edges);

/// Splits each patch into D x D subpatches of side 2/D in parameter space.
std::vector<PatchMap> subdivide(std::span<const PatchMap> patches, std::size_t d);

enum class Location { interior, boundary, exterior };

const char* to_string(Location loc);

struct ClosestPoint {
  Vec2 point;             // r* (r itself for points of the closed domain)
  Location location{Location::interior};
  double distance{0.0};   // distance from r to the boundary curve
  double parameter{0.0};  // curve parameter of the boundary point nearest r
  Vec2 boundary_point;
};

/// Closest-point queries and inside/outside classification against a
/// BoundaryCurve, backed by a fixed uniform sampling of the curve.
class BoundaryLocator {
 public:
  static constexpr std::size_t kSamples = 4096;
  static constexpr double kBoundaryBand = 1e-12;

  explicit BoundaryLocator(BoundaryCurve curve);

  ClosestPoint closest(const Vec2& r) const;
  /// Winding number of the sampled polygon around r.
  int winding_number(const Vec2& r) const;
  const BoundaryCurve& curve() const { return curve_; }

 private:
  BoundaryCurve curve_;
  std::vector<Vec2> samples_;
};

struct NodeIndex {
  std::size_t patch{0};
  std::size_t i{0};  // index of t_i along xi1
  std::size_t j{0};  // index of t_j along xi2
};

/// Quadrilateral-patch mesh of a domain with an N x N Fejer grid per patch.
///
/// Global node index l(p,i,j) = (p*N + i)*N + j. Immutable after construction.
class DomainMesh {
 public:
  DomainMesh(std::string name, std::vector<PatchMap> patches, std::size_t base_patches,
             std::size_t subdivisions, ChebRule rule, BoundaryCurve boundary);

  const std::string& name() const { return name_; }
  std::size_t order() const { return rule_.n; }
  std::size_t subdivisions() const { return subdivisions_; }
  std::size_t base_patch_count() const { return base_patches_; }
  std::size_t patch_count() const { return patches_.size(); }
  std::size_t node_count() const { return nodes_.size(); }

  const std::vector<PatchMap>& patches() const { return patches_; }
  const PatchMap& patch(std::size_t p) const { return patches_.at(p); }
  const ChebRule& rule() const { return rule_; }
  const BoundaryCurve& boundary() const { return locator_.curve(); }
  const BoundaryLocator& locator() const { return locator_; }

  std::span<const Vec2> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  const Vec2& node(std::size_t l) const { return nodes_[l]; }
  double weight(std::size_t l) const { return weights_[l]; }

  std::size_t global_index(std::size_t p, std::size_t i, std::size_t j) const {
    return (p * rule_.n + i) * rule_.n + j;
  }
  NodeIndex local_index(std::size_t l) const;

 private:
  std::string name_;
  std::vector<PatchMap> patches_;
  std::size_t base_patches_;
  std::size_t subdivisions_;
  ChebRule rule_;
  BoundaryLocator locator_;
  std::vector<Vec2> nodes_;
  std::vector<double> weights_;
};

/// Built-in meshes: "disk", "kite" and "jellyfish", each cut into a central
/// quadrilateral and four ruled boundary patches, then subdivided D x D.
DomainMesh build_builtin_domain(std::string_view name, std::size_t n, std::size_t d);

ClosestPoint closest_point_on_domain(const DomainMesh& mesh, const Vec2& r);

/// Plotting-oriented dump: {domain, N, D, patches: [{corners, type}], nodes: [[x,y,w]]}.
void write_mesh_json(const DomainMesh& mesh, std::ostream& out);

}  // namespace greenvol
