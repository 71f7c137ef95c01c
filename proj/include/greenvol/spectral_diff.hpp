#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "greenvol/geometry.hpp"
#include "greenvol/poly_solutions.hpp"
#include "greenvol/types.hpp"

namespace greenvol {

/// Samples of a function on the N x N Chebyshev-zero grid of one patch;
/// value (i, j) sits at (t_i, t_j).
struct GridField {
  std::size_t patch{0};
  std::size_t n{0};
  std::vector<cplx> values;

  GridField() = default;
  GridField(std::size_t patch_index, std::size_t order)
      : patch(patch_index), n(order), values(order * order) {}

  cplx& at(std::size_t i, std::size_t j) { return values[i * n + j]; }
  const cplx& at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

/// Samples F o x_q on the grid of patch p.
GridField sample_patch(const DomainMesh& mesh, std::size_t p, const SpatialFunction& f);

/// Parametric gradient (dF/dxi1, dF/dxi2) by cosine-series differentiation in theta.
std::pair<GridField, GridField> cheb_gradient_param(const GridField& field);

/// (dF/dx, dF/dy) through the inverse-transposed patch Jacobian.
std::pair<GridField, GridField> physical_gradient(const GridField& field, const PatchMap& patch);

/// All D^alpha f, |alpha| <= n, at the nodes of one patch.
///
/// values[node * count + m] holds D^{beta(m)} f with beta the graded-lex basis.
/// Each D^alpha with a1 > 0 is d/dx of D^{alpha - e1}; D^{(0,a2)} is d/dy of D^{(0,a2-1)}.
struct DerivativeTensor {
  unsigned order{0};
  std::size_t nodes{0};
  std::vector<cplx> values;

  std::size_t count() const { return MonomialBasisOrder::count(order); }
  std::span<const cplx> at_node(std::size_t node) const {
    return std::span<const cplx>(values).subspan(node * count(), count());
  }
  cplx at(std::size_t node, MultiIndex a) const {
    return values[node * count() + MonomialBasisOrder::index_of(a)];
  }
};

DerivativeTensor derivative_tensor(const GridField& field, const PatchMap& patch, unsigned n);

}  // namespace greenvol
