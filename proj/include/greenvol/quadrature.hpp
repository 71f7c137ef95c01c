#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "greenvol/types.hpp"

namespace greenvol {

class PatchMap;
class DomainMesh;

/// Fejer's first rule on the zeros of T_N.
///
/// Nodes are ordered as t_j = cos(theta_j), theta_j = (2j-1)pi/(2N), j = 1..N,
/// i.e. decreasing in t. All weights are positive and sum to 2.
struct ChebRule {
  std::size_t n{0};
  std::vector<double> nodes;
  std::vector<double> angles;
  std::vector<double> weights;
};

ChebRule fejer_rule(std::size_t n);

/// Chebyshev zero locations only (no weights), same ordering as fejer_rule.
std::vector<double> cheb_nodes(std::size_t n);

/// Gauss-Legendre rule on [-1,1], nodes ascending.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(std::size_t order);

using ParamFunction = std::function<cplx(const ParamPoint&)>;
using SpatialFunction = std::function<cplx(const Vec2&)>;

/// Sum_{i,j} F(t_i,t_j) |det J(t_i,t_j)| w_i w_j.
cplx integrate_patch(const ParamFunction& f, const PatchMap& patch, const ChebRule& rule);

/// Sum of integrate_patch over every patch of the mesh, with F composed with the patch map.
cplx integrate_domain(const SpatialFunction& f, const DomainMesh& mesh);

}  // namespace greenvol
