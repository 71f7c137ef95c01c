#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "greenvol/geometry.hpp"
#include "greenvol/kernels.hpp"
#include "greenvol/layer_potentials.hpp"
#include "greenvol/poly_solutions.hpp"
#include "greenvol/spectral_diff.hpp"

namespace greenvol {

/// Source samples f(r_l) and per-node derivative tensors up to `order`,
/// both in global node order.
struct SourceData {
  unsigned order{0};
  std::vector<cplx> values;
  std::vector<DerivativeTensor> patches;  // one tensor per patch

  std::span<const cplx> derivatives(std::size_t node, std::size_t nodes_per_patch) const {
    return patches[node / nodes_per_patch].at_node(node % nodes_per_patch);
  }
};

/// Samples f and differentiates it spectrally on every patch.
SourceData make_source_data(const DomainMesh& mesh, const SpatialFunction& f, unsigned n);

/// Source data with derivatives supplied analytically: deriv(r, alpha) = D^alpha f(r).
SourceData make_source_data_exact(const DomainMesh& mesh, const SpatialFunction& f,
                                  const std::function<cplx(const Vec2&, MultiIndex)>& deriv,
                                  unsigned n);

/// Row-major dense complex matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const cplx> row(std::size_t i) const {
    return std::span<const cplx>(data_).subspan(i * cols_, cols_);
  }
  std::span<const cplx> data() const { return data_; }

 private:
  std::size_t rows_{0};
  std::size_t cols_{0};
  std::vector<cplx> data_;
};

/// [V f]_l = sum_{l' != l} G(r_l, r_l') w_l' f_l'.
std::vector<cplx> apply_V(const DomainMesh& mesh, Wavenumber k, std::span<const cplx> f);

/// Precomputed S and W (N_tot x N_ind) for one mesh, wavenumber and maximal order.
struct VolumeOperator {
  const DomainMesh* mesh{nullptr};
  Wavenumber k{0.0};
  unsigned n{0};
  DenseMatrix S;
  DenseMatrix W;
  std::shared_ptr<const BoundaryDiscretization> boundary;
};

inline constexpr std::size_t kDefaultBoundaryPanels = 64;
inline constexpr std::size_t kDefaultBoundaryGauss = 16;

/// Builds S and W. The mesh must outlive the operator.
VolumeOperator build_operator(const DomainMesh& mesh, Wavenumber k, unsigned n,
                              std::size_t boundary_panels = kDefaultBoundaryPanels);

/// T (N_ind x N_tot): column l holds T_beta(r_l) for the expansion at r_l.
DenseMatrix assemble_T(const DomainMesh& mesh, const SourceData& source, unsigned n);

/// V f - (S + W) T f at every grid node, using the first N_ind(n) columns; n <= op.n.
std::vector<cplx> evaluate(const VolumeOperator& op, const SourceData& source, unsigned n);
std::vector<cplx> evaluate(const VolumeOperator& op, const SourceData& source);

/// Potential at arbitrary points. Grid nodes reuse evaluate(); far exterior
/// points use the plain sum; all others are regularized at the grid node nearest
/// to their closest point in the closed domain.
std::vector<cplx> evaluate_at_points(const VolumeOperator& op, const SourceData& source,
                                     std::span<const Vec2> targets, unsigned n);

/// Exterior targets farther than this from the boundary use the plain sum.
double far_field_distance(const DomainMesh& mesh);

/// Header: uint64 rows, uint64 cols, float64 k, uint64 n; then row-major (re, im) float64 pairs,
/// all little-endian.
void write_matrix_binary(const DenseMatrix& m, double k, unsigned n, std::ostream& out);
DenseMatrix read_matrix_binary(std::istream& in, double* k = nullptr, unsigned* n = nullptr);

}  // namespace greenvol
