#include "greenvol/spectral_diff.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace greenvol {

namespace {

// DCT-II and DST-III plans of one length, executed on their own buffers.
class LineTransforms {
 public:
  explicit LineTransforms(std::size_t n)
      : n_(n),
        in_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
        out_(static_cast<double*>(fftw_malloc(sizeof(double) * n))) {
    const int len = static_cast<int>(n);
    dct_ = fftw_plan_r2r_1d(len, in_, out_, FFTW_REDFT10, FFTW_ESTIMATE);
    dst_ = fftw_plan_r2r_1d(len, in_, out_, FFTW_RODFT01, FFTW_ESTIMATE);
    inv_sin_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      inv_sin_[j] = 1.0 / std::sin((2.0 * static_cast<double>(j) + 1.0) * kPi /
                                   (2.0 * static_cast<double>(n)));
    }
  }
  LineTransforms(const LineTransforms&) = delete;
  LineTransforms& operator=(const LineTransforms&) = delete;
  ~LineTransforms() {
    fftw_destroy_plan(dct_);
    fftw_destroy_plan(dst_);
    fftw_free(in_);
    fftw_free(out_);
  }

  // Samples v_j = p(cos theta_j) in, dp/dt at the same nodes out.
  void differentiate(const double* v, std::size_t stride, double* dv, std::size_t dv_stride) {
    const double dn = static_cast<double>(n_);
    for (std::size_t j = 0; j < n_; ++j) in_[j] = v[j * stride];
    fftw_execute(dct_);
    // Cosine coefficients c_m = Y_m / N (m >= 1); the sine series sum_m m c_m sin(m theta)
    // is a DST-III with X_{m-1} = m c_m / 2 and X_{N-1} = 0.
    for (std::size_t m = 1; m < n_; ++m) in_[m - 1] = static_cast<double>(m) * out_[m] / (2.0 * dn);
    in_[n_ - 1] = 0.0;
    fftw_execute(dst_);
    for (std::size_t j = 0; j < n_; ++j) dv[j * dv_stride] = out_[j] * inv_sin_[j];
  }

 private:
  std::size_t n_;
  double* in_;
  double* out_;
  fftw_plan dct_;
  fftw_plan dst_;
  std::vector<double> inv_sin_;
};

std::mutex& transforms_mutex() {
  static std::mutex m;
  return m;
}

LineTransforms& transforms_for(std::size_t n) {
  static std::map<std::size_t, std::unique_ptr<LineTransforms>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<LineTransforms>(n);
  return *slot;
}

}  // namespace

GridField sample_patch(const DomainMesh& mesh, std::size_t p, const SpatialFunction& f) {
  const std::size_t n = mesh.order();
  GridField field(p, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) field.at(i, j) = f(mesh.node(mesh.global_index(p, i, j)));
  }
  return field;
}

std::pair<GridField, GridField> cheb_gradient_param(const GridField& field) {
  const std::size_t n = field.n;
  if (n < 2) throw std::invalid_argument("cheb_gradient_param: N must be >= 2");
  if (field.values.size() != n * n) throw std::invalid_argument("cheb_gradient_param: bad field");

  std::vector<double> re(n * n), im(n * n);
  for (std::size_t k = 0; k < n * n; ++k) {
    re[k] = field.values[k].real();
    im[k] = field.values[k].imag();
  }
  std::vector<double> d1_re(n * n), d1_im(n * n), d2_re(n * n), d2_im(n * n);

  {
    std::lock_guard lock(transforms_mutex());
    LineTransforms& tr = transforms_for(n);
    for (std::size_t j = 0; j < n; ++j) {  // along xi1: index i, stride n
      tr.differentiate(re.data() + j, n, d1_re.data() + j, n);
      tr.differentiate(im.data() + j, n, d1_im.data() + j, n);
    }
    for (std::size_t i = 0; i < n; ++i) {  // along xi2: contiguous
      tr.differentiate(re.data() + i * n, 1, d2_re.data() + i * n, 1);
      tr.differentiate(im.data() + i * n, 1, d2_im.data() + i * n, 1);
    }
  }

  GridField g1(field.patch, n), g2(field.patch, n);
  for (std::size_t k = 0; k < n * n; ++k) {
    g1.values[k] = {d1_re[k], d1_im[k]};
    g2.values[k] = {d2_re[k], d2_im[k]};
  }
  return {std::move(g1), std::move(g2)};
}

std::pair<GridField, GridField> physical_gradient(const GridField& field, const PatchMap& patch) {
  auto [g1, g2] = cheb_gradient_param(field);
  const std::vector<double> t = cheb_nodes(field.n);
  GridField gx(field.patch, field.n), gy(field.patch, field.n);
  for (std::size_t i = 0; i < field.n; ++i) {
    for (std::size_t j = 0; j < field.n; ++j) {
      const Mat2 jac = patch.jacobian({t[i], t[j]});
      if (jac.det() == 0.0) throw std::domain_error("physical_gradient: singular Jacobian");
      // grad_xi = J^T grad_r
      const Mat2 inv_t = jac.inverse().transpose();
      const cplx a = g1.at(i, j);
      const cplx b = g2.at(i, j);
      gx.at(i, j) = inv_t.a11 * a + inv_t.a12 * b;
      gy.at(i, j) = inv_t.a21 * a + inv_t.a22 * b;
    }
  }
  return {std::move(gx), std::move(gy)};
}

DerivativeTensor derivative_tensor(const GridField& field, const PatchMap& patch, unsigned n) {
  const MonomialBasisOrder basis(n);
  std::vector<GridField> by_index(basis.size());
  by_index[0] = field;
  for (std::size_t m = 0; m < basis.size(); ++m) {
    const MultiIndex a = basis.at(m);
    if (a.order() == n) break;
    auto [gx, gy] = physical_gradient(by_index[m], patch);
    by_index[MonomialBasisOrder::index_of({a.a1 + 1, a.a2})] = std::move(gx);
    if (a.a1 == 0) by_index[MonomialBasisOrder::index_of({0, a.a2 + 1})] = std::move(gy);
  }

  DerivativeTensor out;
  out.order = n;
  out.nodes = field.n * field.n;
  out.values.resize(out.nodes * basis.size());
  for (std::size_t node = 0; node < out.nodes; ++node) {
    for (std::size_t m = 0; m < basis.size(); ++m) {
      out.values[node * basis.size() + m] = by_index[m].values[node];
    }
  }
  return out;
}

}  // namespace greenvol
