#include "greenvol/volume_potential.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace greenvol {

namespace {

inline cplx volume_kernel(Wavenumber k, const Vec2& r, const Vec2& rp) {
  if (k.is_laplace()) return -std::log(norm2(r - rp)) / (4.0 * kPi);
  return cplx(0.0, 0.25) * hankel01(k.value() * norm(r - rp)).h0;
}

cplx punctured_row_sum(const DomainMesh& mesh, Wavenumber k, std::span<const cplx> f,
                       std::size_t l) {
  const auto nodes = mesh.nodes();
  const auto w = mesh.weights();
  const Vec2 r = nodes[l];
  cplx sum = 0.0;
  for (std::size_t lp = 0; lp < nodes.size(); ++lp) {
    if (lp == l) continue;
    sum += (volume_kernel(k, r, nodes[lp]) * w[lp]) * f[lp];
  }
  return sum;
}

std::vector<double> monomial_values(const Vec2& r, const MonomialBasisOrder& basis) {
  const unsigned n = basis.order();
  std::vector<double> px(n + 1, 1.0), py(n + 1, 1.0);
  for (unsigned i = 1; i <= n; ++i) {
    px[i] = px[i - 1] * r.x;
    py[i] = py[i - 1] * r.y;
  }
  std::vector<double> q(basis.size());
  for (std::size_t m = 0; m < basis.size(); ++m) q[m] = px[basis.at(m).a1] * py[basis.at(m).a2];
  return q;
}

void check_source(const VolumeOperator& op, const SourceData& source, unsigned n) {
  if (op.mesh == nullptr) throw std::invalid_argument("volume operator has no mesh");
  if (n > op.n) throw std::invalid_argument("evaluate: order exceeds the operator's order");
  if (source.order < n) throw std::invalid_argument("evaluate: source derivatives missing");
  if (source.values.size() != op.mesh->node_count() ||
      source.patches.size() != op.mesh->patch_count()) {
    throw std::invalid_argument("evaluate: source does not match the mesh");
  }
}

cplx node_value(const VolumeOperator& op, const SourceData& source, std::size_t l, unsigned n) {
  const DomainMesh& mesh = *op.mesh;
  const std::size_t per_patch = mesh.order() * mesh.order();
  const std::vector<cplx> t = taylor_coeffs(source.derivatives(l, per_patch), mesh.node(l), n);
  cplx v = punctured_row_sum(mesh, op.k, source.values, l);
  for (std::size_t m = 0; m < t.size(); ++m) v -= (op.S(l, m) + op.W(l, m)) * t[m];
  return v;
}

void write_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(bytes, 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw std::runtime_error("read_matrix_binary: truncated input");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

void write_f64(std::ostream& out, double d) { write_u64(out, std::bit_cast<std::uint64_t>(d)); }
double read_f64(std::istream& in) { return std::bit_cast<double>(read_u64(in)); }

}  // namespace

SourceData make_source_data(const DomainMesh& mesh, const SpatialFunction& f, unsigned n) {
  if (n > kMaxOrder) throw std::invalid_argument("make_source_data: order exceeds 12");
  SourceData src;
  src.order = n;
  src.values.resize(mesh.node_count());
  const std::size_t per_patch = mesh.order() * mesh.order();
  for (std::size_t p = 0; p < mesh.patch_count(); ++p) {
    const GridField field = sample_patch(mesh, p, f);
    for (std::size_t q = 0; q < per_patch; ++q) src.values[p * per_patch + q] = field.values[q];
    src.patches.push_back(derivative_tensor(field, mesh.patch(p), n));
  }
  return src;
}

SourceData make_source_data_exact(const DomainMesh& mesh, const SpatialFunction& f,
                                  const std::function<cplx(const Vec2&, MultiIndex)>& deriv,
                                  unsigned n) {
  if (n > kMaxOrder) throw std::invalid_argument("make_source_data_exact: order exceeds 12");
  const MonomialBasisOrder basis(n);
  const std::size_t per_patch = mesh.order() * mesh.order();
  SourceData src;
  src.order = n;
  src.values.resize(mesh.node_count());
  for (std::size_t p = 0; p < mesh.patch_count(); ++p) {
    DerivativeTensor tensor;
    tensor.order = n;
    tensor.nodes = per_patch;
    tensor.values.resize(per_patch * basis.size());
    for (std::size_t q = 0; q < per_patch; ++q) {
      const Vec2& r = mesh.node(p * per_patch + q);
      src.values[p * per_patch + q] = f(r);
      for (std::size_t m = 0; m < basis.size(); ++m) {
        tensor.values[q * basis.size() + m] = deriv(r, basis.at(m));
      }
    }
    src.patches.push_back(std::move(tensor));
  }
  return src;
}

std::vector<cplx> apply_V(const DomainMesh& mesh, Wavenumber k, std::span<const cplx> f) {
  if (f.size() != mesh.node_count()) throw std::invalid_argument("apply_V: length mismatch");
  std::vector<cplx> out(f.size());
  for (std::size_t l = 0; l < f.size(); ++l) out[l] = punctured_row_sum(mesh, k, f, l);
  return out;
}

VolumeOperator build_operator(const DomainMesh& mesh, Wavenumber k, unsigned n,
                              std::size_t boundary_panels) {
  if (n > kMaxOrder) throw std::invalid_argument("build_operator: order exceeds 12");
  VolumeOperator op;
  op.mesh = &mesh;
  op.k = k;
  op.n = n;
  op.boundary = std::make_shared<const BoundaryDiscretization>(
      discretize_boundary(mesh.boundary(), boundary_panels, kDefaultBoundaryGauss));

  const SolutionFamily family(k, n);
  const std::size_t cols = family.size();
  const std::size_t rows = mesh.node_count();
  std::vector<LayerDensityTrace> traces;
  traces.reserve(cols);
  for (std::size_t m = 0; m < cols; ++m) traces.push_back(trace_of(*op.boundary, family.solution(m)));

  op.S = DenseMatrix(rows, cols);
  for (std::size_t l = 0; l < rows; ++l) {
    const Vec2& r = mesh.node(l);
    const std::vector<cplx> row =
        s_beta_row(*op.boundary, family, traces, r, closest_point_on_domain(mesh, r));
    for (std::size_t m = 0; m < cols; ++m) op.S(l, m) = row[m];
  }

  std::vector<std::vector<double>> q(rows);
  for (std::size_t l = 0; l < rows; ++l) q[l] = monomial_values(mesh.node(l), family.basis());
  op.W = DenseMatrix(rows, cols);
  const auto nodes = mesh.nodes();
  const auto w = mesh.weights();
  std::vector<cplx> acc(cols);
  for (std::size_t l = 0; l < rows; ++l) {
    std::fill(acc.begin(), acc.end(), cplx{});
    for (std::size_t lp = 0; lp < rows; ++lp) {
      if (lp == l) continue;
      const cplx g = volume_kernel(k, nodes[l], nodes[lp]) * w[lp];
      for (std::size_t m = 0; m < cols; ++m) acc[m] += g * q[lp][m];
    }
    for (std::size_t m = 0; m < cols; ++m) op.W(l, m) = acc[m];
  }
  return op;
}

DenseMatrix assemble_T(const DomainMesh& mesh, const SourceData& source, unsigned n) {
  if (source.order < n) throw std::invalid_argument("assemble_T: source derivatives missing");
  const std::size_t per_patch = mesh.order() * mesh.order();
  DenseMatrix t(MonomialBasisOrder::count(n), mesh.node_count());
  for (std::size_t l = 0; l < mesh.node_count(); ++l) {
    const std::vector<cplx> c = taylor_coeffs(source.derivatives(l, per_patch), mesh.node(l), n);
    for (std::size_t m = 0; m < c.size(); ++m) t(m, l) = c[m];
  }
  return t;
}

std::vector<cplx> evaluate(const VolumeOperator& op, const SourceData& source, unsigned n) {
  check_source(op, source, n);
  std::vector<cplx> out(op.mesh->node_count());
  for (std::size_t l = 0; l < out.size(); ++l) out[l] = node_value(op, source, l, n);
  return out;
}

std::vector<cplx> evaluate(const VolumeOperator& op, const SourceData& source) {
  return evaluate(op, source, op.n);
}

double far_field_distance(const DomainMesh& mesh) {
  constexpr std::size_t kSamples = 1024;
  const BoundaryCurve& curve = mesh.boundary();
  double length = 0.0;
  for (std::size_t i = 0; i < kSamples; ++i) {
    length += norm(curve.derivative(2.0 * kPi * static_cast<double>(i) / kSamples));
  }
  length *= 2.0 * kPi / kSamples;
  return length / (4.0 * static_cast<double>(mesh.subdivisions()));
}

std::vector<cplx> evaluate_at_points(const VolumeOperator& op, const SourceData& source,
                                     std::span<const Vec2> targets, unsigned n) {
  check_source(op, source, n);
  const DomainMesh& mesh = *op.mesh;
  const auto nodes = mesh.nodes();
  const auto w = mesh.weights();
  const std::size_t per_patch = mesh.order() * mesh.order();
  const double far = far_field_distance(mesh);
  const SolutionFamily family(op.k, n);
  std::vector<LayerDensityTrace> traces;
  for (std::size_t m = 0; m < family.size(); ++m) {
    traces.push_back(trace_of(*op.boundary, family.solution(m)));
  }

  std::vector<cplx> out(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const Vec2 r = targets[t];
    std::size_t hit = nodes.size();
    for (std::size_t l = 0; l < nodes.size(); ++l) {
      if (nodes[l].x == r.x && nodes[l].y == r.y) {
        hit = l;
        break;
      }
    }
    if (hit < nodes.size()) {
      out[t] = node_value(op, source, hit, n);
      continue;
    }

    const ClosestPoint where = closest_point_on_domain(mesh, r);
    if (where.location == Location::exterior && where.distance > far) {
      cplx sum = 0.0;
      for (std::size_t lp = 0; lp < nodes.size(); ++lp) {
        sum += (volume_kernel(op.k, r, nodes[lp]) * w[lp]) * source.values[lp];
      }
      out[t] = sum;
      continue;
    }

    std::size_t l0 = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < nodes.size(); ++l) {
      const double d = norm2(nodes[l] - where.point);
      if (d < best) {
        best = d;
        l0 = l;
      }
    }
    const Vec2 r0 = nodes[l0];
    const std::vector<cplx> tc = taylor_coeffs(source.derivatives(l0, per_patch), r0, n);
    const Polynomial2 fn = assemble_interpolant(tc, n);
    cplx sum = 0.0;
    for (std::size_t lp = 0; lp < nodes.size(); ++lp) {
      const cplx remainder = source.values[lp] - poly_eval(fn, nodes[lp]);
      sum += (volume_kernel(op.k, r, nodes[lp]) * w[lp]) * remainder;
    }
    const std::vector<cplx> s = s_beta_row(*op.boundary, family, traces, r, where);
    for (std::size_t m = 0; m < tc.size(); ++m) sum -= tc[m] * s[m];
    out[t] = sum;
  }
  return out;
}

void write_matrix_binary(const DenseMatrix& m, double k, unsigned n, std::ostream& out) {
  write_u64(out, m.rows());
  write_u64(out, m.cols());
  write_f64(out, k);
  write_u64(out, n);
  for (const cplx& v : m.data()) {
    write_f64(out, v.real());
    write_f64(out, v.imag());
  }
  if (!out) throw std::runtime_error("write_matrix_binary: write failed");
}

DenseMatrix read_matrix_binary(std::istream& in, double* k, unsigned* n) {
  const std::uint64_t rows = read_u64(in);
  const std::uint64_t cols = read_u64(in);
  const double kv = read_f64(in);
  const std::uint64_t nv = read_u64(in);
  if (k != nullptr) *k = kv;
  if (n != nullptr) *n = static_cast<unsigned>(nv);
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double re = read_f64(in);
      const double im = read_f64(in);
      m(i, j) = {re, im};
    }
  }
  return m;
}

}  // namespace greenvol
