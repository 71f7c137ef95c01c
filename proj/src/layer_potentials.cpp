#include "greenvol/layer_potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace greenvol {

namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr int kGradingLevels = 20;
constexpr double kOnBoundaryTol = 1e-12;

double wrap_parameter(double t) {
  double w = std::fmod(t, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

// Accumulates quadrature weights of one target onto the discretization nodes.
class WeightAccumulator {
 public:
  WeightAccumulator(Wavenumber k, const BoundaryDiscretization& bd, const Vec2& target,
                    const CloseEvaluationOptions& opts)
      : k_(k), bd_(bd), target_(target), opts_(opts), lagrange_(bd.gauss_order()) {
    out_.double_layer.assign(bd.node_count(), cplx{});
    out_.single_layer.assign(bd.node_count(), cplx{});
  }

  LayerWeights take() { return std::move(out_); }

  void whole_panel(std::size_t p) {
    const std::size_t g = bd_.gauss_order();
    const auto pts = bd_.points();
    const auto nrm = bd_.normals();
    const auto w = bd_.weights();
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < g; ++q) dist = std::min(dist, norm(target_ - pts[p * g + q]));
    if (dist < kOnBoundaryTol) throw std::domain_error("layer potential: target lies on the boundary");
    if (dist < opts_.distance_factor * bd_.panel_length(p)) {
      const double a = bd_.panel_start(p);
      refine(p, a, a + bd_.panel_width(), 0);
      return;
    }
    for (std::size_t q = 0; q < g; ++q) {
      const std::size_t node = p * g + q;
      const KernelPair kp = green_and_normal_derivative(k_, target_, pts[node], nrm[node]);
      out_.double_layer[node] += kp.double_layer * w[node];
      out_.single_layer[node] += kp.single_layer * w[node];
    }
  }

  // Interval [a, b] expressed in the frame of base panel p.
  void refine(std::size_t p, double a, double b, int depth) {
    const GaussRule& rule = bd_.rule();
    const std::size_t g = rule.nodes.size();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const BoundaryCurve& curve = bd_.curve();

    double dist = std::numeric_limits<double>::infinity();
    double length = 0.0;
    double max_speed = 0.0;
    for (std::size_t q = 0; q < g; ++q) {
      const double t = mid + half * rule.nodes[q];
      const double speed = norm(curve.derivative(t));
      length += rule.weights[q] * half * speed;
      max_speed = std::max(max_speed, speed);
      dist = std::min(dist, norm(target_ - curve.position(t)));
    }
    if (dist < kOnBoundaryTol) throw std::domain_error("layer potential: target lies on the boundary");
    const double spacing = 2.0 * half * max_speed / static_cast<double>(g);
    if (dist < opts_.distance_factor * length && spacing >= opts_.min_spacing) {
      if (depth >= opts_.max_depth) {
        const double w = b - a;
        if (distance_on_interval(a - 4.0 * w, b + 4.0 * w) < kOnBoundaryTol) {
          throw std::domain_error("layer potential: target lies on the boundary");
        }
        throw std::runtime_error("layer potential: refinement depth exceeded near the boundary");
      }
      refine(p, a, mid, depth + 1);
      refine(p, mid, b, depth + 1);
      return;
    }
    plain(p, a, b);
  }

  // Distance from the target to the arc t in [a, b], by Newton on |gamma(t) - r|^2.
  double distance_on_interval(double a, double b) const {
    const BoundaryCurve& curve = bd_.curve();
    double t = 0.5 * (a + b);
    for (int it = 0; it < 30; ++it) {
      const Vec2 e = curve.position(t) - target_;
      const Vec2 d1 = curve.derivative(t);
      const double g = dot(e, d1);
      const double h = dot(d1, d1) + dot(e, curve.second_derivative(t));
      if (h <= 0.0) break;
      t = std::clamp(t - g / h, a, b);
    }
    return norm(curve.position(t) - target_);
  }

  // Gauss rule on [a, b] without distance checks.
  void plain(std::size_t p, double a, double b) {
    const GaussRule& rule = bd_.rule();
    const std::size_t g = rule.nodes.size();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const BoundaryCurve& curve = bd_.curve();
    const double t_start = bd_.panel_start(p);
    for (std::size_t q = 0; q < g; ++q) {
      const double t = mid + half * rule.nodes[q];
      const Vec2 d = curve.derivative(t);
      const double wt = rule.weights[q] * half * norm(d);
      const KernelPair kp =
          green_and_normal_derivative(k_, target_, curve.position(t), outward_normal(d));
      spread(p, 2.0 * (t - t_start) / bd_.panel_width() - 1.0, kp.double_layer * wt,
             kp.single_layer * wt);
    }
  }

  // Adds dl * phi(s) and sl * psi(s) for panel-local coordinate s.
  void spread(std::size_t p, double s, cplx dl, cplx sl) {
    bd_.interpolation_weights(s, lagrange_);
    const std::size_t g = bd_.gauss_order();
    for (std::size_t r = 0; r < g; ++r) {
      out_.double_layer[p * g + r] += dl * lagrange_[r];
      out_.single_layer[p * g + r] += sl * lagrange_[r];
    }
  }

 private:
  Wavenumber k_;
  const BoundaryDiscretization& bd_;
  Vec2 target_;
  CloseEvaluationOptions opts_;
  std::vector<double> lagrange_;
  LayerWeights out_;
};

// Splits the unwrapped parameter range [a, b] at panel boundaries, calling
// fn(panel, lo, hi) with lo/hi shifted into that panel's frame.
template <typename Fn>
void for_each_panel_piece(const BoundaryDiscretization& bd, double a, double b, Fn&& fn) {
  const double h = bd.panel_width();
  const auto panels = static_cast<long long>(bd.panel_count());
  double lo = a;
  while (lo < b) {
    const double mid_guess = lo + 1e-9 * h;
    const long long j = static_cast<long long>(std::floor(mid_guess / h));
    const double hi = std::min(b, static_cast<double>(j + 1) * h);
    long long wrapped = j % panels;
    if (wrapped < 0) wrapped += panels;
    const double shift = static_cast<double>(wrapped - j) * h;
    if (hi > lo) fn(static_cast<std::size_t>(wrapped), lo + shift, hi + shift);
    lo = hi;
  }
}

}  // namespace

BoundaryDiscretization::BoundaryDiscretization(BoundaryCurve curve, std::size_t panels,
                                               std::size_t gauss_order)
    : curve_(std::move(curve)), panels_(panels) {
  if (panels < 4) throw std::invalid_argument("discretize_boundary: need at least 4 panels");
  if (gauss_order < 4) throw std::invalid_argument("discretize_boundary: Gauss order must be >= 4");
  width_ = kTwoPi / static_cast<double>(panels);
  rule_ = gauss_legendre(gauss_order);
  const std::size_t g = gauss_order;

  barycentric_.assign(g, 1.0);
  for (std::size_t q = 0; q < g; ++q) {
    for (std::size_t r = 0; r < g; ++r) {
      if (r != q) barycentric_[q] /= rule_.nodes[q] - rule_.nodes[r];
    }
  }

  const std::size_t total = panels * g;
  params_.resize(total);
  points_.resize(total);
  normals_.resize(total);
  speeds_.resize(total);
  weights_.resize(total);
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = panel_start(p);
    for (std::size_t q = 0; q < g; ++q) {
      const std::size_t idx = p * g + q;
      const double t = a + 0.5 * (rule_.nodes[q] + 1.0) * width_;
      const Vec2 d = curve_.derivative(t);
      params_[idx] = t;
      points_[idx] = curve_.position(t);
      normals_[idx] = outward_normal(d);
      speeds_[idx] = norm(d);
      weights_[idx] = 0.5 * width_ * rule_.weights[q] * speeds_[idx];
    }
  }
}

double BoundaryDiscretization::panel_length(std::size_t p) const {
  const std::size_t g = gauss_order();
  double len = 0.0;
  for (std::size_t q = 0; q < g; ++q) len += weights_[p * g + q];
  return len;
}

std::size_t BoundaryDiscretization::panel_of(double t) const {
  const double w = wrap_parameter(t);
  return std::min(panels_ - 1, static_cast<std::size_t>(w / width_));
}

void BoundaryDiscretization::interpolation_weights(double s, std::span<double> out) const {
  const std::size_t g = gauss_order();
  for (std::size_t q = 0; q < g; ++q) {
    if (s == rule_.nodes[q]) {
      std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(g), 0.0);
      out[q] = 1.0;
      return;
    }
  }
  double denom = 0.0;
  for (std::size_t q = 0; q < g; ++q) {
    out[q] = barycentric_[q] / (s - rule_.nodes[q]);
    denom += out[q];
  }
  for (std::size_t q = 0; q < g; ++q) out[q] /= denom;
}

BoundaryDiscretization discretize_boundary(const BoundaryCurve& curve, std::size_t panels,
                                           std::size_t gauss_order) {
  return BoundaryDiscretization(curve, panels, gauss_order);
}

BoundaryDiscretization reference_discretization(const BoundaryCurve& curve,
                                                std::size_t base_panels) {
  return BoundaryDiscretization(curve, 4 * base_panels, 16);
}

LayerDensityTrace trace_of(const BoundaryDiscretization& bd, const SpatialFunction& u,
                           const std::function<std::pair<cplx, cplx>(const Vec2&)>& grad_u) {
  LayerDensityTrace tr;
  tr.dirichlet.resize(bd.node_count());
  tr.neumann.resize(bd.node_count());
  for (std::size_t j = 0; j < bd.node_count(); ++j) {
    const Vec2& r = bd.points()[j];
    const Vec2& n = bd.normals()[j];
    const auto [ux, uy] = grad_u(r);
    tr.dirichlet[j] = u(r);
    tr.neumann[j] = n.x * ux + n.y * uy;
  }
  return tr;
}

LayerDensityTrace trace_of(const BoundaryDiscretization& bd, const Polynomial2& p) {
  const Polynomial2 px = p.dx();
  const Polynomial2 py = p.dy();
  return trace_of(
      bd, [&](const Vec2& r) { return poly_eval(p, r); },
      [&](const Vec2& r) { return std::pair{poly_eval(px, r), poly_eval(py, r)}; });
}

cplx LayerWeights::apply(const LayerDensityTrace& trace) const {
  if (trace.dirichlet.size() != double_layer.size() || trace.neumann.size() != single_layer.size()) {
    throw std::invalid_argument("LayerWeights::apply: trace length mismatch");
  }
  cplx sum = 0.0;
  for (std::size_t j = 0; j < double_layer.size(); ++j) {
    sum += double_layer[j] * trace.dirichlet[j] - single_layer[j] * trace.neumann[j];
  }
  return sum;
}

LayerWeights layer_weights(Wavenumber k, const BoundaryDiscretization& bd, const Vec2& r,
                           const CloseEvaluationOptions& opts) {
  WeightAccumulator acc(k, bd, r, opts);
  for (std::size_t p = 0; p < bd.panel_count(); ++p) acc.whole_panel(p);
  return acc.take();
}

LayerWeights layer_weights_on_boundary(Wavenumber k, const BoundaryDiscretization& bd, double t0,
                                       const CloseEvaluationOptions& opts) {
  t0 = wrap_parameter(t0);
  const BoundaryCurve& curve = bd.curve();
  const Vec2 target = curve.position(t0);
  const double h = bd.panel_width();
  const double eps = std::ldexp(h, -kGradingLevels);
  WeightAccumulator acc(k, bd, target, opts);

  // Central piece [t0 - eps, t0 + eps]: leading-order kernels times the densities at t0.
  {
    const Vec2 d1 = curve.derivative(t0);
    const Vec2 d2 = curve.second_derivative(t0);
    const double speed = norm(d1);
    const double curvature = cross(d1, d2) / (speed * speed * speed);
    const cplx dl = -curvature / (4.0 * kPi) * 2.0 * eps * speed;
    cplx sl;
    if (k.is_laplace()) {
      sl = -speed / (2.0 * kPi) * 2.0 * eps * (std::log(speed * eps) - 1.0);
    } else {
      const double kv = k.value();
      sl = speed * (cplx(0.0, 0.5 * eps) -
                    (2.0 * eps * (std::log(0.5 * kv * speed * eps) - 1.0) +
                     2.0 * eps * kEulerGamma) /
                        (2.0 * kPi));
    }
    const std::size_t p = bd.panel_of(t0);
    acc.spread(p, 2.0 * (t0 - bd.panel_start(p)) / h - 1.0, dl, sl);
  }

  // Geometrically graded rings out to one panel width on each side.
  for (int m = 0; m < kGradingLevels; ++m) {
    const double lo = std::ldexp(eps, m);
    const double hi = std::ldexp(eps, m + 1);
    auto add = [&](std::size_t p, double a, double b) { acc.plain(p, a, b); };
    for_each_panel_piece(bd, t0 + lo, t0 + hi, add);
    for_each_panel_piece(bd, t0 - hi, t0 - lo, add);
  }

  // Remainder of the curve with distance-driven refinement.
  for_each_panel_piece(bd, t0 + h, t0 + kTwoPi - h,
                       [&](std::size_t p, double a, double b) { acc.refine(p, a, b, 0); });
  return acc.take();
}

cplx layer_combo(Wavenumber k, const BoundaryDiscretization& bd, const LayerDensityTrace& trace,
                 const Vec2& r, const CloseEvaluationOptions& opts) {
  return layer_weights(k, bd, r, opts).apply(trace);
}

cplx layer_combo_on_boundary(Wavenumber k, const BoundaryDiscretization& bd,
                             const LayerDensityTrace& trace, double t0) {
  return layer_weights_on_boundary(k, bd, t0).apply(trace);
}

double kappa(Location loc) {
  switch (loc) {
    case Location::interior:
      return 1.0;
    case Location::boundary:
      return 0.5;
    case Location::exterior:
      return 0.0;
  }
  return 0.0;
}

LayerWeights layer_weights_at(Wavenumber k, const BoundaryDiscretization& bd, const Vec2& r,
                              const ClosestPoint& where) {
  if (where.location == Location::boundary) return layer_weights_on_boundary(k, bd, where.parameter);
  return layer_weights(k, bd, r);
}

std::vector<cplx> s_beta_row(const BoundaryDiscretization& bd, const SolutionFamily& family,
                             std::span<const LayerDensityTrace> traces, const Vec2& r,
                             const ClosestPoint& where) {
  if (traces.size() != family.size()) throw std::invalid_argument("s_beta_row: trace count mismatch");
  const LayerWeights w = layer_weights_at(family.wavenumber(), bd, r, where);
  const double kap = kappa(where.location);
  std::vector<cplx> row(family.size());
  for (std::size_t m = 0; m < family.size(); ++m) {
    row[m] = w.apply(traces[m]);
    if (kap != 0.0) row[m] += kap * poly_eval(family.solution(m), r);
  }
  return row;
}

std::vector<cplx> s_beta_column(Wavenumber k, const BoundaryDiscretization& bd,
                                const DomainMesh& mesh, MultiIndex beta) {
  const Polynomial2& p = poly_solution(beta, k);
  const LayerDensityTrace tr = trace_of(bd, p);
  std::vector<cplx> col(mesh.node_count());
  for (std::size_t l = 0; l < mesh.node_count(); ++l) {
    const Vec2& r = mesh.node(l);
    const ClosestPoint where = closest_point_on_domain(mesh, r);
    col[l] = layer_weights_at(k, bd, r, where).apply(tr) + kappa(where.location) * poly_eval(p, r);
  }
  return col;
}

cplx reference_potential(Wavenumber k, const BoundaryDiscretization& bd,
                         const LayerDensityTrace& u_trace, const SpatialFunction& u,
                         const Vec2& r, const ClosestPoint& where) {
  const double kap = kappa(where.location);
  cplx v = -layer_weights_at(k, bd, r, where).apply(u_trace);
  if (kap != 0.0) v -= kap * u(r);
  return v;
}

}  // namespace greenvol
