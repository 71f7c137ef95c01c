#include "greenvol/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace greenvol {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

BoundaryCurve make_disk_curve() {
  BoundaryCurve c;
  c.name = "disk";
  c.position = [](double t) { return Vec2{std::cos(t), std::sin(t)}; };
  c.derivative = [](double t) { return Vec2{-std::sin(t), std::cos(t)}; };
  c.second_derivative = [](double t) { return Vec2{-std::cos(t), -std::sin(t)}; };
  return c;
}

BoundaryCurve make_kite_curve() {
  BoundaryCurve c;
  c.name = "kite";
  c.position = [](double t) {
    return Vec2{std::cos(t) + 0.65 * std::cos(2.0 * t) - 0.65, 1.5 * std::sin(t)};
  };
  c.derivative = [](double t) {
    return Vec2{-std::sin(t) - 1.3 * std::sin(2.0 * t), 1.5 * std::cos(t)};
  };
  c.second_derivative = [](double t) {
    return Vec2{-std::cos(t) - 2.6 * std::cos(2.0 * t), -1.5 * std::sin(t)};
  };
  return c;
}

// r(t) (sin t, -cos t) with r(t) = 1 + 0.3 cos(4t + 2 sin t).
BoundaryCurve make_jellyfish_curve() {
  struct Radial {
    double r, dr, ddr;
  };
  auto radial = [](double t) {
    const double phi = 4.0 * t + 2.0 * std::sin(t);
    const double dphi = 4.0 + 2.0 * std::cos(t);
    const double ddphi = -2.0 * std::sin(t);
    return Radial{1.0 + 0.3 * std::cos(phi), -0.3 * std::sin(phi) * dphi,
                  -0.3 * (std::cos(phi) * dphi * dphi + std::sin(phi) * ddphi)};
  };
  BoundaryCurve c;
  c.name = "jellyfish";
  c.position = [radial](double t) {
    const double r = radial(t).r;
    return Vec2{r * std::sin(t), -r * std::cos(t)};
  };
  c.derivative = [radial](double t) {
    const Radial q = radial(t);
    const Vec2 e{std::sin(t), -std::cos(t)};
    const Vec2 de{std::cos(t), std::sin(t)};
    return q.dr * e + q.r * de;
  };
  c.second_derivative = [radial](double t) {
    const Radial q = radial(t);
    const Vec2 e{std::sin(t), -std::cos(t)};
    const Vec2 de{std::cos(t), std::sin(t)};
    return (q.ddr - q.r) * e + 2.0 * q.dr * de;
  };
  return c;
}

struct Layout {
  Vec2 center;
  double shrink;
};

// Central quadrilateral corners sit on rays from `center` to the boundary
// points gamma(t_k), t_k = -pi/4 + k pi/2, pulled in by `shrink`.
Layout layout_for(std::string_view name) {
  if (name == "disk") return {{0.0, 0.0}, 0.5};
  if (name == "kite") return {{-0.3, 0.0}, 0.4};
  if (name == "jellyfish") return {{0.0, 0.0}, 0.4};
  throw std::invalid_argument("unknown domain: " + std::string(name));
}

std::vector<PatchMap> base_patches(const BoundaryCurve& curve, const Layout& layout) {
  std::array<double, 5> t{};
  std::array<Vec2, 4> q{};
  for (std::size_t k = 0; k < 5; ++k) t[k] = -0.25 * kPi + 0.5 * kPi * static_cast<double>(k);
  for (std::size_t k = 0; k < 4; ++k) {
    q[k] = layout.center + layout.shrink * (curve.position(t[k]) - layout.center);
  }

  std::vector<PatchMap> patches;
  patches.reserve(5);
  // q0 lower right, q1 upper right, q2 upper left, q3 lower left.
  patches.push_back(transfinite_map({segment_edge(q[3], q[0]), segment_edge(q[2], q[1]),
                                     segment_edge(q[3], q[2]), segment_edge(q[0], q[1])}));
  for (std::size_t k = 0; k < 4; ++k) {
    const Vec2 inner0 = q[k];
    const Vec2 inner1 = q[(k + 1) % 4];
    const Vec2 outer0 = curve.position(t[k]);
    const Vec2 outer1 = curve.position(t[k + 1]);
    // xi1 runs outward, xi2 counterclockwise: positive orientation.
    patches.push_back(transfinite_map({segment_edge(inner0, outer0), segment_edge(inner1, outer1),
                                       segment_edge(inner0, inner1),
                                       arc_edge(curve, t[k], t[k + 1])}));
  }
  return patches;
}

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

}  // namespace

BoundaryCurve builtin_curve(std::string_view name) {
  if (name == "disk") return make_disk_curve();
  if (name == "kite") return make_kite_curve();
  if (name == "jellyfish") return make_jellyfish_curve();
  throw std::invalid_argument("unknown domain: " + std::string(name));
}

EdgeCurve segment_edge(Vec2 from, Vec2 to) {
  const Vec2 half = 0.5 * (to - from);
  const Vec2 mid = 0.5 * (to + from);
  return {[mid, half](double s) { return mid + s * half; }, [half](double) { return half; }};
}

EdgeCurve arc_edge(const BoundaryCurve& curve, double t_begin, double t_end) {
  const double mid = 0.5 * (t_begin + t_end);
  const double half = 0.5 * (t_end - t_begin);
  return {[curve, mid, half](double s) { return curve.position(mid + half * s); },
          [curve, mid, half](double s) { return half * curve.derivative(mid + half * s); }};
}

PatchMap PatchMap::analytic(MapFn map, JacFn jacobian) {
  return PatchMap(std::move(map), std::move(jacobian), PatchKind::analytic);
}

PatchMap PatchMap::subpatch(Vec2 offset, double scale) const {
  auto parent = std::make_shared<const PatchMap>(*this);
  auto to_parent = [offset, scale](const ParamPoint& xi) {
    return ParamPoint(offset.x + scale * xi.xi1(), offset.y + scale * xi.xi2());
  };
  return PatchMap([parent, to_parent](const ParamPoint& xi) { return parent->map(to_parent(xi)); },
                  [parent, to_parent, scale](const ParamPoint& xi) {
                    return parent->jacobian(to_parent(xi)).scaled(scale);
                  },
                  PatchKind::subpatch);
}

std::array<Vec2, 4> PatchMap::corners() const {
  return {map({-1.0, -1.0}), map({1.0, -1.0}), map({1.0, 1.0}), map({-1.0, 1.0})};
}

PatchMap transfinite_map(const TransfiniteEdges& e) {
  constexpr double tol = 1e-12;
  const Vec2 c00 = e.bottom.point(-1.0);
  const Vec2 c10 = e.bottom.point(1.0);
  const Vec2 c01 = e.top.point(-1.0);
  const Vec2 c11 = e.top.point(1.0);
  if (norm(c00 - e.left.point(-1.0)) > tol || norm(c10 - e.right.point(-1.0)) > tol ||
      norm(c01 - e.left.point(1.0)) > tol || norm(c11 - e.right.point(1.0)) > tol) {
    throw std::invalid_argument("transfinite_map: edge corners do not match");
  }

  auto edges = std::make_shared<const TransfiniteEdges>(e);
  auto map = [edges, c00, c10, c01, c11](const ParamPoint& xi) {
    const double u = 0.5 * (1.0 + xi.xi1());
    const double v = 0.5 * (1.0 + xi.xi2());
    const Vec2 blend = (1.0 - v) * edges->bottom.point(xi.xi1()) + v * edges->top.point(xi.xi1()) +
                       (1.0 - u) * edges->left.point(xi.xi2()) + u * edges->right.point(xi.xi2());
    const Vec2 bilinear =
        (1.0 - u) * (1.0 - v) * c00 + u * (1.0 - v) * c10 + (1.0 - u) * v * c01 + u * v * c11;
    return blend - bilinear;
  };
  auto jac = [edges, c00, c10, c01, c11](const ParamPoint& xi) {
    const double u = 0.5 * (1.0 + xi.xi1());
    const double v = 0.5 * (1.0 + xi.xi2());
    // du/dxi1 = dv/dxi2 = 1/2
    const Vec2 d1 = (1.0 - v) * edges->bottom.tangent(xi.xi1()) + v * edges->top.tangent(xi.xi1()) +
                    0.5 * (edges->right.point(xi.xi2()) - edges->left.point(xi.xi2())) -
                    0.5 * ((1.0 - v) * (c10 - c00) + v * (c11 - c01));
    const Vec2 d2 = 0.5 * (edges->top.point(xi.xi1()) - edges->bottom.point(xi.xi1())) +
                    (1.0 - u) * edges->left.tangent(xi.xi2()) + u * edges->right.tangent(xi.xi2()) -
                    0.5 * ((1.0 - u) * (c01 - c00) + u * (c11 - c10));
    return Mat2{d1.x, d2.x, d1.y, d2.y};
  };
  return PatchMap(std::move(map), std::move(jac), PatchKind::transfinite);
}

std::vector<PatchMap> subdivide(std::span<const PatchMap> patches, std::size_t d) {
  if (d < 1) throw std::invalid_argument("subdivide: D must be >= 1");
  std::vector<PatchMap> out;
  out.reserve(patches.size() * d * d);
  const double scale = 1.0 / static_cast<double>(d);
  for (const PatchMap& p : patches) {
    if (d == 1) {
      out.push_back(p);
      continue;
    }
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) {
        const Vec2 offset{-1.0 + (2.0 * static_cast<double>(a) + 1.0) * scale,
                          -1.0 + (2.0 * static_cast<double>(b) + 1.0) * scale};
        out.push_back(p.subpatch(offset, scale));
      }
    }
  }
  return out;
}

const char* to_string(Location loc) {
  switch (loc) {
    case Location::interior:
      return "interior";
    case Location::boundary:
      return "boundary";
    case Location::exterior:
      return "exterior";
  }
  return "unknown";
}

BoundaryLocator::BoundaryLocator(BoundaryCurve curve) : curve_(std::move(curve)) {
  samples_.reserve(kSamples);
  for (std::size_t s = 0; s < kSamples; ++s) {
    samples_.push_back(curve_.position(kTwoPi * static_cast<double>(s) / kSamples));
  }
}

int BoundaryLocator::winding_number(const Vec2& r) const {
  double total = 0.0;
  for (std::size_t s = 0; s < kSamples; ++s) {
    const Vec2 a = samples_[s] - r;
    const Vec2 b = samples_[(s + 1) % kSamples] - r;
    total += std::atan2(cross(a, b), dot(a, b));
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

ClosestPoint BoundaryLocator::closest(const Vec2& r) const {
  std::size_t best = 0;
  double best_d2 = norm2(samples_[0] - r);
  for (std::size_t s = 1; s < kSamples; ++s) {
    const double d2 = norm2(samples_[s] - r);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = s;
    }
  }

  // Newton on g(t) = (gamma(t) - r) . gamma'(t), steps clamped to one sample spacing.
  const double h = kTwoPi / kSamples;
  const double t_sample = h * static_cast<double>(best);
  double t = t_sample;
  for (int it = 0; it < 20; ++it) {
    const Vec2 diff = curve_.position(t) - r;
    const Vec2 d1 = curve_.derivative(t);
    const Vec2 d2 = curve_.second_derivative(t);
    const double g = dot(diff, d1);
    const double dg = norm2(d1) + dot(diff, d2);
    if (dg <= 0.0) break;
    double step = g / dg;
    step = std::clamp(step, -h, h);
    const double t_next = std::clamp(t - step, t_sample - h, t_sample + h);
    const bool done = std::abs(t_next - t) < 1e-12;
    t = t_next;
    if (done) break;
  }
  if (norm2(curve_.position(t) - r) > best_d2) t = t_sample;

  ClosestPoint out;
  out.parameter = wrap_angle(t);
  out.boundary_point = curve_.position(out.parameter);
  out.distance = norm(out.boundary_point - r);

  if (out.distance < kBoundaryBand) {
    out.location = Location::boundary;
    out.point = r;
    return out;
  }
  // The sampled polygon deviates from the curve by ~1e-7; resolve points
  // inside that band by the side of the tangent line at the closest point.
  bool inside = false;
  if (out.distance < 1e-5) {
    inside = dot(r - out.boundary_point, curve_.normal(out.parameter)) < 0.0;
  } else {
    inside = winding_number(r) != 0;
  }
  if (inside) {
    out.location = Location::interior;
    out.point = r;
  } else {
    out.location = Location::exterior;
    out.point = out.boundary_point;
  }
  return out;
}

DomainMesh::DomainMesh(std::string name, std::vector<PatchMap> patches, std::size_t base_patches,
                       std::size_t subdivisions, ChebRule rule, BoundaryCurve boundary)
    : name_(std::move(name)),
      patches_(std::move(patches)),
      base_patches_(base_patches),
      subdivisions_(subdivisions),
      rule_(std::move(rule)),
      locator_(std::move(boundary)) {
  const std::size_t n = rule_.n;
  nodes_.resize(patches_.size() * n * n);
  weights_.resize(nodes_.size());
  for (std::size_t p = 0; p < patches_.size(); ++p) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const ParamPoint xi(rule_.nodes[i], rule_.nodes[j]);
        const std::size_t l = global_index(p, i, j);
        const double det = patches_[p].jacobian(xi).det();
        if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
          throw std::runtime_error("DomainMesh: degenerate Jacobian at a grid node of patch " +
                                   std::to_string(p));
        }
        nodes_[l] = patches_[p].map(xi);
        weights_[l] = std::abs(det) * rule_.weights[i] * rule_.weights[j];
      }
    }
  }
}

NodeIndex DomainMesh::local_index(std::size_t l) const {
  const std::size_t n = rule_.n;
  if (l >= nodes_.size()) throw std::out_of_range("DomainMesh::local_index");
  return {l / (n * n), (l / n) % n, l % n};
}

DomainMesh build_builtin_domain(std::string_view name, std::size_t n, std::size_t d) {
  if (n < 2) throw std::invalid_argument("build_builtin_domain: N must be >= 2");
  if (d < 1) throw std::invalid_argument("build_builtin_domain: D must be >= 1");
  BoundaryCurve curve = builtin_curve(name);
  const std::vector<PatchMap> base = base_patches(curve, layout_for(name));
  return DomainMesh(std::string(name), subdivide(base, d), base.size(), d, fejer_rule(n),
                    std::move(curve));
}

ClosestPoint closest_point_on_domain(const DomainMesh& mesh, const Vec2& r) {
  return mesh.locator().closest(r);
}

void write_mesh_json(const DomainMesh& mesh, std::ostream& out) {
  nlohmann::json j;
  j["domain"] = mesh.name();
  j["N"] = mesh.order();
  j["D"] = mesh.subdivisions();
  nlohmann::json patches = nlohmann::json::array();
  for (const PatchMap& p : mesh.patches()) {
    nlohmann::json corners = nlohmann::json::array();
    for (const Vec2& c : p.corners()) corners.push_back({c.x, c.y});
    const char* type = p.kind() == PatchKind::analytic      ? "analytic"
                       : p.kind() == PatchKind::transfinite ? "transfinite"
                                                            : "subpatch";
    patches.push_back({{"corners", corners}, {"type", type}});
  }
  j["patches"] = std::move(patches);
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t l = 0; l < mesh.node_count(); ++l) {
    nodes.push_back({mesh.node(l).x, mesh.node(l).y, mesh.weight(l)});
  }
  j["nodes"] = std::move(nodes);
  out << j.dump() << '\n';
}

}  // namespace greenvol
