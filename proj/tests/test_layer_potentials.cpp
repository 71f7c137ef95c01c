#include <gtest/gtest.h>

#include <cmath>

#include "greenvol/geometry.hpp"
#include "greenvol/layer_potentials.hpp"

using namespace greenvol;

namespace {

double trapezoid_length(const BoundaryCurve& c) {
  constexpr int m = 20000;
  double s = 0.0;
  for (int i = 0; i < m; ++i) s += norm(c.derivative(2.0 * kPi * i / m));
  return s * 2.0 * kPi / m;
}

LayerDensityTrace constant_trace(const BoundaryDiscretization& bd, cplx dir, cplx neu) {
  LayerDensityTrace t;
  t.dirichlet.assign(bd.node_count(), dir);
  t.neumann.assign(bd.node_count(), neu);
  return t;
}

Vec2 interior_point(const std::string& name) { return name == "kite" ? Vec2{-0.3, 0.0} : Vec2{0.0, 0.0}; }

// Point at signed distance d along the outward normal at gamma(t).
Vec2 offset_point(const BoundaryCurve& c, double t, double d) { return c.position(t) + c.normal(t) * d; }

const char* const kCurves[] = {"disk", "kite", "jellyfish"};

}  // namespace

TEST(BoundaryDiscretization, CircleLengthAndNormals) {
  const BoundaryDiscretization bd = discretize_boundary(builtin_curve("disk"), 8, 10);
  EXPECT_EQ(bd.node_count(), 80u);
  double len = 0.0;
  for (double w : bd.weights()) len += w;
  EXPECT_NEAR(len, 2.0 * kPi, 1e-12);
  for (std::size_t j = 0; j < bd.node_count(); ++j) {
    const double t = bd.parameters()[j];
    EXPECT_NEAR(norm(bd.normals()[j] - Vec2{std::cos(t), std::sin(t)}), 0.0, 1e-12);
    EXPECT_NEAR(bd.speeds()[j], 1.0, 1e-14);
  }
}

TEST(BoundaryDiscretization, PanelsPartitionParameterRange) {
  const BoundaryDiscretization bd = discretize_boundary(builtin_curve("kite"), 12, 6);
  EXPECT_NEAR(bd.panel_start(0), 0.0, 0.0);
  EXPECT_NEAR(bd.panel_start(11) + bd.panel_width(), 2.0 * kPi, 1e-14);
  for (std::size_t p = 0; p < 12; ++p) {
    for (std::size_t q = 0; q < 6; ++q) {
      const double t = bd.parameters()[p * 6 + q];
      EXPECT_GT(t, bd.panel_start(p));
      EXPECT_LT(t, bd.panel_start(p) + bd.panel_width());
      EXPECT_EQ(bd.panel_of(t), p);
    }
  }
}

TEST(BoundaryDiscretization, LengthsMatchTrapezoidOracle) {
  for (const char* name : kCurves) {
    const BoundaryCurve c = builtin_curve(name);
    const BoundaryDiscretization bd = discretize_boundary(c, 64, 16);
    double len = 0.0;
    for (double w : bd.weights()) len += w;
    EXPECT_NEAR(len, trapezoid_length(c), 1e-10) << name;
  }
}

TEST(BoundaryDiscretization, InvalidCounts) {
  EXPECT_THROW(discretize_boundary(builtin_curve("disk"), 3, 8), std::invalid_argument);
  EXPECT_THROW(discretize_boundary(builtin_curve("disk"), 8, 3), std::invalid_argument);
}

TEST(BoundaryDiscretization, InterpolationReproducesPolynomials) {
  const BoundaryDiscretization bd = discretize_boundary(builtin_curve("disk"), 8, 10);
  std::vector<double> w(10);
  for (double s : {-1.0, -0.31, 0.0, 0.77, 1.0}) {
    bd.interpolation_weights(s, w);
    double sum = 0.0, cubic = 0.0;
    for (std::size_t q = 0; q < 10; ++q) {
      sum += w[q];
      cubic += w[q] * std::pow(bd.rule().nodes[q], 3);
    }
    EXPECT_NEAR(sum, 1.0, 1e-14);
    EXPECT_NEAR(cubic, s * s * s, 1e-14);
  }
}

TEST(GaussLemma, InteriorExteriorAndBoundary) {
  const Wavenumber k0(0.0);
  for (const char* name : kCurves) {
    const BoundaryCurve c = builtin_curve(name);
    const BoundaryDiscretization bd = discretize_boundary(c, 64, 16);
    const LayerDensityTrace one = constant_trace(bd, 1.0, 0.0);
    EXPECT_NEAR(std::abs(layer_combo(k0, bd, one, interior_point(name)) + 1.0), 0.0, 1e-9) << name;
    EXPECT_NEAR(std::abs(layer_combo(k0, bd, one, {3.0, 0.5})), 0.0, 1e-10) << name;
    for (double t : {0.0, 0.4, 2.2, 3.9, 5.5}) {
      EXPECT_NEAR(std::abs(layer_combo_on_boundary(k0, bd, one, t) + 0.5), 0.0, 1e-9) << name << " t=" << t;
      for (double d : {1e-2, 1e-4, 1e-7}) {
        EXPECT_NEAR(std::abs(layer_combo(k0, bd, one, offset_point(c, t, -d)) + 1.0), 0.0, 1e-9)
            << name << " d=" << d;
        EXPECT_NEAR(std::abs(layer_combo(k0, bd, one, offset_point(c, t, d))), 0.0, 1e-9)
            << name << " d=" << d;
      }
    }
  }
}

TEST(GaussLemma, LimitFromInsideAndOutsideAveragesToBoundaryValue) {
  const Wavenumber k0(0.0);
  const BoundaryCurve c = builtin_curve("kite");
  const BoundaryDiscretization bd = discretize_boundary(c, 64, 16);
  const LayerDensityTrace dens = trace_of(
      bd, [](const Vec2& r) { return cplx(std::exp(r.x) * std::cos(r.y)); },
      [](const Vec2&) { return std::pair<cplx, cplx>{0.0, 0.0}; });
  for (double t : {0.3, 1.7, 4.0}) {
    const cplx inside = layer_combo(k0, bd, dens, offset_point(c, t, -1e-7));
    const cplx outside = layer_combo(k0, bd, dens, offset_point(c, t, 1e-7));
    const cplx on = layer_combo_on_boundary(k0, bd, dens, t);
    EXPECT_NEAR(std::abs(0.5 * (inside + outside) - on), 0.0, 1e-6);
    // the jump of the double layer equals the density
    const cplx phi = std::exp(c.position(t).x) * std::cos(c.position(t).y);
    EXPECT_NEAR(std::abs(outside - inside - phi), 0.0, 1e-6);
  }
}

TEST(SingleLayer, UnitCircleLogVanishesAtCenter) {
  const BoundaryDiscretization bd = discretize_boundary(builtin_curve("disk"), 16, 16);
  EXPECT_NEAR(std::abs(layer_combo(Wavenumber(0.0), bd, constant_trace(bd, 0.0, 1.0), {0.0, 0.0})), 0.0,
              1e-15);
}

TEST(GreenIdentity, HarmonicAndHelmholtzDataReproduceKappaU) {
  for (const char* name : kCurves) {
    const BoundaryCurve c = builtin_curve(name);
    const BoundaryDiscretization bd = discretize_boundary(c, 64, 16);
    for (double k : {0.0, 2.0}) {
      const Wavenumber kw(k);
      // u = x for k = 0, a plane wave for k > 0: (Delta + k^2) u = 0
      auto u = [k](const Vec2& r) { return k == 0.0 ? cplx(r.x) : std::exp(cplx(0.0, k * (0.6 * r.x + 0.8 * r.y))); };
      auto grad = [k, u](const Vec2& r) {
        if (k == 0.0) return std::pair<cplx, cplx>{1.0, 0.0};
        const cplx v = cplx(0.0, k) * u(r);
        return std::pair<cplx, cplx>{0.6 * v, 0.8 * v};
      };
      const LayerDensityTrace tr = trace_of(bd, u, grad);
      const Vec2 in = interior_point(name) + Vec2{0.1, 0.05};
      EXPECT_NEAR(std::abs(layer_combo(kw, bd, tr, in) + u(in)), 0.0, 1e-9) << name << " k=" << k;
      const Vec2 near_in = offset_point(c, 1.0, -1e-5);
      EXPECT_NEAR(std::abs(layer_combo(kw, bd, tr, near_in) + u(near_in)), 0.0, 1e-9) << name;
      EXPECT_NEAR(std::abs(layer_combo(kw, bd, tr, {2.5, 2.0})), 0.0, 1e-9) << name;
      EXPECT_NEAR(std::abs(layer_combo(kw, bd, tr, offset_point(c, 2.0, 1e-5))), 0.0, 1e-9) << name;
      for (double t : {0.5, 3.3}) {
        EXPECT_NEAR(std::abs(layer_combo_on_boundary(kw, bd, tr, t) + 0.5 * u(c.position(t))), 0.0, 1e-9)
            << name << " k=" << k << " t=" << t;
      }
    }
  }
}

TEST(ReferencePotential, ClosedFormDiskPotential) {
  const DomainMesh mesh = build_builtin_domain("disk", 4, 1);
  const BoundaryDiscretization bd = reference_discretization(mesh.boundary(), 16);
  EXPECT_EQ(bd.panel_count(), 64u);
  EXPECT_EQ(bd.gauss_order(), 16u);
  auto u = [](const Vec2& r) { return cplx(0.25 * norm2(r)); };
  const LayerDensityTrace tr = trace_of(bd, u, [](const Vec2& r) { return std::pair<cplx, cplx>{0.5 * r.x, 0.5 * r.y}; });
  const Wavenumber k0(0.0);
  for (const Vec2 r : {Vec2{0.0, 0.0}, Vec2{0.3, -0.4}, Vec2{0.0, 0.999}}) {
    const cplx v = reference_potential(k0, bd, tr, u, r, closest_point_on_domain(mesh, r));
    EXPECT_NEAR(std::abs(v - 0.25 * (1.0 - norm2(r))), 0.0, 1e-12);
  }
  for (const Vec2 r : {Vec2{3.0, 0.0}, Vec2{0.0, -1.001}}) {
    const cplx v = reference_potential(k0, bd, tr, u, r, closest_point_on_domain(mesh, r));
    EXPECT_NEAR(std::abs(v + 0.5 * std::log(norm(r))), 0.0, 1e-12);
  }
  const Vec2 b{std::cos(0.8), std::sin(0.8)};
  const ClosestPoint where = closest_point_on_domain(mesh, b);
  ASSERT_EQ(where.location, Location::boundary);
  EXPECT_NEAR(std::abs(reference_potential(k0, bd, tr, u, b, where)), 0.0, 1e-11);
}

TEST(ReferencePotential, HarmonicDataGivesZero) {
  const DomainMesh mesh = build_builtin_domain("kite", 6, 1);
  const BoundaryDiscretization bd = reference_discretization(mesh.boundary(), 64);
  auto u = [](const Vec2& r) { return cplx(r.x); };
  const LayerDensityTrace tr = trace_of(bd, u, [](const Vec2&) { return std::pair<cplx, cplx>{1.0, 0.0}; });
  for (std::size_t l = 0; l < mesh.node_count(); ++l) {
    const Vec2& r = mesh.node(l);
    EXPECT_NEAR(std::abs(reference_potential(Wavenumber(0.0), bd, tr, u, r, closest_point_on_domain(mesh, r))),
                0.0, 1e-10);
  }
}

TEST(SBeta, ConstantMonomialOnDisk) {
  const DomainMesh mesh = build_builtin_domain("disk", 6, 1);
  const BoundaryDiscretization bd = discretize_boundary(mesh.boundary(), 64, 16);
  const std::vector<cplx> s = s_beta_column(Wavenumber(0.0), bd, mesh, {0, 0});
  ASSERT_EQ(s.size(), mesh.node_count());
  for (std::size_t l = 0; l < mesh.node_count(); ++l) {
    EXPECT_NEAR(std::abs(s[l] + 0.25 * (1.0 - norm2(mesh.node(l)))), 0.0, 1e-12);
  }
}

TEST(SBeta, RowKappaBranches) {
  const DomainMesh mesh = build_builtin_domain("disk", 4, 1);
  const BoundaryDiscretization bd = discretize_boundary(mesh.boundary(), 64, 16);
  const SolutionFamily fam(Wavenumber(0.0), 2);
  std::vector<LayerDensityTrace> traces;
  for (std::size_t m = 0; m < fam.size(); ++m) traces.push_back(trace_of(bd, fam.solution(m)));
  for (const Vec2 r : {Vec2{2.0, 1.0}, Vec2{std::cos(2.0), std::sin(2.0)}, Vec2{0.2, 0.1}}) {
    const ClosestPoint where = closest_point_on_domain(mesh, r);
    const std::vector<cplx> row = s_beta_row(bd, fam, traces, r, where);
    const LayerWeights w = layer_weights_at(Wavenumber(0.0), bd, r, where);
    for (std::size_t m = 0; m < fam.size(); ++m) {
      const cplx expect = w.apply(traces[m]) + kappa(where.location) * poly_eval(fam.solution(m), r);
      EXPECT_NEAR(std::abs(row[m] - expect), 0.0, 1e-15);
    }
  }
  EXPECT_EQ(kappa(Location::interior), 1.0);
  EXPECT_EQ(kappa(Location::boundary), 0.5);
  EXPECT_EQ(kappa(Location::exterior), 0.0);
}

TEST(CloseEvaluation, RefinementThresholdSelfConvergence) {
  const BoundaryCurve c = builtin_curve("jellyfish");
  const BoundaryDiscretization bd = discretize_boundary(c, 64, 16);
  const LayerDensityTrace tr = trace_of(bd, laplace_poly({2, 1}));
  for (double d : {-1e-3, -1e-6, 1e-4}) {
    const Vec2 r = offset_point(c, 2.7, d);
    CloseEvaluationOptions base, fine;
    fine.distance_factor = 6.0;
    CloseEvaluationOptions coarse;
    coarse.distance_factor = 1.5;
    const cplx a = layer_combo(Wavenumber(0.0), bd, tr, r, base);
    EXPECT_NEAR(std::abs(a - layer_combo(Wavenumber(0.0), bd, tr, r, fine)), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(a - layer_combo(Wavenumber(0.0), bd, tr, r, coarse)), 0.0, 1e-9);
  }
}

TEST(CloseEvaluation, TargetsOnOrPathologicallyNearGamma) {
  const BoundaryCurve c = builtin_curve("disk");
  const BoundaryDiscretization bd = discretize_boundary(c, 16, 16);
  const LayerDensityTrace one = constant_trace(bd, 1.0, 0.0);
  EXPECT_THROW(layer_combo(Wavenumber(0.0), bd, one, bd.points()[5]), std::domain_error);
  EXPECT_THROW(layer_combo(Wavenumber(0.0), bd, one, c.position(0.123)), std::domain_error);
  EXPECT_THROW(layer_combo(Wavenumber(0.0), bd, one, offset_point(c, 0.123, -1e-11)), std::runtime_error);
}
