#include "greenvol/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "greenvol/geometry.hpp"

namespace greenvol {

ChebRule fejer_rule(std::size_t n) {
  if (n == 0) throw std::invalid_argument("fejer_rule: N must be >= 1");
  ChebRule rule;
  rule.n = n;
  rule.nodes.resize(n);
  rule.angles.resize(n);
  rule.weights.resize(n);
  const double dn = static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double theta = (2.0 * static_cast<double>(j) + 1.0) * kPi / (2.0 * dn);
    double sum = 0.0;
    for (std::size_t l = 1; l <= n / 2; ++l) {
      const double dl = static_cast<double>(l);
      sum += std::cos(2.0 * dl * theta) / (4.0 * dl * dl - 1.0);
    }
    rule.angles[j] = theta;
    rule.nodes[j] = std::cos(theta);
    rule.weights[j] = 2.0 / dn * (1.0 - 2.0 * sum);
  }
  return rule;
}

std::vector<double> cheb_nodes(std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t j = 0; j < n; ++j) {
    t[j] = std::cos((2.0 * static_cast<double>(j) + 1.0) * kPi / (2.0 * static_cast<double>(n)));
  }
  return t;
}

GaussRule gauss_legendre(std::size_t order) {
  if (order == 0) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double n = static_cast<double>(order);
  for (std::size_t k = 0; k < (order + 1) / 2; ++k) {
    // Newton from the Tricomi initial guess; roots come out descending in k.
    double x = std::cos(kPi * (static_cast<double>(k) + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t m = 2; m <= order; ++m) {
        const double dm = static_cast<double>(m);
        const double p2 = ((2.0 * dm - 1.0) * x * p1 - (dm - 1.0) * p0) / dm;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t m = 2; m <= order; ++m) {
      const double dm = static_cast<double>(m);
      const double p2 = ((2.0 * dm - 1.0) * x * p1 - (dm - 1.0) * p0) / dm;
      p0 = p1;
      p1 = p2;
    }
    dp = order == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[order - 1 - k] = x;
    rule.nodes[k] = -x;
    rule.weights[order - 1 - k] = w;
    rule.weights[k] = w;
  }
  return rule;
}

cplx integrate_patch(const ParamFunction& f, const PatchMap& patch, const ChebRule& rule) {
  cplx sum = 0.0;
  for (std::size_t i = 0; i < rule.n; ++i) {
    for (std::size_t j = 0; j < rule.n; ++j) {
      const ParamPoint xi(rule.nodes[i], rule.nodes[j]);
      sum += f(xi) * std::abs(patch.jacobian(xi).det()) * rule.weights[i] * rule.weights[j];
    }
  }
  return sum;
}

cplx integrate_domain(const SpatialFunction& f, const DomainMesh& mesh) {
  cplx sum = 0.0;
  for (const PatchMap& patch : mesh.patches()) {
    sum += integrate_patch([&](const ParamPoint& xi) { return f(patch.map(xi)); }, patch,
                           mesh.rule());
  }
  return sum;
}

}  // namespace greenvol
