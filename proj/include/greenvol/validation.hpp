#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "greenvol/geometry.hpp"
#include "greenvol/kernels.hpp"
#include "greenvol/quadrature.hpp"

namespace greenvol {

enum class Strategy { fix_d_grow_n, fix_n_grow_d };

Strategy parse_strategy(const std::string& s);
const char* to_string(Strategy s);

/// Known u with f = (Delta + k^2) u.
struct ManufacturedProblem {
  std::string name;
  SpatialFunction u;
  std::function<std::pair<cplx, cplx>(const Vec2&)> grad_u;
  SpatialFunction f;
};

/// u = cos(xy).
ManufacturedProblem cos_xy_problem(double k);
/// f = 1: u = (x^2+y^2)/4 for k = 0, u = 1/k^2 otherwise.
ManufacturedProblem constant_source_problem(double k);
ManufacturedProblem manufactured_problem(const std::string& name, double k);

struct ExperimentConfig {
  std::string domain{"disk"};
  double k{0.0};
  std::vector<unsigned> orders{0, 1, 2};
  Strategy strategy{Strategy::fix_d_grow_n};
  std::vector<std::size_t> ladder{6, 8, 10, 14};
  std::size_t fixed{1};  // D for fix_d_grow_n, N for fix_n_grow_d
  std::string source{"cosxy"};
  std::size_t boundary_panels{64};
  std::size_t reference_factor{1};  // extra reference refinement on top of the default 4x
  std::string out_dir{"."};

  /// Throws std::invalid_argument on an empty or non-increasing ladder or orders > 12.
  void validate() const;
  std::size_t step_N(std::size_t step) const;
  std::size_t step_D(std::size_t step) const;
};

struct ConvergenceRow {
  unsigned n{0};
  std::size_t N{0};
  std::size_t D{0};
  std::size_t n_tot{0};
  double error{0.0};
  double eoc{0.0};
  bool has_eoc{false};
  double seconds{0.0};
  bool ok{true};
  std::string message;
};

/// Potential values of one configuration together with the reference at every node.
struct FieldResult {
  std::vector<Vec2> nodes;
  std::vector<double> weights;
  std::vector<cplx> approx;
  std::vector<cplx> reference;
};

FieldResult compute_field(const std::string& domain, double k, unsigned n, std::size_t N,
                          std::size_t D, const ManufacturedProblem& problem,
                          std::size_t boundary_panels = 64, std::size_t reference_factor = 1);

/// sqrt(sum w |approx - ref|^2 / sum w |ref|^2) with the mesh weights.
double relative_l2_error(const std::vector<cplx>& approx, const std::vector<cplx>& reference,
                         const std::vector<double>& weights);

/// Slope -log(e1/e0)/log(h0/h1) with h = 1/(ND).
double empirical_order(double e0, std::size_t nd0, double e1, std::size_t nd1);

std::vector<ConvergenceRow> run_manufactured(const ExperimentConfig& config);

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out);
void write_manifest_json(const ExperimentConfig& config, const std::vector<ConvergenceRow>& rows,
                         std::ostream& out);

/// CSV "x,y,log10_abs_error" at every grid node.
void emit_error_field(const std::string& domain, double k, unsigned n, std::size_t N,
                      std::size_t D, const std::string& path);
void write_error_field(const FieldResult& field, std::ostream& out);

/// Fast invariant checks; prints one line per check and returns true when all pass.
bool run_selftest(std::ostream& out);

}  // namespace greenvol
