#include "greenvol/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

#include "greenvol/layer_potentials.hpp"
#include "greenvol/poly_solutions.hpp"
#include "greenvol/volume_potential.hpp"

namespace greenvol {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<cplx> reference_at_nodes(const DomainMesh& mesh, Wavenumber k,
                                     const ManufacturedProblem& problem, std::size_t panels) {
  const BoundaryDiscretization bd = reference_discretization(mesh.boundary(), panels);
  const LayerDensityTrace tr = trace_of(bd, problem.u, problem.grad_u);
  std::vector<cplx> ref(mesh.node_count());
  for (std::size_t l = 0; l < mesh.node_count(); ++l) {
    const Vec2& r = mesh.node(l);
    ref[l] = reference_potential(k, bd, tr, problem.u, r, closest_point_on_domain(mesh, r));
  }
  return ref;
}

}  // namespace

Strategy parse_strategy(const std::string& s) {
  if (s == "fixD" || s == "fix-D-grow-N") return Strategy::fix_d_grow_n;
  if (s == "fixN" || s == "fix-N-grow-D") return Strategy::fix_n_grow_d;
  throw std::invalid_argument("unknown strategy: " + s);
}

const char* to_string(Strategy s) {
  return s == Strategy::fix_d_grow_n ? "fixD" : "fixN";
}

ManufacturedProblem cos_xy_problem(double k) {
  const double k2 = k * k;
  ManufacturedProblem p;
  p.name = "cosxy";
  p.u = [](const Vec2& r) { return cplx(std::cos(r.x * r.y)); };
  p.grad_u = [](const Vec2& r) {
    const double s = std::sin(r.x * r.y);
    return std::pair<cplx, cplx>{-r.y * s, -r.x * s};
  };
  p.f = [k2](const Vec2& r) {
    return cplx((k2 - (r.x * r.x + r.y * r.y)) * std::cos(r.x * r.y));
  };
  return p;
}

ManufacturedProblem constant_source_problem(double k) {
  ManufacturedProblem p;
  p.name = "constant";
  p.f = [](const Vec2&) { return cplx(1.0); };
  if (k == 0.0) {
    p.u = [](const Vec2& r) { return cplx(0.25 * (r.x * r.x + r.y * r.y)); };
    p.grad_u = [](const Vec2& r) { return std::pair<cplx, cplx>{0.5 * r.x, 0.5 * r.y}; };
  } else {
    const double inv = 1.0 / (k * k);
    p.u = [inv](const Vec2&) { return cplx(inv); };
    p.grad_u = [](const Vec2&) { return std::pair<cplx, cplx>{0.0, 0.0}; };
  }
  return p;
}

ManufacturedProblem manufactured_problem(const std::string& name, double k) {
  if (name == "cosxy") return cos_xy_problem(k);
  if (name == "constant") return constant_source_problem(k);
  throw std::invalid_argument("unknown manufactured source: " + name);
}

void ExperimentConfig::validate() const {
  if (ladder.empty()) throw std::invalid_argument("ladder must not be empty");
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (ladder[i] <= ladder[i - 1]) throw std::invalid_argument("ladder must be strictly increasing");
  }
  if (orders.empty()) throw std::invalid_argument("orders must not be empty");
  for (unsigned n : orders) {
    if (n > kMaxOrder) throw std::invalid_argument("orders must lie in 0..12");
  }
  if (fixed == 0) throw std::invalid_argument("fixed N or D must be positive");
  if (!(k >= 0.0) || !std::isfinite(k)) throw std::invalid_argument("k must be finite and >= 0");
  if (boundary_panels < 4 || reference_factor == 0) {
    throw std::invalid_argument("invalid boundary refinement");
  }
}

std::size_t ExperimentConfig::step_N(std::size_t step) const {
  return strategy == Strategy::fix_d_grow_n ? ladder.at(step) : fixed;
}

std::size_t ExperimentConfig::step_D(std::size_t step) const {
  return strategy == Strategy::fix_d_grow_n ? fixed : ladder.at(step);
}

double relative_l2_error(const std::vector<cplx>& approx, const std::vector<cplx>& reference,
                         const std::vector<double>& weights) {
  if (approx.size() != reference.size() || approx.size() != weights.size()) {
    throw std::invalid_argument("relative_l2_error: length mismatch");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t l = 0; l < approx.size(); ++l) {
    num += weights[l] * std::norm(approx[l] - reference[l]);
    den += weights[l] * std::norm(reference[l]);
  }
  if (den == 0.0) throw std::domain_error("relative_l2_error: reference is zero");
  return std::sqrt(num / den);
}

double empirical_order(double e0, std::size_t nd0, double e1, std::size_t nd1) {
  return -std::log(e1 / e0) / std::log(static_cast<double>(nd1) / static_cast<double>(nd0));
}

FieldResult compute_field(const std::string& domain, double k, unsigned n, std::size_t N,
                          std::size_t D, const ManufacturedProblem& problem,
                          std::size_t boundary_panels, std::size_t reference_factor) {
  const Wavenumber kw(k);
  const DomainMesh mesh = build_builtin_domain(domain, N, D);
  const VolumeOperator op = build_operator(mesh, kw, n, boundary_panels);
  const SourceData src = make_source_data(mesh, problem.f, n);
  FieldResult res;
  res.nodes.assign(mesh.nodes().begin(), mesh.nodes().end());
  res.weights.assign(mesh.weights().begin(), mesh.weights().end());
  res.approx = evaluate(op, src, n);
  res.reference = reference_at_nodes(mesh, kw, problem, boundary_panels * reference_factor);
  return res;
}

std::vector<ConvergenceRow> run_manufactured(const ExperimentConfig& config) {
  config.validate();
  const Wavenumber k(config.k);
  const ManufacturedProblem problem = manufactured_problem(config.source, config.k);
  const unsigned max_order = *std::max_element(config.orders.begin(), config.orders.end());

  std::vector<ConvergenceRow> rows;
  for (std::size_t step = 0; step < config.ladder.size(); ++step) {
    const std::size_t N = config.step_N(step);
    const std::size_t D = config.step_D(step);
    const auto start = std::chrono::steady_clock::now();
    std::vector<ConvergenceRow> step_rows;
    try {
      const DomainMesh mesh = build_builtin_domain(config.domain, N, D);
      const VolumeOperator op = build_operator(mesh, k, max_order, config.boundary_panels);
      const SourceData src = make_source_data(mesh, problem.f, max_order);
      const std::vector<cplx> ref = reference_at_nodes(
          mesh, k, problem, config.boundary_panels * config.reference_factor);
      const std::vector<double> w(mesh.weights().begin(), mesh.weights().end());
      for (unsigned n : config.orders) {
        ConvergenceRow row;
        row.n = n;
        row.N = N;
        row.D = D;
        row.n_tot = mesh.node_count();
        row.error = relative_l2_error(evaluate(op, src, n), ref, w);
        step_rows.push_back(row);
      }
    } catch (const std::exception& e) {
      step_rows.clear();
      for (unsigned n : config.orders) {
        ConvergenceRow row;
        row.n = n;
        row.N = N;
        row.D = D;
        row.ok = false;
        row.message = e.what();
        step_rows.push_back(row);
      }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (ConvergenceRow& row : step_rows) {
      row.seconds = secs;
      rows.push_back(row);
    }
  }

  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].ok) continue;
    for (std::size_t j = i; j-- > 0;) {
      if (rows[j].n != rows[i].n) continue;
      if (rows[j].ok && rows[j].error > 0.0 && rows[i].error > 0.0) {
        rows[i].eoc = empirical_order(rows[j].error, rows[j].N * rows[j].D, rows[i].error,
                                      rows[i].N * rows[i].D);
        rows[i].has_eoc = true;
      }
      break;
    }
  }
  return rows;
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
  out << "n,N,D,N_tot,rel_l2_error,eoc,status\n";
  for (const ConvergenceRow& r : rows) {
    out << r.n << ',' << r.N << ',' << r.D << ',' << r.n_tot << ','
        << (r.ok ? fmt(r.error) : std::string()) << ',' << (r.has_eoc ? fmt(r.eoc) : std::string())
        << ',' << (r.ok ? "ok" : "failed") << '\n';
  }
}

void write_manifest_json(const ExperimentConfig& config, const std::vector<ConvergenceRow>& rows,
                         std::ostream& out) {
  nlohmann::json j;
  j["config"] = {{"domain", config.domain},
                 {"k", config.k},
                 {"orders", config.orders},
                 {"strategy", to_string(config.strategy)},
                 {"ladder", config.ladder},
                 {"fixed", config.fixed},
                 {"source", config.source},
                 {"boundary_panels", config.boundary_panels},
                 {"reference_factor", config.reference_factor}};
  j["compiler"] = __VERSION__;
  j["cxx_standard"] = static_cast<long>(__cplusplus);
  nlohmann::json steps = nlohmann::json::array();
  for (const ConvergenceRow& r : rows) {
    nlohmann::json s = {{"n", r.n},      {"N", r.N},         {"D", r.D},
                        {"N_tot", r.n_tot}, {"ok", r.ok},    {"seconds", r.seconds}};
    if (r.ok) s["error"] = r.error;
    if (r.has_eoc) s["eoc"] = r.eoc;
    if (!r.ok) s["message"] = r.message;
    steps.push_back(std::move(s));
  }
  j["rows"] = std::move(steps);
  out << j.dump(2) << '\n';
}

void write_error_field(const FieldResult& field, std::ostream& out) {
  out << "x,y,log10_abs_error\n";
  for (std::size_t l = 0; l < field.nodes.size(); ++l) {
    const double err = std::max(std::abs(field.approx[l] - field.reference[l]), 1e-300);
    out << fmt(field.nodes[l].x) << ',' << fmt(field.nodes[l].y) << ',' << fmt(std::log10(err))
        << '\n';
  }
}

void emit_error_field(const std::string& domain, double k, unsigned n, std::size_t N,
                      std::size_t D, const std::string& path) {
  const FieldResult field = compute_field(domain, k, n, N, D, cos_xy_problem(k));
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_error_field(field, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

bool run_selftest(std::ostream& out) {
  bool all = true;
  auto report = [&](const std::string& name, bool pass, double value) {
    out << (pass ? "PASS " : "FAIL ") << name << " (" << fmt(value) << ")\n";
    all = all && pass;
  };

  {
    double worst = 0.0;
    for (std::size_t n : {3, 8, 16}) {
      const ChebRule rule = fejer_rule(n);
      for (std::size_t d = 0; d < n; ++d) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += rule.weights[j] * std::pow(rule.nodes[j], d);
        const double exact = d % 2 == 0 ? 2.0 / static_cast<double>(d + 1) : 0.0;
        worst = std::max(worst, std::abs(sum - exact));
      }
    }
    report("fejer exactness", worst < 1e-13, worst);
  }

  {
    double worst = 0.0;
    for (double k : {0.0, 1.0, 2.5}) {
      const MonomialBasisOrder basis(8);
      for (const MultiIndex& a : basis.indices()) {
        const Polynomial2& p = poly_solution(a, Wavenumber(k));
        const double scale = std::max(1.0, p.max_abs_coefficient());
        worst = std::max(worst, pde_residual(p, a, k).max_abs_coefficient() / scale);
      }
    }
    report("polynomial residuals", worst < 1e-11, worst);
  }

  for (const char* name : {"disk", "kite", "jellyfish"}) {
    const BoundaryDiscretization bd = discretize_boundary(builtin_curve(name), 64, 16);
    LayerDensityTrace one;
    one.dirichlet.assign(bd.node_count(), 1.0);
    one.neumann.assign(bd.node_count(), 0.0);
    const Vec2 c = bd.curve().position(0.3);
    const Vec2 inside = name == std::string("kite") ? Vec2{-0.3, 0.0} : Vec2{0.0, 0.0};
    const double di = std::abs(layer_combo(Wavenumber(0.0), bd, one, inside) + 1.0);
    const double db = std::abs(layer_combo_on_boundary(Wavenumber(0.0), bd, one, 0.3) + 0.5);
    const double de = std::abs(layer_combo(Wavenumber(0.0), bd, one, c * 3.0));
    report(std::string("gauss lemma ") + name, std::max({di, db, de}) < 1e-9,
           std::max({di, db, de}));
  }

  {
    const DomainMesh mesh = build_builtin_domain("disk", 6, 1);
    const VolumeOperator op = build_operator(mesh, Wavenumber(0.0), 0);
    const SourceData src = make_source_data(mesh, [](const Vec2&) { return cplx(1.0); }, 0);
    const std::vector<cplx> v = evaluate(op, src, 0);
    double worst = 0.0;
    for (std::size_t l = 0; l < mesh.node_count(); ++l) {
      worst = std::max(worst, std::abs(v[l] - 0.25 * (1.0 - norm2(mesh.node(l)))));
    }
    report("disk closed form", worst < 1e-7, worst);
  }
  return all;
}

}  // namespace greenvol
