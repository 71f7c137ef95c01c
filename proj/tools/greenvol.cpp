#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "greenvol/geometry.hpp"
#include "greenvol/poly_solutions.hpp"
#include "greenvol/validation.hpp"
#include "greenvol/volume_potential.hpp"

namespace fs = std::filesystem;
using namespace greenvol;

namespace {

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized volume potentials on curved 2D domains"};
  app.require_subcommand(1);
  const std::vector<std::string> domains{"disk", "kite", "jellyfish"};

  ExperimentConfig run_cfg;
  std::string strategy = "fixD";
  std::size_t fixed_d = 0, fixed_n = 0;
  auto* run = app.add_subcommand("run", "Manufactured-solution convergence study");
  run->add_option("--domain", run_cfg.domain)->check(CLI::IsMember(domains));
  run->add_option("--k", run_cfg.k, "Wavenumber (0 for Laplace)");
  run->add_option("--orders", run_cfg.orders)->delimiter(',');
  run->add_option("--strategy", strategy)->check(CLI::IsMember({"fixD", "fixN"}));
  run->add_option("--ladder", run_cfg.ladder)->delimiter(',');
  run->add_option("--D", fixed_d, "Subdivisions for fixD");
  run->add_option("--N", fixed_n, "Nodes per direction for fixN");
  run->add_option("--source", run_cfg.source)->check(CLI::IsMember({"cosxy", "constant"}));
  run->add_option("--panels", run_cfg.boundary_panels, "Boundary panels of the operator");
  run->add_option("--out", run_cfg.out_dir, "Output directory")->required();

  std::string field_domain = "kite", field_out;
  double field_k = 0.0;
  unsigned field_n = 4;
  std::size_t field_N = 14, field_D = 1;
  auto* field = app.add_subcommand("field", "Pointwise error field as CSV");
  field->add_option("--domain", field_domain)->check(CLI::IsMember(domains));
  field->add_option("--k", field_k);
  field->add_option("--n", field_n);
  field->add_option("--N", field_N);
  field->add_option("--D", field_D);
  field->add_option("--out", field_out)->required();

  std::string mesh_domain = "disk", mesh_out;
  std::size_t mesh_N = 6, mesh_D = 1;
  auto* mesh_cmd = app.add_subcommand("mesh", "Mesh dump as JSON");
  mesh_cmd->add_option("--domain", mesh_domain)->check(CLI::IsMember(domains));
  mesh_cmd->add_option("--N", mesh_N);
  mesh_cmd->add_option("--D", mesh_D);
  mesh_cmd->add_option("--out", mesh_out)->required();

  double polys_k = 0.0;
  unsigned polys_n = 4;
  std::string polys_out;
  auto* polys = app.add_subcommand("polys", "Polynomial solutions as JSON");
  polys->add_option("--k", polys_k);
  polys->add_option("--n", polys_n);
  polys->add_option("--out", polys_out)->required();

  std::string op_domain = "disk", op_out;
  double op_k = 0.0;
  unsigned op_n = 2;
  std::size_t op_N = 6, op_D = 1;
  auto* exp = app.add_subcommand("export-operator", "Write S and W as binary matrices");
  exp->add_option("--domain", op_domain)->check(CLI::IsMember(domains));
  exp->add_option("--k", op_k);
  exp->add_option("--n", op_n);
  exp->add_option("--N", op_N);
  exp->add_option("--D", op_D);
  exp->add_option("--out", op_out, "Output directory")->required();

  auto* selftest = app.add_subcommand("selftest", "Run the invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      run_cfg.strategy = parse_strategy(strategy);
      if (run_cfg.strategy == Strategy::fix_d_grow_n) {
        run_cfg.fixed = fixed_d == 0 ? 1 : fixed_d;
      } else {
        run_cfg.fixed = fixed_n == 0 ? 5 : fixed_n;
      }
      const std::vector<ConvergenceRow> rows = run_manufactured(run_cfg);
      const fs::path dir(run_cfg.out_dir);
      {
        std::ofstream csv = open_output(dir / "convergence.csv");
        write_convergence_csv(rows, csv);
      }
      {
        std::ofstream js = open_output(dir / "manifest.json");
        write_manifest_json(run_cfg, rows, js);
      }
      write_convergence_csv(rows, std::cout);
      bool ok = true;
      for (const ConvergenceRow& r : rows) {
        if (!r.ok) {
          std::cerr << "step N=" << r.N << " D=" << r.D << " failed: " << r.message << '\n';
          ok = false;
        }
      }
      return ok ? 0 : 1;
    }
    if (field->parsed()) {
      const fs::path path(field_out);
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      emit_error_field(field_domain, field_k, field_n, field_N, field_D, field_out);
      return 0;
    }
    if (mesh_cmd->parsed()) {
      std::ofstream out = open_output(mesh_out);
      write_mesh_json(build_builtin_domain(mesh_domain, mesh_N, mesh_D), out);
      return 0;
    }
    if (polys->parsed()) {
      std::ofstream out = open_output(polys_out);
      write_family_json(SolutionFamily(Wavenumber(polys_k), polys_n), out);
      return 0;
    }
    if (exp->parsed()) {
      const DomainMesh mesh = build_builtin_domain(op_domain, op_N, op_D);
      const VolumeOperator op = build_operator(mesh, Wavenumber(op_k), op_n);
      const fs::path dir(op_out);
      std::ofstream s = open_output(dir / "S.bin");
      write_matrix_binary(op.S, op_k, op_n, s);
      std::ofstream w = open_output(dir / "W.bin");
      write_matrix_binary(op.W, op_k, op_n, w);
      return 0;
    }
    if (selftest->parsed()) return run_selftest(std::cout) ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
