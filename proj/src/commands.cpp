#include "willmore/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include "willmore/csv.hpp"
#include "willmore/diagnostics.hpp"
#include "willmore/mesh_io.hpp"

namespace willmore {

namespace fs = std::filesystem;

namespace {

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

Streams streams(const CommandOptions& o) { return {o.out ? *o.out : std::cout, o.err ? *o.err : std::cerr}; }

fs::path prepare_output(const RunConfig& config, const CommandOptions& options) {
  const fs::path dir = options.out_dir.value_or(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  f.exceptions(std::ios::badbit | std::ios::failbit);
  return f;
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

void print_warnings(const RunConfig& config, std::ostream& err) {
  for (const auto& w : config.warnings) err << "warning: " << w << '\n';
}

std::vector<NamedField> snapshot_fields(const VectorX& u, const VectorX& w, int N) {
  VectorX nu_len(N);
  for (int j = 0; j < N; ++j) nu_len[j] = node_vec3(u.segment(N, 3 * N), N, j).norm();
  return {{"H", u.segment(0, N)}, {"V", w.segment(0, N)}, {"nu_length", nu_len}};
}

std::string snapshot_name(int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%06d.vtk", step);
  return buf;
}

const std::vector<std::string> kObservableColumns = {"t", "energy", "area", "min_radius", "max_radius", "min_nu_len",
                                                     "max_nu_len"};

std::vector<double> observable_row(const Observables& o) {
  return {o.t, o.energy, o.area, o.min_radius, o.max_radius, o.min_nu_len, o.max_nu_len};
}

void write_abort_report(const fs::path& dir, const FlowAborted& e, const SurfaceMesh& mesh, bool vtk) {
  const FlowState& s = e.last_good();
  std::ofstream f = open_output(dir / "abort.txt");
  f << "reason: " << e.what() << '\n';
  f << "last_good_step: " << s.step << '\n';
  f << "last_good_t: " << format_double(s.t) << '\n';
  const std::vector<double> row = observable_row(s.obs);
  for (std::size_t i = 0; i < row.size(); ++i) {
    f << kObservableColumns[i] << ": " << (std::isfinite(row[i]) ? format_double(row[i]) : "non-finite") << '\n';
  }
  if (vtk && !s.x_hist.empty()) {
    write_vtk_file((dir / "abort_last_good.vtk").string(), mesh, s.x(), snapshot_fields(s.u(), s.w, mesh.node_count()));
  }
}

std::vector<StudyLevel> study_levels(const RunConfig& config) {
  std::vector<StudyLevel> levels;
  double tau = config.stepper.tau;
  for (const Resolution& r : config.study.levels) {
    levels.push_back({build_mesh(config, r), tau});
    if (config.study.halve_tau) tau *= 0.5;
  }
  return levels;
}

// Errors C_i h^2 with distinct constants per variable; the EOC pipeline
// must return exactly 2.
StudyResult synthetic_study(const std::vector<StudyLevel>& levels) {
  StudyResult result;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    ErrorRecord rec;
    rec.level = static_cast<int>(k);
    rec.h = mesh_width(levels[k].mesh);
    rec.tau = levels[k].tau;
    for (int i = 0; i < VariableErrors::kCount; ++i) rec.err[i] = (1.0 + i) * rec.h * rec.h;
    rec.energy_T = 0.0;
    result.records.push_back(rec);
  }
  compute_eoc(result);
  return result;
}

int variable_index(const std::string& name) {
  for (int i = 0; i < VariableErrors::kCount; ++i) {
    if (name == VariableErrors::name(i)) return i;
  }
  throw ConfigError("study.variables", "unknown variable '" + name + "'");
}

// One row of the check table: a residual sequence and its decay.
struct DecaySeries {
  std::string name;
  std::vector<double> values;
};

// Residuals this close to zero on every level are identities of the
// discrete data and have no rate.
constexpr double kRoundOff = 1e-9;

}  // namespace

int cmd_run(const RunConfig& config, const CommandOptions& options) {
  auto [out, err] = streams(options);
  print_warnings(config, err);
  const fs::path dir = prepare_output(config, options);
  const SurfaceMesh mesh = build_mesh(config);
  const int N = mesh.node_count();
  out << "surface " << config.surface.name() << ", N = " << N << ", elements = " << mesh.element_count()
      << ", h = " << fmt("%.4g", mesh_width(mesh)) << '\n';

  FlowSolver solver(mesh, config.stepper);
  FlowState state = solver.init_state(config.surface);
  if (config.stepper.theta == ThetaPolicy::Exact && !state.exact_start) {
    err << "note: no exact V and z for " << config.surface.name() << ", running with theta = 0\n";
  }

  std::ofstream csv_file = open_output(dir / "observables.csv");
  CsvWriter csv(csv_file, kObservableColumns);
  const auto observer = [&](const Snapshot& s) {
    csv.row(observable_row(s.obs));
    if (config.write_vtk && s.step % config.snapshot_stride == 0) {
      write_vtk_file((dir / snapshot_name(s.step)).string(), mesh, *s.x, snapshot_fields(*s.u, *s.w, N));
    }
  };

  try {
    const RunSummary summary = solver.run(state, config.T, observer);
    if (config.write_vtk && summary.steps % config.snapshot_stride != 0) {
      write_vtk_file((dir / snapshot_name(summary.steps)).string(), mesh, state.x(), snapshot_fields(state.u(), state.w, N));
    }
    out << "steps " << summary.steps << ", t = " << format_double(summary.t)
        << ", energy = " << fmt("%.10g", summary.final.energy) << ", area = " << fmt("%.10g", summary.final.area)
        << ", radius in [" << fmt("%.6g", summary.final.min_radius) << ", " << fmt("%.6g", summary.final.max_radius)
        << "]\n";
  } catch (const FlowAborted& e) {
    csv_file.flush();
    write_abort_report(dir, e, mesh, config.write_vtk);
    err << "error: " << e.what() << " (see " << (dir / "abort.txt").string() << ")\n";
    return kExitAborted;
  }
  return kExitOk;
}

int cmd_converge(const RunConfig& config, const CommandOptions& options) {
  auto [out, err] = streams(options);
  print_warnings(config, err);
  if (config.study.levels.size() < 3) throw ConfigError("study.levels", "a convergence study needs at least 3 levels");
  if (!config.study.self_test && !is_stationary(config.surface, config.stepper.mode)) {
    throw UnavailableFieldError("convergence study requires a stationary analytic surface");
  }
  const fs::path dir = prepare_output(config, options);
  const std::vector<StudyLevel> levels = study_levels(config);
  const StudyResult result = config.study.self_test ? synthetic_study(levels)
                                                    : convergence_study(config.surface, levels, config.stepper, config.T);
  {
    std::ofstream f = open_output(dir / "errors.csv");
    write_errors_csv(f, result);
  }

  out << "level        h      tau";
  for (int i = 0; i < VariableErrors::kCount; ++i) out << pad_left(std::string("err_") + VariableErrors::name(i), 11);
  out << '\n';
  for (std::size_t k = 0; k < result.records.size(); ++k) {
    const ErrorRecord& r = result.records[k];
    out << pad_left(std::to_string(r.level), 5) << fmt(" %8.4f", r.h) << fmt(" %8.5f", r.tau);
    for (int i = 0; i < VariableErrors::kCount; ++i) out << fmt(" %10.3e", r.err[i]);
    out << '\n';
    if (k > 0) {
      out << "           eoc         ";
      for (int i = 0; i < VariableErrors::kCount; ++i) out << fmt(" %10.3f", result.eoc[k][i]);
      out << '\n';
    }
    if (!r.ok()) out << "      level failed: " << r.failure << '\n';
  }

  if (options.assert_order) {
    std::vector<int> vars;
    for (const auto& v : config.study.variables) vars.push_back(variable_index(v));
    const double m = result.final_min_eoc(vars);
    const bool ok = std::isfinite(m) && m >= *options.assert_order;
    out << "minimum EOC on the finest pair = " << fmt("%.4f", m) << " (floor " << fmt("%.4g", *options.assert_order)
        << "): " << (ok ? "PASS" : "FAIL") << '\n';
    if (!ok) return kExitBelowFloor;
  }
  return kExitOk;
}

int cmd_check(const RunConfig& config, const CommandOptions& options) {
  auto [out, err] = streams(options);
  print_warnings(config, err);
  if (config.study.levels.size() < 2) throw ConfigError("study.levels", "the check needs at least 2 levels");
  if (!is_stationary(config.surface, config.stepper.mode)) {
    throw UnavailableFieldError("residual checks require a stationary analytic surface");
  }
  std::vector<SurfaceMesh> meshes;
  std::vector<double> h;
  for (const Resolution& r : config.study.levels) {
    meshes.push_back(build_mesh(config, r));
    h.push_back(mesh_width(meshes.back()));
  }

  std::vector<DecaySeries> series;
  const auto defects = defect_check(config.surface, meshes, config.stepper.mode);
  const auto add_defect = [&](const std::string& name, double DefectRecord::*field) {
    DecaySeries s{name, {}};
    for (const auto& d : defects) s.values.push_back(d.*field);
    series.push_back(std::move(s));
  };
  add_defect("defect u/H (M)", &DefectRecord::du_H_m);
  add_defect("defect u/H (dual)", &DefectRecord::du_H_dual);
  add_defect("defect u/nu (M)", &DefectRecord::du_nu_m);
  add_defect("defect u/nu (dual)", &DefectRecord::du_nu_dual);
  add_defect("defect w/V (M)", &DefectRecord::dw_V_m);
  add_defect("defect w/V (dual)", &DefectRecord::dw_V_dual);
  add_defect("defect w/z (M)", &DefectRecord::dw_z_m);
  add_defect("defect w/z (dual)", &DefectRecord::dw_z_dual);
  if (config.stepper.mode == FlowMode::Willmore) {
    const auto identity = identity_residual(config.surface, meshes);
    DecaySeries m{"identity (M)", {}}, d{"identity (dual)", {}};
    for (const auto& r : identity) {
      m.values.push_back(r.m);
      d.values.push_back(r.dual);
    }
    series.push_back(std::move(m));
    series.push_back(std::move(d));
  }

  const double floor = options.assert_order.value_or(config.study.check_floor);
  out << "h:";
  for (double v : h) out << fmt(" %10.4f", v);
  out << '\n';
  bool all_ok = true;
  for (const auto& s : series) {
    double largest = 0.0;
    for (double v : s.values) largest = std::max(largest, v);
    const double rate = eoc(s.values, h).back();
    std::string verdict;
    if (largest <= kRoundOff) {
      verdict = "PASS (vanishes to round-off)";
    } else if (std::isfinite(rate) && rate >= floor) {
      verdict = "PASS";
    } else {
      verdict = "FAIL";
      all_ok = false;
    }
    out << pad_right(s.name, 20);
    for (double v : s.values) out << fmt(" %10.3e", v);
    out << "  rate " << (std::isfinite(rate) ? fmt("%6.3f", rate) : std::string("   n/a")) << "  " << verdict << '\n';
  }
  out << (all_ok ? "all residuals decay with rate >= " : "some residuals decay slower than ") << fmt("%.3g", floor) << '\n';
  return all_ok ? kExitOk : kExitBelowFloor;
}

int cmd_mesh(const RunConfig& config, const CommandOptions& options) {
  auto [out, err] = streams(options);
  print_warnings(config, err);
  const fs::path dir = prepare_output(config, options);
  const SurfaceMesh mesh = build_mesh(config);
  const double area = surface_area(assemble_mass(mesh, mesh.positions()));
  out << "N = " << mesh.node_count() << '\n';
  out << "E = " << mesh.element_count() << '\n';
  out << "h = " << format_double(mesh_width(mesh)) << '\n';
  out << "area = " << format_double(area) << '\n';
  if (const auto exact = config.surface.exact_area()) out << "exact_area = " << format_double(*exact) << '\n';
  {
    std::ofstream f = open_output(dir / "mesh.off");
    write_off(f, mesh);
  }
  write_vtk_file((dir / "mesh.vtk").string(), mesh, mesh.positions(), {});
  return kExitOk;
}

int run_command(const std::string& command, const std::string& config_path, const CommandOptions& options) {
  auto [out, err] = streams(options);
  try {
    const RunConfig config = load_config(config_path);
    if (command == "run") return cmd_run(config, options);
    if (command == "converge") return cmd_converge(config, options);
    if (command == "check") return cmd_check(config, options);
    if (command == "mesh") return cmd_mesh(config, options);
    err << "error: unknown command '" << command << "'\n";
    return kExitConfig;
  } catch (const FlowAborted& e) {
    err << "error: " << e.what() << '\n';
    return kExitAborted;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << '\n';
    return kExitAborted;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace willmore
