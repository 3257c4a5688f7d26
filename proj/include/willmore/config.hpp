#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "willmore/mesh.hpp"
#include "willmore/solver.hpp"
#include "willmore/surfaces.hpp"

namespace willmore {

/// Invalid or unreadable configuration. `line` is 0 when the problem is
/// not tied to a line of the file.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what, int line = 0);
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

enum class MeshGenerator { Icosphere, Geodesic, TorusGrid, File };

/// One mesh resolution. Sphere-type generators use `a` (subdivisions or
/// frequency); the torus grid uses a x b.
struct Resolution {
  int a = 0;
  int b = 0;
};

struct MeshSettings {
  MeshGenerator generator = MeshGenerator::Geodesic;
  Resolution resolution{7, 0};
  double grading = 2.0;
  std::string file;
  int degree = 2;
};

struct StudySettings {
  std::vector<Resolution> levels;
  /// Halve tau with every refinement instead of keeping it fixed.
  bool halve_tau = false;
  /// Variables whose EOC --assert-order checks (names as in errors.csv).
  std::vector<std::string> variables{"H", "nu", "V", "z"};
  /// Replace the PDE solves by injected errors C h^2 (checks the EOC
  /// pipeline).
  bool self_test = false;
  /// Decay floor for the check command.
  double check_floor = 1.8;
};

struct RunConfig {
  AnalyticSurface surface{Sphere{}};
  MeshSettings mesh;
  StepperConfig stepper;
  double T = 1.0;
  int snapshot_stride = 10;
  bool write_vtk = true;
  std::string output_dir = "out";
  StudySettings study;
  /// Non-fatal remarks collected while parsing.
  std::vector<std::string> warnings;

  void validate();
};

/// Parses the INI-style configuration (see docs/config.md).
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Builds the mesh for one resolution of the configured generator.
SurfaceMesh build_mesh(const RunConfig& config, const Resolution& resolution);
SurfaceMesh build_mesh(const RunConfig& config);

std::string to_string(const Resolution& r, MeshGenerator generator);

}  // namespace willmore
