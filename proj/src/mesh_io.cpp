#include "willmore/mesh_io.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "willmore/csv.hpp"

namespace willmore {

namespace {

// Yields the non-empty, non-comment lines of a stream with their numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::istringstream& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++number_;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      fields.clear();
      fields.str(line);
      return true;
    }
    return false;
  }
  int number() const { return number_; }

 private:
  std::istream& in_;
  int number_ = 0;
};

}  // namespace

SurfaceMesh read_off(std::istream& in) {
  LineReader reader(in);
  std::istringstream fields;
  if (!reader.next(fields)) throw MeshFormatError(reader.number(), "empty OFF file");
  std::string magic;
  fields >> magic;
  if (magic != "OFF") throw MeshFormatError(reader.number(), "expected 'OFF' header, got '" + magic + "'");

  long nv = -1, nf = -1, ne = 0;
  if (!(fields >> nv)) {
    if (!reader.next(fields)) throw MeshFormatError(reader.number(), "missing element counts");
    fields >> nv;
  }
  if (!(fields >> nf)) throw MeshFormatError(reader.number(), "missing face count");
  fields >> ne;
  if (nv < 3 || nf < 1) throw MeshFormatError(reader.number(), "invalid vertex/face counts");

  VectorX x(3 * nv);
  for (long j = 0; j < nv; ++j) {
    if (!reader.next(fields)) throw MeshFormatError(reader.number(), "unexpected end of file in vertex list");
    Vec3 p;
    if (!(fields >> p[0] >> p[1] >> p[2])) {
      throw MeshFormatError(reader.number(), "malformed vertex line");
    }
    set_node_vec3(x, nv, j, p);
  }
  std::vector<int> conn;
  conn.reserve(3 * nf);
  for (long f = 0; f < nf; ++f) {
    if (!reader.next(fields)) throw MeshFormatError(reader.number(), "unexpected end of file in face list");
    int count = 0;
    if (!(fields >> count)) throw MeshFormatError(reader.number(), "malformed face line");
    if (count != 3) throw MeshFormatError(reader.number(), "only triangular faces are supported");
    for (int c = 0; c < 3; ++c) {
      long id = -1;
      if (!(fields >> id)) throw MeshFormatError(reader.number(), "malformed face line");
      if (id < 0 || id >= nv) throw MeshFormatError(reader.number(), "vertex index out of range");
      conn.push_back(static_cast<int>(id));
    }
  }
  SurfaceMesh mesh(1, static_cast<int>(nv), static_cast<int>(nv), std::move(conn), std::move(x));
  check_closed_oriented(mesh);
  return mesh;
}

SurfaceMesh read_off_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file '" + path + "'");
  return read_off(in);
}

void write_off(std::ostream& out, const SurfaceMesh& mesh, const VectorX& x) {
  const int N = mesh.node_count();
  out << "OFF\n" << mesh.vertex_count() << ' ' << mesh.element_count() << " 0\n";
  for (int j = 0; j < mesh.vertex_count(); ++j) {
    const Vec3 p = node_vec3(x, N, j);
    out << format_double(p[0]) << ' ' << format_double(p[1]) << ' ' << format_double(p[2]) << '\n';
  }
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto c = mesh.corners(e);
    out << "3 " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  }
}

void write_off(std::ostream& out, const SurfaceMesh& mesh) { write_off(out, mesh, mesh.positions()); }

void write_off_file(const std::string& path, const SurfaceMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_off(out, mesh);
}

void write_vtk(std::ostream& out, const SurfaceMesh& mesh, const VectorX& x,
               const std::vector<NamedField>& point_scalars, const VtkOptions& options) {
  const int N = mesh.node_count();
  const int k = mesh.degree();
  const int E = mesh.element_count();
  const int nloc = mesh.nodes_per_element();

  out << "# vtk DataFile Version 3.0\n" << options.title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << N << " double\n";
  for (int j = 0; j < N; ++j) {
    const Vec3 p = node_vec3(x, N, j);
    out << format_double(p[0]) << ' ' << format_double(p[1]) << ' ' << format_double(p[2]) << '\n';
  }

  std::vector<std::array<int, 3>> linear;
  if (k == 1 || (k == 2 && options.quadratic_cells)) {
    const int cell_size = (k == 1) ? 3 : 6;
    out << "CELLS " << E << ' ' << E * (cell_size + 1) << '\n';
    for (int e = 0; e < E; ++e) {
      const auto el = mesh.element(e);
      out << cell_size;
      for (int a = 0; a < cell_size; ++a) out << ' ' << el[a];
      out << '\n';
    }
    out << "CELL_TYPES " << E << '\n';
    for (int e = 0; e < E; ++e) out << (k == 1 ? 5 : 22) << '\n';
  } else {
    // k^2 linear sub-triangles of the local node lattice
    std::map<std::pair<int, int>, int> local;
    const auto& lat = mesh.reference().lattice();
    for (int a = 0; a < nloc; ++a) local[{lat[a][0], lat[a][1]}] = a;
    std::vector<std::array<int, 3>> sub;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; i + j < k; ++j) {
        sub.push_back({local[{i, j}], local[{i + 1, j}], local[{i, j + 1}]});
        if (i + j + 2 <= k) sub.push_back({local[{i + 1, j}], local[{i + 1, j + 1}], local[{i, j + 1}]});
      }
    }
    const int cells = E * static_cast<int>(sub.size());
    out << "CELLS " << cells << ' ' << 4 * cells << '\n';
    for (int e = 0; e < E; ++e) {
      const auto el = mesh.element(e);
      for (const auto& t : sub) out << "3 " << el[t[0]] << ' ' << el[t[1]] << ' ' << el[t[2]] << '\n';
    }
    out << "CELL_TYPES " << cells << '\n';
    for (int c = 0; c < cells; ++c) out << "5\n";
  }

  if (!point_scalars.empty()) {
    out << "POINT_DATA " << N << '\n';
    for (const auto& [name, values] : point_scalars) {
      if (values.size() != N) throw Error("vtk: field '" + name + "' does not have one value per node");
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (int j = 0; j < N; ++j) out << format_double(values[j]) << '\n';
    }
  }
}

void write_vtk_file(const std::string& path, const SurfaceMesh& mesh, const VectorX& x,
                    const std::vector<NamedField>& point_scalars, const VtkOptions& options) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_vtk(out, mesh, x, point_scalars, options);
}

}  // namespace willmore
