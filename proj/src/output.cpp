#include "apq/output.hpp"

#include "apq/errors.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace apq {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

void write_field_csv(const std::filesystem::path& path, const GridFunction& u) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const Mesh& mesh = *u.mesh();
  out << (mesh.dim == 2 ? "node_id,x,y,u\n" : "node_id,x,u\n");
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    out << i << ',' << format_double(mesh.nodes[i][0]);
    if (mesh.dim == 2) out << ',' << format_double(mesh.nodes[i][1]);
    out << ',' << format_double(u[i]) << '\n';
  }
}

GridFunction read_field_csv(const std::filesystem::path& path, const MeshPtr& mesh) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open field file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty field file");
  std::vector<double> values(mesh->node_count(), 0.0);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() < 3) throw ParseError(path.string() + ": malformed row '" + line + "'");
    const std::size_t id = std::stoul(cells.front());
    if (id >= values.size()) {
      throw ValidationError(path.string() + ": node id " + cells.front() +
                            " outside the mesh (" + std::to_string(values.size()) + " nodes)");
    }
    values[id] = std::stod(cells.back());
    ++rows;
  }
  if (rows != mesh->node_count()) {
    throw ValidationError(path.string() + ": " + std::to_string(rows) + " rows for " +
                          std::to_string(mesh->node_count()) + " mesh nodes");
  }
  return GridFunction(mesh, std::move(values));
}

void write_field_vtk(const std::filesystem::path& path, const GridFunction& u,
                     const std::string& name) {
  const Mesh& mesh = *u.mesh();
  if (mesh.dim != 2) throw Error("VTK output is only produced for 2D meshes");
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const int nx = mesh.resolution[0] + 1;
  const int ny = mesh.resolution[1] + 1;
  out << "# vtk DataFile Version 3.0\n" << name << "\nASCII\nDATASET STRUCTURED_GRID\n";
  out << "DIMENSIONS " << nx << ' ' << ny << " 1\n";
  out << "POINTS " << mesh.node_count() << " double\n";
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    out << format_double(mesh.nodes[i][0]) << ' ' << format_double(mesh.nodes[i][1]) << " 0\n";
  }
  out << "POINT_DATA " << mesh.node_count() << "\n";
  out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (std::size_t i = 0; i < mesh.node_count(); ++i) out << format_double(u[i]) << '\n';
}

JsonlLogger::JsonlLogger(const std::filesystem::path& path) : out_(path) {
  if (!out_) throw Error("cannot open " + path.string() + " for writing");
}

IterationSink JsonlLogger::sink() {
  return [this](const IterRecord& rec) {
    std::lock_guard<std::mutex> hold(mutex_);
    out_ << "{\"stage\":\"" << rec.stage << "\",\"iter\":" << rec.iter << ",\"" << rec.metric
         << "\":" << format_double(rec.value) << ",\"step\":" << format_double(rec.step)
         << "}\n";
  };
}

} // namespace apq
