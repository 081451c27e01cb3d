#pragma once

#include "apq/fields.hpp"
#include "apq/logging.hpp"

#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>

namespace apq {

/// Writes node_id,x[,y],u rows with full double precision; byte-identical
/// across runs of the same configuration.
void write_field_csv(const std::filesystem::path& path, const GridFunction& u);

/// Reads a field written by write_field_csv onto the given mesh.
GridFunction read_field_csv(const std::filesystem::path& path, const MeshPtr& mesh);

/// Legacy-VTK STRUCTURED_GRID with one point scalar; 2D meshes only.
void write_field_vtk(const std::filesystem::path& path, const GridFunction& u,
                     const std::string& name);

/// JSON-lines convergence log; one record per solver iteration. The sink is
/// safe to share across homotopy worker threads.
class JsonlLogger {
public:
  explicit JsonlLogger(const std::filesystem::path& path);
  IterationSink sink();

private:
  std::ofstream out_;
  std::mutex mutex_;
};

} // namespace apq
