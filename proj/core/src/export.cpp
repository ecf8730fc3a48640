#include "flowopt/export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace flowopt {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);  // binary: no newline translation
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  return os;
}

}  // namespace

void write_history_csv(const std::vector<HistoryRecord>& history,
                       std::ostream& os) {
  os << "step,J,volume_fraction,inconsistencies,qubo_energy,wall_ms\n";
  for (const auto& r : history) {
    os << r.step << "," << fmt(r.objective) << "," << fmt(r.volume_fraction)
       << "," << r.inconsistencies << "," << fmt(r.qubo_energy) << ","
       << fmt(r.wall_ms) << "\n";
  }
}

void write_history_csv(const std::vector<HistoryRecord>& history,
                       const std::string& path) {
  auto os = open_out(path);
  write_history_csv(history, os);
}

void write_design_vtk(const StructuredMesh& mesh, const DesignState& design,
                      const ResistanceField& resistance, const FlowField& flow,
                      std::ostream& os) {
  const int nx = mesh.nx(), ny = mesh.ny();
  const int ncell = mesh.num_elements();
  if (static_cast<int>(design.chi.size()) != ncell ||
      static_cast<int>(resistance.alpha.size()) != ncell)
    throw std::invalid_argument("write_design_vtk: field size mismatch");

  os << "# vtk DataFile Version 3.0\n"
     << "flow channel design\n"
     << "ASCII\n"
     << "DATASET STRUCTURED_GRID\n"
     << "DIMENSIONS " << nx + 1 << " " << ny + 1 << " 1\n"
     << "POINTS " << mesh.num_pressure_nodes() << " double\n";
  for (int p = 0; p < mesh.num_pressure_nodes(); ++p) {
    auto [x, y] = mesh.pressure_node_coords(p);
    os << fmt(x) << " " << fmt(y) << " 0\n";
  }

  os << "CELL_DATA " << ncell << "\n";
  os << "SCALARS chi double 1\nLOOKUP_TABLE default\n";
  for (int k = 0; k < ncell; ++k)
    os << fmt(static_cast<double>(design.chi[k])) << "\n";
  os << "SCALARS phi double 1\nLOOKUP_TABLE default\n";
  for (int k = 0; k < ncell; ++k) os << fmt(design.phi[k]) << "\n";
  os << "SCALARS alpha double 1\nLOOKUP_TABLE default\n";
  for (int k = 0; k < ncell; ++k) os << fmt(resistance.alpha[k]) << "\n";
  os << "SCALARS u_magnitude double 1\nLOOKUP_TABLE default\n";
  for (int k = 0; k < ncell; ++k) {
    const auto vn = mesh.element_velocity_nodes(k);
    const int center = vn[4];
    const double ux = flow.velocity[2 * center];
    const double uy = flow.velocity[2 * center + 1];
    os << fmt(std::sqrt(ux * ux + uy * uy)) << "\n";
  }

  const int stride = 2 * nx + 1;
  os << "POINT_DATA " << mesh.num_pressure_nodes() << "\n";
  os << "VECTORS velocity double\n";
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const int vnode = 2 * j * stride + 2 * i;  // matching fine-grid node
      os << fmt(flow.velocity[2 * vnode]) << " " << fmt(flow.velocity[2 * vnode + 1])
         << " 0\n";
    }
  os << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int p = 0; p < mesh.num_pressure_nodes(); ++p)
    os << fmt(flow.pressure[p]) << "\n";
}

void write_design_vtk(const StructuredMesh& mesh, const DesignState& design,
                      const ResistanceField& resistance, const FlowField& flow,
                      const std::string& path) {
  auto os = open_out(path);
  write_design_vtk(mesh, design, resistance, flow, os);
}

}  // namespace flowopt
