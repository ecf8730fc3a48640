#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "flowopt/encoding.hpp"
#include "flowopt/mesh.hpp"
#include "flowopt/stokes.hpp"

namespace flowopt {

/// One optimization-history row; J always comes from a flow re-solved on
/// the design the row describes.
struct HistoryRecord {
  int step{0};
  double objective{0.0};
  double volume_fraction{0.0};
  int inconsistencies{0};   // full formulation only, else 0
  double qubo_energy{0.0};  // 0 for classical runs
  double wall_ms{0.0};
};

/// CSV with header step,J,volume_fraction,inconsistencies,qubo_energy,wall_ms.
void write_history_csv(const std::vector<HistoryRecord>& history,
                       std::ostream& os);
void write_history_csv(const std::vector<HistoryRecord>& history,
                       const std::string& path);

/// Legacy-VTK structured grid over the element corners.  Cell data: chi,
/// phi, alpha, u_magnitude (element-center speed); point data: velocity,
/// pressure.  Output is byte-stable for identical inputs.
void write_design_vtk(const StructuredMesh& mesh, const DesignState& design,
                      const ResistanceField& resistance, const FlowField& flow,
                      std::ostream& os);
void write_design_vtk(const StructuredMesh& mesh, const DesignState& design,
                      const ResistanceField& resistance, const FlowField& flow,
                      const std::string& path);

}  // namespace flowopt
