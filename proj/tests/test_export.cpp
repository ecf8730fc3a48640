#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "flowopt/export.hpp"

using namespace flowopt;

namespace {

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

std::string line_starting_with(const std::string& text,
                               const std::string& prefix) {
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line))
    if (line.rfind(prefix, 0) == 0) return line;
  return {};
}

}  // namespace

TEST_CASE("history CSV golden format") {
  std::vector<HistoryRecord> hist;
  hist.push_back({0, 0.25, 0.5, 2, -1.5, 0.0});
  hist.push_back({1, 1.0 / 3.0, 0.3333333333333333, 0, 0.0, 12.5});
  std::ostringstream os;
  write_history_csv(hist, os);
  CHECK(os.str() ==
        "step,J,volume_fraction,inconsistencies,qubo_energy,wall_ms\n"
        "0,0.25,0.5,2,-1.5,0\n"
        "1,0.333333333,0.333333333,0,0,12.5\n");
}

TEST_CASE("empty history still emits the header") {
  std::ostringstream os;
  write_history_csv({}, os);
  CHECK(os.str() ==
        "step,J,volume_fraction,inconsistencies,qubo_energy,wall_ms\n");
}

TEST_CASE("VTK layout on a 2x2 mesh") {
  const StructuredMesh mesh(2, 2, 2.0, 2.0);
  DesignState design;
  design.chi = {1, 0, 1, 1};
  design.phi = {1.0, -1.0, 0.5, 1.0};
  ResistanceField resistance{{0.0, 12.5, 0.0, 0.0}};
  FlowField flow;
  flow.velocity = Eigen::VectorXd::Zero(2 * mesh.num_velocity_nodes());
  flow.pressure = Eigen::VectorXd::Zero(mesh.num_pressure_nodes());
  // Give element 0's center velocity node a known speed: the center of
  // element 0 is fine-grid node (1,1), index 1*5+1 = 6 on the 5x5 grid.
  flow.velocity[2 * 6] = 3.0;
  flow.velocity[2 * 6 + 1] = 4.0;
  // Corner point (2,2) maps to fine node (4,4) = 24.
  flow.velocity[2 * 24] = 7.0;
  flow.pressure[8] = -2.5;

  std::ostringstream os;
  write_design_vtk(mesh, design, resistance, flow, os);
  const std::string vtk = os.str();

  CHECK(vtk.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
  CHECK(line_starting_with(vtk, "DATASET") == "DATASET STRUCTURED_GRID");
  CHECK(line_starting_with(vtk, "DIMENSIONS") == "DIMENSIONS 3 3 1");
  CHECK(line_starting_with(vtk, "POINTS") == "POINTS 9 double");
  CHECK(line_starting_with(vtk, "CELL_DATA") == "CELL_DATA 4");
  CHECK(line_starting_with(vtk, "POINT_DATA") == "POINT_DATA 9");
  for (const char* name : {"SCALARS chi double 1", "SCALARS phi double 1",
                           "SCALARS alpha double 1",
                           "SCALARS u_magnitude double 1",
                           "SCALARS pressure double 1"})
    CHECK(vtk.find(name) != std::string::npos);
  CHECK(vtk.find("VECTORS velocity double") != std::string::npos);

  // Cell data appear in declaration order with one value per line.
  const auto chi_at = vtk.find("SCALARS chi double 1");
  const auto phi_at = vtk.find("SCALARS phi double 1");
  const auto alpha_at = vtk.find("SCALARS alpha double 1");
  const auto umag_at = vtk.find("SCALARS u_magnitude double 1");
  CHECK(chi_at < phi_at);
  CHECK(phi_at < alpha_at);
  CHECK(alpha_at < umag_at);
  CHECK(vtk.substr(chi_at).find("\n1\n0\n1\n1\n") != std::string::npos);
  CHECK(vtk.substr(phi_at).find("\n1\n-1\n0.5\n1\n") != std::string::npos);
  // Element 0 center speed is sqrt(3^2+4^2) = 5.
  CHECK(vtk.substr(umag_at).find("\n5\n0\n0\n0\n") != std::string::npos);
  // The last corner point carries the velocity we planted.
  CHECK(vtk.find("\n7 0 0\n") != std::string::npos);
  CHECK(vtk.find("\n-2.5\n") != std::string::npos);

  // 9 points + 4 values per cell array + 9 per point array, plus headers.
  const int expected_lines = 6        // preamble through POINTS
                             + 9      // coordinates
                             + 1 + 4 * (2 + 4)  // CELL_DATA + 4 scalar blocks
                             + 1 + (1 + 9)      // POINT_DATA + velocity
                             + (2 + 9);         // pressure
  CHECK(count_lines(vtk) == expected_lines);
}

TEST_CASE("exports are byte-stable") {
  const StructuredMesh mesh(3, 2, 3.0, 2.0);
  DesignState design;
  design.chi = {1, 1, 0, 0, 1, 0};
  design.phi = {0.25, 1.0, -1.0, -0.5, 0.75, -1.0};
  ResistanceField resistance{{0, 0, 12.5, 12.5, 0, 12.5}};
  FlowField flow;
  flow.velocity = Eigen::VectorXd::LinSpaced(
      2 * mesh.num_velocity_nodes(), -1.0, 1.0);
  flow.pressure =
      Eigen::VectorXd::LinSpaced(mesh.num_pressure_nodes(), 0.0, 2.0);

  std::ostringstream a, b;
  write_design_vtk(mesh, design, resistance, flow, a);
  write_design_vtk(mesh, design, resistance, flow, b);
  CHECK(a.str() == b.str());
  CHECK(!a.str().empty());

  std::ostringstream ca, cb;
  std::vector<HistoryRecord> hist{{0, 1.0 / 7.0, 0.123456789012345, 1,
                                   -3.14159265358979, 42.0}};
  write_history_csv(hist, ca);
  write_history_csv(hist, cb);
  CHECK(ca.str() == cb.str());
}

TEST_CASE("VTK rejects mismatched field sizes") {
  const StructuredMesh mesh(2, 2, 2.0, 2.0);
  DesignState design;
  design.chi = {1, 0, 1};  // one short
  design.phi = {1, -1, 1};
  ResistanceField resistance{{0, 0, 0, 0}};
  FlowField flow;
  flow.velocity = Eigen::VectorXd::Zero(2 * mesh.num_velocity_nodes());
  flow.pressure = Eigen::VectorXd::Zero(mesh.num_pressure_nodes());
  std::ostringstream os;
  CHECK_THROWS_AS(write_design_vtk(mesh, design, resistance, flow, os),
                  std::invalid_argument);
}
