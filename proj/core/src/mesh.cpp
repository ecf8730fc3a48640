#include "flowopt/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace flowopt {

StructuredMesh::StructuredMesh(int nx, int ny, double width, double height)
    : nx_(nx), ny_(ny), width_(width), height_(height) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("StructuredMesh: nx and ny must be >= 1");
  if (!(width > 0.0) || !(height > 0.0))
    throw std::invalid_argument("StructuredMesh: extents must be positive");
  hx_ = width_ / nx_;
  hy_ = height_ / ny_;
}

std::pair<double, double> StructuredMesh::element_center(int k) const {
  auto [ex, ey] = element_xy(k);
  return {(ex + 0.5) * hx_, (ey + 0.5) * hy_};
}

std::array<int, 9> StructuredMesh::element_velocity_nodes(int k) const {
  auto [ex, ey] = element_xy(k);
  const int stride = 2 * nx_ + 1;
  const int base = 2 * ey * stride + 2 * ex;
  std::array<int, 9> nodes{};
  int m = 0;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) nodes[m++] = base + j * stride + i;
  return nodes;
}

std::array<int, 4> StructuredMesh::element_pressure_nodes(int k) const {
  auto [ex, ey] = element_xy(k);
  const int stride = nx_ + 1;
  const int base = ey * stride + ex;
  return {base, base + 1, base + stride, base + stride + 1};
}

std::pair<double, double> StructuredMesh::velocity_node_coords(int node) const {
  const int stride = 2 * nx_ + 1;
  const int i = node % stride;
  const int j = node / stride;
  return {0.5 * i * hx_, 0.5 * j * hy_};
}

std::pair<double, double> StructuredMesh::pressure_node_coords(int node) const {
  const int stride = nx_ + 1;
  const int i = node % stride;
  const int j = node / stride;
  return {i * hx_, j * hy_};
}

std::vector<int> StructuredMesh::element_neighbors(int k) const {
  if (k < 0 || k >= num_elements())
    throw std::invalid_argument("element_neighbors: element id out of range");
  auto [ex, ey] = element_xy(k);
  std::vector<int> out;
  out.reserve(4);
  if (ey > 0) out.push_back(element_index(ex, ey - 1));
  if (ex > 0) out.push_back(element_index(ex - 1, ey));
  if (ex + 1 < nx_) out.push_back(element_index(ex + 1, ey));
  if (ey + 1 < ny_) out.push_back(element_index(ex, ey + 1));
  return out;  // construction order is already ascending
}

std::vector<std::pair<int, int>> StructuredMesh::adjacent_element_pairs() const {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(2 * num_elements());
  for (int k = 0; k < num_elements(); ++k) {
    auto [ex, ey] = element_xy(k);
    if (ex + 1 < nx_) pairs.emplace_back(k, element_index(ex + 1, ey));
    if (ey + 1 < ny_) pairs.emplace_back(k, element_index(ex, ey + 1));
  }
  return pairs;
}

std::vector<BoundarySegment> tag_benchmark_boundaries(const StructuredMesh& mesh,
                                                      BenchmarkCase bc,
                                                      double peak_scale) {
  const double W = mesh.width();
  const double H = mesh.height();
  const double aspect = W / H;
  std::vector<BoundarySegment> segs;
  switch (bc) {
    case BenchmarkCase::Diffuser: {
      if (std::abs(aspect - 1.0) > 1e-12)
        throw std::invalid_argument(
            "tag_benchmark_boundaries: diffuser needs a 1:1 domain, got aspect " +
            std::to_string(aspect));
      // Full-height inlet on the left; outlet over the middle third of the
      // right side with 3x the inlet peak so the prescribed fluxes balance.
      segs.push_back({Side::Left, 0.0, H, SegmentKind::Inlet, 1.0 * peak_scale});
      segs.push_back({Side::Right, H / 3.0, 2.0 * H / 3.0, SegmentKind::Outlet,
                      3.0 * peak_scale});
      break;
    }
    case BenchmarkCase::DoublePipe: {
      if (std::abs(aspect - 1.5) > 1e-12)
        throw std::invalid_argument(
            "tag_benchmark_boundaries: double pipe needs a 1.5:1 domain, got aspect " +
            std::to_string(aspect));
      // Two equal inlets on the left, mirrored outlets on the right.
      segs.push_back({Side::Left, H / 6.0, H / 3.0, SegmentKind::Inlet, peak_scale});
      segs.push_back(
          {Side::Left, 2.0 * H / 3.0, 5.0 * H / 6.0, SegmentKind::Inlet, peak_scale});
      segs.push_back(
          {Side::Right, H / 6.0, H / 3.0, SegmentKind::Outlet, peak_scale});
      segs.push_back(
          {Side::Right, 2.0 * H / 3.0, 5.0 * H / 6.0, SegmentKind::Outlet, peak_scale});
      break;
    }
  }
  return segs;
}

double net_prescribed_flux(const std::vector<BoundarySegment>& segments) {
  double net = 0.0;
  for (const auto& s : segments) net += s.signed_flux();
  return net;
}

}  // namespace flowopt
