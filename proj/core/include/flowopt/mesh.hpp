#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace flowopt {

enum class Side { Left, Right, Bottom, Top };
enum class SegmentKind { Inlet, Outlet, Wall };

/// Interval [lo, hi] on one side of the rectangle carrying a parabolic
/// normal-velocity profile of the given peak value.  Inlets point into the
/// domain, outlets out of it; anything not covered by a segment is a no-slip
/// wall.
struct BoundarySegment {
  Side side{Side::Left};
  double lo{0.0};
  double hi{0.0};
  SegmentKind kind{SegmentKind::Wall};
  double peak{0.0};

  double length() const { return hi - lo; }
  /// Volume flux of the parabolic profile, unsigned: integral of
  /// peak * 4 (s-lo)(hi-s)/(hi-lo)^2 over [lo, hi] = (2/3) * peak * length.
  double flux() const { return 2.0 / 3.0 * peak * length(); }
  /// Signed flux with respect to the outward normal (inflow negative).
  double signed_flux() const {
    return kind == SegmentKind::Inlet ? -flux() : flux();
  }
};

enum class BenchmarkCase { Diffuser, DoublePipe };

/// Uniform rectangular grid of quadrilaterals with a biquadratic velocity
/// node set (corner + edge-midpoint + center nodes) and a bilinear pressure
/// node set (corners only).  Element k = ey*nx + ex, row-major from the
/// bottom-left corner; node ids are row-major on their respective grids.
class StructuredMesh {
 public:
  StructuredMesh(int nx, int ny, double width, double height);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double width() const { return width_; }
  double height() const { return height_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  double element_volume() const { return hx_ * hy_; }
  double domain_volume() const { return width_ * height_; }

  int num_elements() const { return nx_ * ny_; }
  int num_velocity_nodes() const { return (2 * nx_ + 1) * (2 * ny_ + 1); }
  int num_pressure_nodes() const { return (nx_ + 1) * (ny_ + 1); }

  int element_index(int ex, int ey) const { return ey * nx_ + ex; }
  std::pair<int, int> element_xy(int k) const { return {k % nx_, k / nx_}; }

  /// Center coordinates of element k.
  std::pair<double, double> element_center(int k) const;

  /// The 9 velocity-node ids of element k, local ordering row-major over the
  /// 3x3 sub-grid: (0,0) (1,0) (2,0) (0,1) ... (2,2) in reference coords.
  std::array<int, 9> element_velocity_nodes(int k) const;
  /// The 4 pressure-node ids, row-major: (0,0) (1,0) (0,1) (1,1).
  std::array<int, 4> element_pressure_nodes(int k) const;

  std::pair<double, double> velocity_node_coords(int node) const;
  std::pair<double, double> pressure_node_coords(int node) const;

  /// Edge-sharing neighbor element ids, ascending.
  std::vector<int> element_neighbors(int k) const;

  /// All (k, l) edge-adjacent element pairs with k < l, lexicographic.
  std::vector<std::pair<int, int>> adjacent_element_pairs() const;

 private:
  int nx_, ny_;
  double width_, height_;
  double hx_, hy_;
};

/// Boundary segments for one of the two benchmark layouts.  Segment
/// intervals scale with the mesh extents; the mesh aspect ratio must match
/// the case (1:1 diffuser, 1.5:1 double pipe).  `peak_scale` multiplies
/// every profile peak.
std::vector<BoundarySegment> tag_benchmark_boundaries(const StructuredMesh& mesh,
                                                      BenchmarkCase bc,
                                                      double peak_scale = 1.0);

/// Net signed flux of a segment set (should vanish for a well-posed case).
double net_prescribed_flux(const std::vector<BoundarySegment>& segments);

}  // namespace flowopt
