#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "steklab/hyp.hpp"
#include "steklab/hypgeom.hpp"
#include "steklab/topology.hpp"

namespace steklab::mesh {

using Vec2 = Eigen::Vector2d;

/// Conformal chart: the flat metric of the chart coordinates times
/// conformal_factor^2 is the hyperbolic metric. Stiffness assembly never
/// needs the factor; boundary arclength and areas do.
struct ChartSpec {
    enum class Kind { strip, disk };
    Kind kind = Kind::disk;
    double radius = 1.0;  // disk charts; strips use lambda = sec(y)

    double conformal_factor(const Vec2& p) const;
};

struct Tri {
    std::array<int, 3> v{};    // global vertex ids
    std::array<Vec2, 3> p{};   // chart coordinates per corner (chart-CCW)
    int chart = 0;
    int region = 0;
};

struct BoundaryEdge {
    int va = -1, vb = -1;
    std::array<Vec2, 2> p{};
    int chart = 0;
    int component = -1;
    double s_a = 0.0, s_b = 0.0;  // arclength parameters, unwrapped
    double hyp_length = 0.0;
};

struct Region {
    enum class Kind { collar, core };
    Kind kind = Kind::core;
    int cuff = -1;    // collar regions
    int pants = -1;   // core regions
    int hexside = -1; // 0: base copy, 1: mirror copy
};

/// An equidistant-curve interface (t = width) of one collar strip instance.
/// Refinement uses it to keep new nodes on the true curve; the disk side
/// evaluates the Fermi frame, the strip side is the line y = tau_w.
struct ArcInterface {
    int cuff = -1;
    double width = 0.0;
    double tau_w = 0.0;
    hyp::FermiFrame frame;   // in the base (hexside 0) disk chart
    bool conj = false;       // mirror copy: conjugate disk coordinates
    bool has_strip = true;
    bool has_disk = true;
    std::vector<int> nodes;  // ordered along the arc
    std::vector<double> s;   // Fermi s parameter per node
};

struct CuffRecord {
    enum class Kind { interior, boundary, model };
    Kind kind = Kind::interior;
    double length = 0.0;
    double width = 0.0;
    int edge = -1;                 // pants-graph interior edge (interior cuffs)
    int boundary_component = -1;   // boundary cuffs
    int pants_a = -1, pants_b = -1;
    int m = 0;                     // s-subdivisions per half cuff
    int nt = 0;
    std::vector<int> arcs;         // [a-H, a-H', b-H, b-H'] or [H, H'], indices into mesh arcs
    std::vector<int> core_nodes;   // ordered around the core circle
    // model cuffs: the two boundary components forming Gamma_1, Gamma_2
    std::vector<int> far_components;
};

/// Glued triangulated conformal charts with hyperbolic boundary data.
struct SurfaceMesh {
    std::vector<ChartSpec> charts;
    int n_vertices = 0;
    std::vector<Tri> tris;
    std::vector<Region> regions;
    std::vector<BoundaryEdge> bedges;
    std::vector<std::string> boundary_names;
    std::vector<double> boundary_ref_length;  // exact lengths where known
    std::vector<CuffRecord> cuffs;
    std::vector<ArcInterface> arcs;
    // node chains along true geodesics (seam middles, chart interfaces);
    // refinement keeps their new nodes on the curve
    std::vector<std::vector<int>> geodesic_chains;
    std::vector<Vec2> vpos;   // one representative chart position per vertex
    std::vector<int> vchart;
    double target_h = 0.0;
    int refinement_level = 0;

    double triangle_chart_area(int t) const;
    double triangle_hyp_area(int t) const;
    double total_area() const;
    std::vector<double> measured_boundary_lengths() const;
    int euler_characteristic() const;
    int boundary_cycle_count() const;
    int num_boundary_components() const { return static_cast<int>(boundary_names.size()); }

    /// Conformity, orientability, positive areas, labeled boundary closure.
    void validate() const;

    std::vector<int> triangles_in_collar(int cuff) const;
    std::vector<int> triangles_in_cores(const std::vector<int>& pants) const;
    /// Reflection pairing (x, x*) across the core of an interior/model cuff:
    /// node pairs on the two far circles.
    std::vector<std::pair<int, int>> reflection_pairs(int cuff) const;
    /// Ordered (node, s) along a boundary component, derived from bedges.
    std::vector<std::pair<int, double>> boundary_nodes(int component) const;
};

inline constexpr long kDefaultTriangleCap = 2000000;

/// Glued global mesh of a compact pants-decomposed surface. Every cuff and
/// boundary geodesic is a union of mesh edges; collar strips are structured
/// Fermi grids of full tube width; hexagon cores are unstructured disk-chart
/// triangulations. h is the target edge length in chart units, in (1e-3, 1).
SurfaceMesh mesh_surface(const topo::PantsGraph& spec, double h,
                         long max_triangles = kDefaultTriangleCap);

/// Uniform 1 -> 4 refinement; new nodes placed by the chart midpoint rules
/// (geodesic midpoint in disk charts, Fermi midpoint in strips, true-curve
/// midpoint on equidistant interfaces).
SurfaceMesh refine(const SurfaceMesh& m);

/// Standalone half-collar [0, tube] x S^1: boundary components "core", "far".
SurfaceMesh mesh_half_collar(double core_length, double h);
/// Standalone collar [-tube, tube] x S^1: boundary components "left", "right".
SurfaceMesh mesh_cylinder(double core_length, double h);
/// The half-collar meshed in two Poincare-disk charts instead of the flat
/// strip chart; exercises curved-boundary arclength and chart independence.
SurfaceMesh mesh_half_collar_disk(double core_length, double h);

// --- plain-text export/import (bit-exact round trip) ---
std::string export_mesh_text(const SurfaceMesh& m);
SurfaceMesh import_mesh_text(const std::string& text);

}  // namespace steklab::mesh
