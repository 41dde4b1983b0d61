#pragma once

#include <array>
#include <vector>

#include "steklab/hyp.hpp"
#include "steklab/topology.hpp"

namespace steklab::hypgeom {

/// Right-angled hexagon, sides in cyclic order a, c', b, a', c, b' where a
/// prime marks the side opposite its letter. Realized as a geodesic polygon
/// in the Poincare disk: vertex[i] starts side[i].
struct Hexagon {
    std::array<double, 6> side{};
    std::array<hyp::cplx, 6> vertex{};

    /// Max residual of the three cyclic relations
    /// cosh c = sinh a sinh b cosh c' - cosh a cosh b (relative).
    double identity_residual() const;
};

/// Side opposite x in a right-angled hexagon whose neighbours of that side
/// are y and z: arcosh((cosh x + cosh y cosh z)/(sinh y sinh z)).
double opposite_side(double x, double y, double z);

/// The unique right-angled hexagon with alternating sides a, b, c at
/// positions 0, 2, 4.
Hexagon hexagon_from_alternating_sides(double a, double b, double c);

/// Pair of pants with geodesic boundary lengths l1, l2, l3, assembled from
/// two mirror copies of the hexagon with alternating sides l_i/2. Cuff k of
/// the hexagon is side 2k; seam[k] = side 2k+1 joins cuffs k and k+1 (mod 3).
struct Pants {
    std::array<double, 3> boundary_length{};
    Hexagon hex;
    std::array<double, 3> seam_length{};
    std::array<double, 3> collar_width{};  // tube width per cuff

    /// Fermi frame of cuff k in the hexagon chart (s = 0 at vertex 2k,
    /// t > 0 into the hexagon).
    hyp::FermiFrame cuff_frame(int k) const;
};

Pants pants_from_boundary_lengths(double l1, double l2, double l3);

/// Half-width of the embedded collar around a closed geodesic of the given
/// length: arsinh(1/sinh(core_length/2)). Strictly decreasing.
double tube_width(double core_length);

/// Thick/thin cutoff for a surface whose longest boundary component has
/// length beta: min(arsinh(1), tube_width(beta)).
double epsilon_circ(double beta);

/// arctan(sinh t); linearizes the Fermi normal coordinate, so collars become
/// flat cylinders in (gudermannian(t), s).
double gudermannian(double t);
/// Inverse: arsinh(tan tau).
double inverse_gudermannian(double tau);

struct Collar {
    enum class Kind { full, half };
    Kind kind = Kind::full;
    double core_length = 0.0;
    double width = 0.0;   // tube_width(core_length)
    double area = 0.0;    // full: 2|core| sinh(width); half: |core| sinh(width)
    int edge = -1;        // interior edge index (full collars)
    int boundary = -1;    // boundary label index (half-collars)
};

struct ThickComponent {
    std::vector<int> pants;  // pants ids of the graph component
    double area = 0.0;       // pants area minus the collar parts inside
};

/// The thick-thin partition of a surface given by a pants decomposition:
/// thin = collars of interior curves of length <= 2*epsilon plus one
/// half-collar per boundary component; thick components are the graph
/// components left after deleting the thin interior curves.
struct ThickThin {
    double epsilon = 0.0;
    std::vector<Collar> thin_collars;
    std::vector<Collar> half_collars;  // indexed like graph boundaries
    std::vector<ThickComponent> thick_components;

    double thin_area() const;
    double thick_area() const;
};

ThickThin thick_thin_decomposition(const topo::PantsGraph& spec, double beta);

}  // namespace steklab::hypgeom
