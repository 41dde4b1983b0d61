#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <map>
#include <string>
#include <vector>

#include "steklab/mesh.hpp"

namespace steklab::steklov {

enum class Condition { steklov, neumann, dirichlet };

/// Per boundary component condition; defaults to Steklov everywhere.
/// At least one component must carry the Steklov condition.
struct BoundaryConditionMap {
    std::map<std::string, Condition> by_name;

    Condition condition(const std::string& name) const;
    static BoundaryConditionMap all_steklov() { return {}; }
};

using SpMat = Eigen::SparseMatrix<double>;

/// Piecewise-linear stiffness assembled with the flat chart metric; the
/// Dirichlet energy is conformally invariant in 2D, so no metric quadrature
/// enters. Kernel = constants.
SpMat assemble_stiffness(const mesh::SurfaceMesh& m);

/// 1D boundary mass over the Steklov part, by 2-point Gauss with the exact
/// conformal factor (hyperbolic arclength). Zero rows elsewhere.
SpMat assemble_boundary_mass(const mesh::SurfaceMesh& m, const BoundaryConditionMap& bc);

/// Alternative assembly route carrying the conformal factor through the
/// metric terms explicitly; agrees with assemble_stiffness to rounding and
/// exists as a cross-check of conformal invariance.
SpMat assemble_stiffness_metric(const mesh::SurfaceMesh& m);

struct SpectrumResult {
    std::vector<double> eigenvalues;       // sorted, zero-floored
    Eigen::MatrixXd boundary_traces;       // (#steklov nodes) x count, M-orthonormal
    std::vector<int> steklov_nodes;        // global vertex id per trace row
    Eigen::MatrixXd interior_values;       // (#vertices) x count, full nodal vectors
    std::vector<double> residuals;         // ||S u - sigma M u||_2 per pair
    std::vector<int> cluster;              // cluster index per eigenvalue (1e-9 relative)
    double mesh_h = 0.0;
    int num_vertices = 0;
    int num_steklov_nodes = 0;
    int num_eliminated = 0;
};

/// Boundary-reduced Steklov solve: eliminates interior and Neumann degrees
/// of freedom by a Schur complement onto the Steklov-boundary nodes (the
/// discrete Dirichlet-to-Neumann operator) and solves the dense symmetric
/// generalized problem against the boundary mass. Dirichlet nodes are
/// eliminated as constraints.
SpectrumResult solve_steklov(const mesh::SurfaceMesh& m, const BoundaryConditionMap& bc,
                             int count);

/// (stiffness quadratic form) / (Steklov boundary mass quadratic form).
double rayleigh_quotient(const mesh::SurfaceMesh& m, const BoundaryConditionMap& bc,
                         const Eigen::VectorXd& nodal);

// --- model spectra on collars (oracles) ---

struct ModeValue {
    int n = 0;        // Fourier index along the core
    int parity = 0;   // cylinders: 0 even, 1 odd in t; half-collars: unused
    double sigma = 0.0;
};

enum class FarCondition { neumann, dirichlet };

/// Closed-form Steklov spectrum of the half-collar [0, tube] x S^1 with the
/// Steklov condition on the core circle and the given condition on the far
/// circle. Neumann: sigma_n = mu tanh(mu tau), Dirichlet: sigma_0 = 1/tau,
/// sigma_n = mu coth(mu tau), with mu = 2 pi n / L and tau = gd(tube(L)).
/// Modes n >= 1 are doubly degenerate; the list is sorted by n.
std::vector<ModeValue> halfcollar_model_spectrum(double core_length, FarCondition far,
                                                 int n_max);

/// Steklov spectrum of the full collar [-tube, tube] x S^1 with Steklov on
/// both circles, computed mode by mode with the shooting oracle (which is
/// the definition here); split by parity in t.
std::vector<ModeValue> cylinder_model_spectrum(double core_length, int n_max);

/// 1D shooting oracle: integrates (cosh t u')' = mu^2 u / cosh t across the
/// collar with RK4 and returns the Steklov value at the core (half-collar
/// with the given far condition) or at the far circle (cylinder parity
/// problems). Step count is chosen for ~1e-12 relative accuracy.
double shoot_halfcollar_sigma(double core_length, int n, FarCondition far);
double shoot_cylinder_sigma(double core_length, int n, int parity);

}  // namespace steklab::steklov
