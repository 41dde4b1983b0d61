#include <doctest.h>

#include <cmath>
#include <random>

#include "steklab/errors.hpp"
#include "steklab/mesh.hpp"
#include "steklab/steklov.hpp"
#include "steklab/topology.hpp"

using namespace steklab;
using namespace steklab::steklov;

TEST_CASE("stiffness kernel is the constants") {
    auto g = topo::make_four_holed_sphere(1.0, 0.4);
    auto m = mesh::mesh_surface(g, 0.3);
    auto S = assemble_stiffness(m);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.n_vertices);
    CHECK((S * ones).lpNorm<Eigen::Infinity>() < 1e-12 * S.coeffs().abs().maxCoeff());
}

TEST_CASE("metric-carrying assembly agrees with the flat one") {
    auto m = mesh::mesh_half_collar_disk(1.0, 0.2);
    auto S1 = assemble_stiffness(m);
    auto S2 = assemble_stiffness_metric(m);
    Eigen::VectorXd x(m.n_vertices);
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < m.n_vertices; ++i) x(i) = u(rng);
    double q1 = x.dot(S1 * x), q2 = x.dot(S2 * x);
    CHECK(std::abs(q1 - q2) <= 1e-12 * std::max(1.0, std::abs(q1)));
}

TEST_CASE("rescaled chart leaves Rayleigh quotients unchanged") {
    // the same triangulated geometry written in a dilated and rotated disk
    // chart with the matching conformal factor
    auto m = mesh::mesh_half_collar_disk(1.0, 0.2);
    auto m2 = m;
    double k = 1.7, th = 0.3;
    m2.charts[0].radius = k;
    Eigen::Rotation2D<double> rot(th);
    for (auto& t : m2.tris)
        for (int e = 0; e < 3; ++e) t.p[e] = k * (rot * t.p[e]);
    for (auto& e : m2.bedges) {
        e.p[0] = k * (rot * e.p[0]);
        e.p[1] = k * (rot * e.p[1]);
    }
    BoundaryConditionMap bc;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int rep = 0; rep < 5; ++rep) {
        Eigen::VectorXd x(m.n_vertices);
        for (int i = 0; i < m.n_vertices; ++i) x(i) = u(rng);
        double q1 = rayleigh_quotient(m, bc, x);
        double q2 = rayleigh_quotient(m2, bc, x);
        CHECK(std::abs(q1 - q2) <= 1e-10 * std::max(1.0, std::abs(q1)));
    }
}

TEST_CASE("energy of the linear Fermi profile on a half-collar") {
    double l = 2.0 * std::asinh(1.0);
    auto m = mesh::mesh_half_collar(l, 0.05);
    double tau_w = hypgeom::gudermannian(hypgeom::tube_width(l));
    Eigen::VectorXd f(m.n_vertices);
    for (int v = 0; v < m.n_vertices; ++v) f(v) = m.vpos[v].y() / tau_w;
    auto S = assemble_stiffness(m);
    double energy = f.dot(S * f);
    CHECK(energy == doctest::Approx(l / tau_w).epsilon(1e-10));  // exact for P1 in tau
}

TEST_CASE("boundary mass basics") {
    double l = 1.3;
    auto m = mesh::mesh_half_collar(l, 0.1);
    BoundaryConditionMap bc;  // all Steklov
    auto M = assemble_boundary_mass(m, bc);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.n_vertices);
    double far = l * std::cosh(hypgeom::tube_width(l));
    CHECK(ones.dot(M * ones) == doctest::Approx(l + far).epsilon(1e-10));

    BoundaryConditionMap bc2;
    bc2.by_name["far"] = Condition::neumann;
    auto M2 = assemble_boundary_mass(m, bc2);
    CHECK(ones.dot(M2 * ones) == doctest::Approx(l).epsilon(1e-12));
    // Neumann rows are zero
    auto far_nodes = m.boundary_nodes(1);
    for (auto [v, s] : far_nodes) {
        (void)s;
        CHECK(Eigen::VectorXd(M2.row(v)).lpNorm<Eigen::Infinity>() == 0.0);
    }
    BoundaryConditionMap bad;
    bad.by_name["core"] = Condition::neumann;
    bad.by_name["far"] = Condition::dirichlet;
    CHECK_THROWS_AS(assemble_boundary_mass(m, bad), DomainError);

    // quadratic form on 1 converges to the boundary length at order 2
    // (curved-chart variant has a genuine discretization error)
    auto md = mesh::mesh_half_collar_disk(l, 0.2);
    std::vector<double> errs;
    for (int r = 0; r < 3; ++r) {
        auto Md = assemble_boundary_mass(md, bc);
        Eigen::VectorXd e = Eigen::VectorXd::Ones(md.n_vertices);
        errs.push_back(std::abs(e.dot(Md * e) - (l + far)));
        if (r < 2) md = mesh::refine(md);
    }
    CHECK(errs[1] < 0.35 * errs[0]);
    CHECK(errs[2] < 0.35 * errs[1]);
}

TEST_CASE("half-collar model spectrum against the shooting oracle") {
    // frozen values
    double l0 = 2.0 * std::asinh(1.0);
    auto neu = halfcollar_model_spectrum(l0, FarCondition::neumann, 2);
    CHECK(neu[0].sigma == 0.0);
    CHECK(neu[1].sigma == doctest::Approx(3.5381371073436507).epsilon(1e-12));
    auto dir = halfcollar_model_spectrum(1.0, FarCondition::dirichlet, 1);
    CHECK(dir[0].sigma == doctest::Approx(0.9170818201092667).epsilon(1e-12));
    CHECK(dir[0].sigma ==
          doctest::Approx(1.0 / std::atan(1.0 / std::sinh(0.5))).epsilon(1e-13));
    CHECK(shoot_halfcollar_sigma(1.0, 0, FarCondition::dirichlet) ==
          doctest::Approx(dir[0].sigma).epsilon(1e-10));

    // the closed forms agree with the ODE to 1e-10 over random samples
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> len(0.8, 3.5);
    std::uniform_int_distribution<int> mode(0, 4);
    for (int it = 0; it < 20; ++it) {
        double l = len(rng);
        int n = mode(rng);
        FarCondition far = (it % 2 == 0) ? FarCondition::neumann : FarCondition::dirichlet;
        double closed = halfcollar_model_spectrum(l, far, n)[n].sigma;
        double shot = shoot_halfcollar_sigma(l, n, far);
        CHECK(std::abs(closed - shot) <= 1e-10 * std::max(1.0, std::abs(closed)));
    }
    CHECK_THROWS_AS(halfcollar_model_spectrum(-1.0, FarCondition::neumann, 1), DomainError);
}

TEST_CASE("cylinder model spectrum: oracle values and closed form") {
    auto modes = cylinder_model_spectrum(1.0, 2);
    REQUIRE(modes.size() == 6);
    CHECK(modes[0].sigma == 0.0);  // even n=0, exactly once
    for (size_t i = 1; i < modes.size(); ++i) CHECK(modes[i].sigma > 0.0);
    // increasing in n at fixed parity
    for (int parity = 0; parity < 2; ++parity) {
        double prev = -1.0;
        for (const auto& mv : modes)
            if (mv.parity == parity) {
                CHECK(mv.sigma > prev);
                prev = mv.sigma;
            }
    }
    // frozen oracle values at core length 1
    CHECK(modes[1].sigma == doctest::Approx(0.4237992436837300).epsilon(1e-10));  // odd n=0
    CHECK(modes[2].sigma == doctest::Approx(2.9035612311799416).epsilon(1e-10));  // even n=1
    CHECK(modes[3].sigma == doctest::Approx(2.9035742342179996).epsilon(1e-10));  // odd n=1

    // separation-of-variables closed form must match the oracle to 1e-10
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> len(0.8, 3.0);
    for (int it = 0; it < 8; ++it) {
        double l = len(rng);
        double w = hypgeom::tube_width(l);
        double tau = hypgeom::gudermannian(w);
        double sw = 1.0 / std::cosh(w);
        for (int n = 0; n <= 3; ++n) {
            double mu = 2.0 * M_PI * n / l;
            double even = n == 0 ? 0.0 : sw * mu * std::tanh(mu * tau);
            double odd = n == 0 ? sw / tau : sw * mu / std::tanh(mu * tau);
            CHECK(std::abs(shoot_cylinder_sigma(l, n, 0) - even) <=
                  1e-10 * std::max(1.0, even));
            CHECK(std::abs(shoot_cylinder_sigma(l, n, 1) - odd) <= 1e-10 * std::max(1.0, odd));
        }
    }
}

TEST_CASE("FEM matches the half-collar closed form") {
    double l = 2.0 * std::asinh(1.0);
    auto m = mesh::mesh_half_collar(l, 0.1);
    m = mesh::refine(m);
    m = mesh::refine(m);
    BoundaryConditionMap bc;
    bc.by_name["far"] = Condition::neumann;
    auto res = solve_steklov(m, bc, 3);
    double exact = halfcollar_model_spectrum(l, FarCondition::neumann, 1)[1].sigma;
    CHECK(res.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(res.eigenvalues[1] == doctest::Approx(exact).epsilon(0.01));
    CHECK(res.eigenvalues[2] == doctest::Approx(exact).epsilon(0.01));  // double mode
}

TEST_CASE("FEM matches the cylinder oracle for the first modes") {
    auto m = mesh::mesh_cylinder(1.0, 0.1);
    m = mesh::refine(m);
    m = mesh::refine(m);
    BoundaryConditionMap bc;
    auto res = solve_steklov(m, bc, 5);
    auto modes = cylinder_model_spectrum(1.0, 2);
    std::vector<double> exact;
    for (const auto& mv : modes) {
        exact.push_back(mv.sigma);
        if (mv.n >= 1) exact.push_back(mv.sigma);  // cos and sin modes
    }
    std::sort(exact.begin(), exact.end());
    for (int k = 0; k < 5; ++k) {
        if (exact[k] == 0.0)
            CHECK(res.eigenvalues[k] == doctest::Approx(0.0).epsilon(1e-9));
        else
            CHECK(res.eigenvalues[k] == doctest::Approx(exact[k]).epsilon(0.01));
    }
}

TEST_CASE("pure Steklov solve: contract checks on the four-holed sphere") {
    auto g = topo::make_four_holed_sphere(1.0, 0.3);
    auto m = mesh::mesh_surface(g, 0.25);
    m = mesh::refine(m);
    BoundaryConditionMap bc;
    auto res = solve_steklov(m, bc, 6);
    // sigma_0 = 0 with constant trace
    CHECK(res.eigenvalues[0] <= 1e-8 * std::max(1.0, res.eigenvalues[1]));
    double mx = res.boundary_traces.col(0).maxCoeff();
    double mn = res.boundary_traces.col(0).minCoeff();
    double mean = res.boundary_traces.col(0).mean();
    CHECK(std::abs(mx - mn) <= 1e-6 * std::abs(mean));
    // sorted, non-negative, residuals in contract
    for (size_t k = 0; k + 1 < res.eigenvalues.size(); ++k)
        CHECK(res.eigenvalues[k] <= res.eigenvalues[k + 1]);
    for (double r : res.residuals) CHECK(r <= 1e-8);
    // trace orthogonality in the discrete boundary inner product
    auto M = assemble_boundary_mass(m, bc);
    Eigen::MatrixXd Mbb(res.num_steklov_nodes, res.num_steklov_nodes);
    for (int i = 0; i < res.num_steklov_nodes; ++i)
        for (int j = 0; j < res.num_steklov_nodes; ++j)
            Mbb(i, j) = M.coeff(res.steklov_nodes[i], res.steklov_nodes[j]);
    Eigen::MatrixXd G = res.boundary_traces.transpose() * Mbb * res.boundary_traces;
    for (int i = 0; i < G.rows(); ++i)
        for (int j = 0; j < G.cols(); ++j)
            CHECK(std::abs(G(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-8);

    // degeneration: the explicit all-Steklov map equals the default
    BoundaryConditionMap explicit_bc;
    for (const auto& name : m.boundary_names) explicit_bc.by_name[name] = Condition::steklov;
    auto res2 = solve_steklov(m, bc, 4);
    auto res3 = solve_steklov(m, explicit_bc, 4);
    for (int k = 0; k < 4; ++k)
        CHECK(res2.eigenvalues[k] == doctest::Approx(res3.eigenvalues[k]).epsilon(1e-14));
}

TEST_CASE("rayleigh quotient properties") {
    auto g = topo::make_four_holed_sphere(1.0, 0.3);
    auto m = mesh::mesh_surface(g, 0.3);
    BoundaryConditionMap bc;
    auto res = solve_steklov(m, bc, 4);

    Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.n_vertices);
    CHECK(rayleigh_quotient(m, bc, ones) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rayleigh_quotient(m, bc, res.interior_values.col(1)) ==
          doctest::Approx(res.eigenvalues[1]).epsilon(1e-8));

    // boundary-mean-zero functions sit above sigma_1
    auto M = assemble_boundary_mass(m, bc);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int rep = 0; rep < 10; ++rep) {
        Eigen::VectorXd x(m.n_vertices);
        for (int i = 0; i < m.n_vertices; ++i) x(i) = u(rng);
        double a = ones.dot(M * x) / ones.dot(M * ones);
        x -= a * ones;
        if (x.dot(M * x) < 1e-12) continue;
        CHECK(rayleigh_quotient(m, bc, x) >= res.eigenvalues[1] - 1e-8);
    }
    CHECK_THROWS_AS(rayleigh_quotient(m, bc, Eigen::VectorXd::Zero(m.n_vertices)), DomainError);
}

TEST_CASE("discrete min-max over random subspaces") {
    auto g = topo::make_four_holed_sphere(1.0, 0.3);
    auto m = mesh::mesh_surface(g, 0.3);
    BoundaryConditionMap bc;
    auto res = solve_steklov(m, bc, 6);
    auto S = assemble_stiffness(m);
    auto M = assemble_boundary_mass(m, bc);
    std::mt19937 rng(9);
    std::normal_distribution<double> gauss;
    for (int k = 1; k <= 5; ++k) {
        for (int rep = 0; rep < 4; ++rep) {
            Eigen::MatrixXd V(m.n_vertices, k + 1);
            for (int c = 0; c <= k; ++c)
                for (int r = 0; r < m.n_vertices; ++r) V(r, c) = gauss(rng);
            Eigen::MatrixXd Sv = V.transpose() * (S * V).eval();
            Eigen::MatrixXd Mv = V.transpose() * (M * V).eval();
            Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Sv, Mv);
            if (es.info() != Eigen::Success) continue;
            double maxrq = es.eigenvalues().maxCoeff();
            CHECK(maxrq >= res.eigenvalues[k] - 1e-8);
        }
    }
}

TEST_CASE("mixed conditions: Dirichlet elimination and smoke continuity") {
    double l = 1.0;
    auto m = mesh::mesh_half_collar(l, 0.1);
    m = mesh::refine(m);
    BoundaryConditionMap bc;
    bc.by_name["far"] = Condition::dirichlet;
    auto res = solve_steklov(m, bc, 2);
    double exact0 = halfcollar_model_spectrum(l, FarCondition::dirichlet, 0)[0].sigma;
    CHECK(res.eigenvalues[0] == doctest::Approx(exact0).epsilon(0.01));
    // ground state of the Steklov-Dirichlet problem is strictly positive
    CHECK(res.eigenvalues[0] > 0.1);

    // smoke: switching the far condition changes low eigenvalues but keeps
    // them finite, ordered and non-negative
    BoundaryConditionMap bn;
    bn.by_name["far"] = Condition::neumann;
    auto rn = solve_steklov(m, bn, 3);
    CHECK(rn.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rn.eigenvalues[1] < res.eigenvalues[1]);
}

TEST_CASE("dual-chart sigma agreement: strip vs disk realization") {
    double l = 1.0;
    auto ms = mesh::mesh_half_collar(l, 0.1);
    auto md = mesh::mesh_half_collar_disk(l, 0.1);
    ms = mesh::refine(ms);
    md = mesh::refine(md);
    BoundaryConditionMap bc;
    bc.by_name["far"] = Condition::neumann;
    auto rs = solve_steklov(ms, bc, 2);
    auto rd = solve_steklov(md, bc, 2);
    CHECK(rs.eigenvalues[1] == doctest::Approx(rd.eigenvalues[1]).epsilon(0.02));
}
