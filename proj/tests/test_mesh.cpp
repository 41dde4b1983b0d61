#include <doctest.h>

#include <cmath>
#include <set>

#include "steklab/errors.hpp"
#include "steklab/mesh.hpp"
#include "steklab/topology.hpp"

using namespace steklab;
using mesh::SurfaceMesh;

namespace {
double order_estimate(const std::vector<double>& errs) {
    // least-squares slope of log err against refinement level (h halves)
    std::vector<double> xs, ys;
    for (size_t i = 0; i < errs.size(); ++i) {
        if (errs[i] <= 1e-14) continue;
        xs.push_back(static_cast<double>(i));
        ys.push_back(std::log2(errs[i]));
    }
    if (xs.size() < 2) return 10.0;  // errors at rounding level
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}
}  // namespace

TEST_CASE("half-collar strip mesh basics") {
    double l = 2.0 * std::asinh(1.0);
    auto m = mesh::mesh_half_collar(l, 0.1);
    m.validate();
    CHECK(m.boundary_cycle_count() == 2);
    CHECK(m.euler_characteristic() == 0);  // annulus
    auto lens = m.measured_boundary_lengths();
    // cuff circles lie on conformal-factor-1 lines: lengths are exact
    CHECK(std::abs(lens[0] - l) < 1e-12 * l);
    CHECK(std::abs(lens[1] - m.boundary_ref_length[1]) < 1e-10 * lens[1]);
    CHECK(lens[0] == doctest::Approx(l).epsilon(0.01));  // the stated 1% contract

    double w = hypgeom::tube_width(l);
    CHECK(m.total_area() == doctest::Approx(l * std::sinh(w)).epsilon(1e-3));
}

TEST_CASE("refine quadruples triangles and doubles boundary edges") {
    auto m = mesh::mesh_half_collar(1.0, 0.2);
    auto r = mesh::refine(m);
    CHECK(r.tris.size() == 4 * m.tris.size());
    CHECK(r.bedges.size() == 2 * m.bedges.size());
    CHECK(r.num_boundary_components() == m.num_boundary_components());
    CHECK(r.boundary_cycle_count() == m.boundary_cycle_count());
    auto r2 = mesh::refine(r);
    CHECK(r2.tris.size() == 16 * m.tris.size());
}

TEST_CASE("cylinder mesh symmetry") {
    auto m = mesh::mesh_cylinder(1.0, 0.15);
    m.validate();
    CHECK(m.boundary_cycle_count() == 2);
    double w = hypgeom::tube_width(1.0);
    CHECK(m.total_area() == doctest::Approx(2.0 * std::sinh(w)).epsilon(1e-3));

    // reflection pairs: same s, opposite tau
    auto pairs = m.reflection_pairs(0);
    CHECK(pairs.size() >= 4);
    for (auto [a, b] : pairs) {
        CHECK(m.vpos[a].x() == doctest::Approx(m.vpos[b].x()).epsilon(1e-12));
        CHECK(m.vpos[a].y() == doctest::Approx(-m.vpos[b].y()).epsilon(1e-12));
    }
    // node set symmetric under s-rotation by half a period (mod the circle)
    std::set<std::pair<long, long>> keys;
    auto key = [&](double x, double y) {
        double xm = std::fmod(x, 1.0);
        if (xm < -1e-12) xm += 1.0;
        if (std::abs(xm - 1.0) < 1e-12) xm = 0.0;
        return std::make_pair(std::lround(xm * 1e9), std::lround(y * 1e9));
    };
    for (int v = 0; v < m.n_vertices; ++v) keys.insert(key(m.vpos[v].x(), m.vpos[v].y()));
    int mcols = m.cuffs[0].m;
    double ds = 1.0 / mcols;
    for (int v = 0; v < m.n_vertices; ++v) {
        mesh::Vec2 p = m.vpos[v];
        CHECK(keys.count(key(p.x() + (mcols / 2) * ds, p.y())) == 1);
    }

    auto r = mesh::refine(m);
    auto rp = r.reflection_pairs(0);
    CHECK(rp.size() == 2 * pairs.size());
}

TEST_CASE("four-holed sphere mesh: combinatorics and area convergence") {
    auto g = topo::make_four_holed_sphere(1.0, 0.5);
    auto m = mesh::mesh_surface(g, 0.22);
    m.validate();
    CHECK(m.boundary_cycle_count() == 4);
    CHECK(m.euler_characteristic() == -2);
    auto lens = m.measured_boundary_lengths();
    for (double L : lens) CHECK(L == doctest::Approx(1.0).epsilon(1e-12));

    double exact = 2.0 * M_PI * 2.0;
    std::vector<double> errs;
    SurfaceMesh cur = m;
    for (int r = 0; r < 3; ++r) {
        errs.push_back(std::abs(cur.total_area() - exact) / exact);
        if (r < 2) cur = mesh::refine(cur);
    }
    CHECK(errs.back() < 2e-3);
    CHECK(order_estimate(errs) >= 1.8);
}

TEST_CASE("four-holed sphere collar instrumentation") {
    auto g = topo::make_four_holed_sphere(1.0, 0.2);
    auto m = mesh::mesh_surface(g, 0.2);
    // exactly one interior cuff with a two-sided collar
    int interior = -1;
    for (size_t c = 0; c < m.cuffs.size(); ++c)
        if (m.cuffs[c].kind == mesh::CuffRecord::Kind::interior) interior = static_cast<int>(c);
    REQUIRE(interior >= 0);
    auto tri_ids = m.triangles_in_collar(interior);
    CHECK(!tri_ids.empty());
    // collar area matches the closed form 2 |gamma| sinh(tube)
    double w = hypgeom::tube_width(0.2);
    double area = 0.0;
    for (int t : tri_ids) area += m.triangle_hyp_area(t);
    CHECK(area == doctest::Approx(2.0 * 0.2 * std::sinh(w)).epsilon(5e-3));
    // no triangle belongs to two collars: region ids partition triangles
    auto pairs = m.reflection_pairs(interior);
    CHECK(!pairs.empty());
    for (auto [a, b] : pairs) CHECK(a != b);

    // core circle nodes lie on both pants' strip charts at y = 0
    const auto& cuff = m.cuffs[interior];
    CHECK(static_cast<int>(cuff.core_nodes.size()) == 2 * cuff.m);
}

TEST_CASE("one-holed torus and ring meshes stay orientable") {
    auto t1 = topo::make_ring(1, {1.2}, {0.9});
    auto m1 = mesh::mesh_surface(t1, 0.25);
    m1.validate();
    CHECK(m1.euler_characteristic() == -1);
    CHECK(m1.boundary_cycle_count() == 1);
    CHECK(m1.total_area() == doctest::Approx(2.0 * M_PI).epsilon(2e-2));

    auto r3 = topo::make_ring(3, {1.0, 1.0, 1.0}, {0.8, 0.8, 0.8});
    auto m3 = mesh::mesh_surface(r3, 0.25);
    m3.validate();
    CHECK(m3.euler_characteristic() == -3);
    CHECK(m3.boundary_cycle_count() == 3);
}

TEST_CASE("five-holed sphere chain meshes") {
    auto g = topo::make_sphere_chain({1, 1, 1, 1, 1}, {0.3, 0.4});
    auto m = mesh::mesh_surface(g, 0.25);
    m.validate();
    CHECK(m.boundary_cycle_count() == 5);
    CHECK(m.euler_characteristic() == -3);
}

TEST_CASE("mesh rejects bad input") {
    auto g = topo::make_four_holed_sphere(1.0, 0.5);
    CHECK_THROWS_AS(mesh::mesh_surface(g, 2.0), DomainError);
    CHECK_THROWS_AS(mesh::mesh_surface(g, 1e-4), DomainError);
    CHECK_THROWS_AS(mesh::mesh_surface(g, 0.2, 100), CapacityError);
    auto cusped = topo::canonical_pants_graph({0, 3, 1});
    CHECK_THROWS_AS(mesh::mesh_surface(cusped, 0.2), StructuralError);
    // chart degeneration reported with the offending lengths
    CHECK_THROWS_AS(hypgeom::pants_from_boundary_lengths(80.0, 80.0, 80.0), GeometricError);
    CHECK_THROWS_AS(mesh::mesh_half_collar(1e-8, 0.1), DomainError);
}

TEST_CASE("disk-chart half-collar: boundary length converges at order 2") {
    double l = 2.0 * std::asinh(1.0);
    auto m = mesh::mesh_half_collar_disk(l, 0.15);
    m.validate();
    CHECK(m.boundary_cycle_count() == 2);
    std::vector<double> errs_core, errs_far;
    SurfaceMesh cur = m;
    for (int r = 0; r < 3; ++r) {
        auto lens = cur.measured_boundary_lengths();
        errs_core.push_back(std::abs(lens[0] - m.boundary_ref_length[0]) / l);
        errs_far.push_back(std::abs(lens[1] - m.boundary_ref_length[1]) /
                           m.boundary_ref_length[1]);
        if (r < 2) cur = mesh::refine(cur);
    }
    CHECK(errs_core[0] < 0.01);  // within 1% already at the initial mesh
    CHECK(order_estimate(errs_core) >= 1.8);
    CHECK(order_estimate(errs_far) >= 1.8);
    double w = hypgeom::tube_width(l);
    CHECK(cur.total_area() == doctest::Approx(l * std::sinh(w)).epsilon(5e-3));
}

TEST_CASE("export/import round trip is byte exact") {
    auto g = topo::make_four_holed_sphere(1.0, 0.4);
    auto m = mesh::mesh_surface(g, 0.3);
    std::string text = export_mesh_text(m);
    auto imported = mesh::import_mesh_text(text);
    std::string text2 = export_mesh_text(imported);
    CHECK(text == text2);
    CHECK(imported.n_vertices == m.n_vertices);
    CHECK(imported.tris.size() == m.tris.size());
    CHECK(imported.total_area() == doctest::Approx(m.total_area()).epsilon(1e-15));
    CHECK_THROWS_AS(mesh::import_mesh_text("garbage"), ParseError);
}

TEST_CASE("refinement keeps boundary length exact on strip cuffs") {
    auto g = topo::make_four_holed_sphere(1.0, 0.3);
    auto m = mesh::mesh_surface(g, 0.25);
    auto r = mesh::refine(m);
    auto lens = r.measured_boundary_lengths();
    for (double L : lens) CHECK(L == doctest::Approx(1.0).epsilon(1e-12));
    // collar areas still match after refinement
    for (size_t c = 0; c < r.cuffs.size(); ++c) {
        if (r.cuffs[c].kind != mesh::CuffRecord::Kind::interior) continue;
        double area = 0.0;
        for (int t : r.triangles_in_collar(static_cast<int>(c)))
            area += r.triangle_hyp_area(t);
        double w = r.cuffs[c].width;
        CHECK(area == doctest::Approx(2.0 * r.cuffs[c].length * std::sinh(w)).epsilon(2e-3));
    }
}
