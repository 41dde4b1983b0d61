#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "steklab/errors.hpp"
#include "steklab/topology.hpp"

using namespace steklab;
using namespace steklab::topo;

TEST_CASE("euler number") {
    CHECK(euler_number({0, 4, 0}) == -2);
    CHECK(euler_number({1, 2, 0}) == -2);
    CHECK(euler_number({0, 3, 0}) == -1);
}

TEST_CASE("k_max table") {
    CHECK(k_max({0, 4, 0}) == 1);
    CHECK(k_max({1, 2, 0}) == 1);
    CHECK(k_max({0, 3, 1}) == 1);
    CHECK(k_max({2, 6, 2}) == 5);
    CHECK(k_max({0, 6, 0}) == 3);
    CHECK(k_max({0, 6, 1}) == 4);
    CHECK(k_max({0, 3, 0}) == 0);
    CHECK(k_max({0, 2, 1}) == 0);
    CHECK_THROWS_AS(k_max({0, 2, 0}), DomainError);  // chi = 0
    CHECK_THROWS_AS(k_max({0, 1, 0}), DomainError);  // chi = 1
    CHECK_THROWS_AS(k_max({0, 1, 1}), DomainError);  // chi = 0
    CHECK_THROWS_AS(k_max({1, 0, 0}), DomainError);  // no boundary
}

TEST_CASE("ck_status reproduces the separating-system table") {
    CHECK(ck_status({0, 3, 0}, 1) == CkStatus::empty);
    CHECK(ck_status({0, 2, 1}, 1) == CkStatus::empty);
    for (int b = 3; b <= 6; ++b) {
        CHECK(ck_status({0, b, 1}, b - 2) == CkStatus::nonempty);
        CHECK(ck_status({0, b, 1}, b - 1) == CkStatus::empty);
    }
    for (int b = 4; b <= 6; ++b) {
        CHECK(ck_status({0, b, 0}, b - 3) == CkStatus::nonempty);
        CHECK(ck_status({0, b, 0}, b - 2) == CkStatus::empty);
    }
    for (int g = 1; g <= 2; ++g)
        for (int b = 2; b <= 6; ++b) CHECK(ck_status({g, b, 0}, b - 1) == CkStatus::nonempty);
    // C_b is empty for any signature
    for (int g = 0; g <= 2; ++g)
        for (int b = 1; b <= 6; ++b)
            for (int p = 0; p <= 2; ++p) {
                Signature s{g, b, p};
                if (euler_number(s) >= 0) continue;
                CHECK(ck_status(s, b) == CkStatus::empty);
            }
    CHECK_THROWS_AS(ck_status({0, 4, 0}, 0), DomainError);
}

TEST_CASE("graph builders and signatures") {
    auto four = make_four_holed_sphere(1.0, 0.5);
    CHECK(four.signature() == Signature{0, 4, 0});
    CHECK(four.alpha() == 1.0);
    CHECK(four.beta() == 1.0);
    CHECK(four.connected());

    auto chain5 = make_sphere_chain({1, 1, 1, 1, 1}, {0.3, 0.4});
    CHECK(chain5.signature() == Signature{0, 5, 0});

    auto torus1 = make_ring(1, {1.0}, {0.7});
    CHECK(torus1.signature() == Signature{1, 1, 0});

    auto ring4 = make_ring(4, {1, 1, 1, 1}, {0.5, 0.5, 0.5, 0.5});
    CHECK(ring4.signature() == Signature{1, 4, 0});
}

TEST_CASE("enumeration on small graphs") {
    auto four = make_four_holed_sphere(1.0, 0.2);
    auto mcs = enumerate_separating_multicurves(four, 1);
    REQUIRE(mcs.size() == 1);
    CHECK(mcs[0].curves == std::vector<int>{0});
    CHECK(mcs[0].total_length == doctest::Approx(0.2));
    REQUIRE(mcs[0].components_after_cut.size() == 2);
    for (const auto& c : mcs[0].components_after_cut) CHECK(c.boundary_labels.size() == 2);

    auto chain5 = make_sphere_chain({1, 1, 1, 1, 1}, {0.3, 0.4});
    auto m2 = enumerate_separating_multicurves(chain5, 2);
    REQUIRE(m2.size() == 1);
    CHECK(m2[0].curves.size() == 2);
    CHECK(m2[0].total_length == doctest::Approx(0.7));

    // one-holed torus: single boundary, so no separating system exists
    auto torus1 = make_ring(1, {1.0}, {0.7});
    CHECK(enumerate_separating_multicurves(torus1, 1).empty());
}

TEST_CASE("ell_k values and epsilon restriction") {
    auto four = make_four_holed_sphere(1.0, 0.2);
    CHECK(ell_k(four, 1) == doctest::Approx(0.2));

    auto chain5 = make_sphere_chain({1, 1, 1, 1, 1}, {0.3, 0.4});
    CHECK(ell_k(chain5, 1) == doctest::Approx(0.3));
    CHECK(ell_k(chain5, 2) == doctest::Approx(0.7));
    CHECK(std::isinf(ell_k(chain5, 3)));

    auto four_long = make_four_holed_sphere(1.0, 1.9);
    CHECK(std::isinf(ell_k(four_long, 1, std::asinh(1.0))));
    CHECK(ell_k(four_long, 1) == doctest::Approx(1.9));
}

TEST_CASE("enumeration capacity cap is explicit") {
    auto big = make_ring(21, std::vector<double>(21, 1.0), std::vector<double>(21, 0.5));
    CHECK_THROWS_AS(enumerate_separating_multicurves(big, 1), CapacityError);
}

// Independent brute force: rebuilds adjacency per subset and BFS-labels
// components, sharing no code with the library path.
namespace {
struct BruteResult {
    std::set<std::vector<int>> subsets;
};
BruteResult brute_force_separating(const PantsGraph& g, int k) {
    BruteResult out;
    int E = g.num_edges(), P = g.num_pants();
    for (unsigned mask = 0; mask < (1u << E); ++mask) {
        std::vector<std::vector<int>> adj(P);
        for (int e = 0; e < E; ++e) {
            if (mask & (1u << e)) continue;
            adj[g.edges[e].end1.pants].push_back(g.edges[e].end2.pants);
            adj[g.edges[e].end2.pants].push_back(g.edges[e].end1.pants);
        }
        std::vector<int> label(P, -1);
        int nc = 0;
        for (int s = 0; s < P; ++s) {
            if (label[s] >= 0) continue;
            std::vector<int> stack{s};
            label[s] = nc;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (int w : adj[v])
                    if (label[w] < 0) {
                        label[w] = nc;
                        stack.push_back(w);
                    }
            }
            ++nc;
        }
        if (nc != k + 1) continue;
        std::vector<int> nb(nc, 0);
        for (const auto& bl : g.boundaries) nb[label[bl.at.pants]]++;
        if (std::any_of(nb.begin(), nb.end(), [](int n) { return n == 0; })) continue;
        std::vector<int> subset;
        for (int e = 0; e < E; ++e)
            if (mask & (1u << e)) subset.push_back(e);
        out.subsets.insert(subset);
    }
    return out;
}
}  // namespace

TEST_CASE("enumeration matches an independent brute force on small graphs") {
    std::vector<PantsGraph> graphs;
    graphs.push_back(make_four_holed_sphere(1.0, 0.2));
    graphs.push_back(make_sphere_chain({1, 1, 1, 1, 1, 1}, {0.3, 0.4, 0.5}));
    graphs.push_back(make_ring(4, {1, 1, 1, 1}, {0.5, 0.6, 0.7, 0.8}));
    graphs.push_back(canonical_pants_graph({2, 2, 0}));
    graphs.push_back(canonical_pants_graph({1, 3, 1}));
    for (const auto& g : graphs) {
        REQUIRE(g.num_edges() <= 6);
        for (int k = 1; k <= g.num_boundaries(); ++k) {
            auto lib = enumerate_separating_multicurves(g, k);
            auto ref = brute_force_separating(g, k);
            CHECK(lib.size() == ref.subsets.size());
            for (const auto& mc : lib) CHECK(ref.subsets.count(mc.curves) == 1);
        }
    }
}

TEST_CASE("dropping a two-component merge curve from a C_{k+1} system") {
    auto g = make_sphere_chain({1, 1, 1, 1, 1, 1}, {0.3, 0.4, 0.5});
    for (int k = 1; k + 1 <= 3; ++k) {
        auto upper = enumerate_separating_multicurves(g, k + 1);
        for (const auto& mc : upper) {
            for (int dropped : mc.curves) {
                std::vector<int> rest;
                for (int c : mc.curves)
                    if (c != dropped) rest.push_back(c);
                int nc = 0;
                g.components_without(rest, &nc);
                if (nc != k + 1) continue;  // dropping it does not merge exactly two
                // the reduced system is a valid, strictly shorter C_k member
                auto reduced = enumerate_separating_multicurves(g, k);
                bool found = false;
                double len = 0;
                for (int c : rest) len += g.edges[c].length;
                for (const auto& r : reduced)
                    if (r.curves == rest) found = true;
                CHECK(found);
                CHECK(len < mc.total_length);
            }
        }
    }
}

TEST_CASE("canonical graphs witness the full separating range") {
    for (int g = 0; g <= 2; ++g) {
        for (int b = 1; b <= 6; ++b) {
            for (int p = 0; p <= 2; ++p) {
                Signature sig{g, b, p};
                if (euler_number(sig) >= 0) continue;
                auto graph = canonical_pants_graph(sig, 1.0, 0.5);
                CHECK(graph.signature() == sig);
                int K = k_max(sig);
                for (int k = 1; k <= b; ++k) {
                    bool finite = std::isfinite(ell_k(graph, k));
                    bool expected = (k <= K);
                    INFO("signature (", g, ",", b, ";", p, ") k=", k);
                    CHECK(finite == expected);
                }
            }
        }
    }
}

TEST_CASE("graph validation catches broken structures") {
    auto g = make_four_holed_sphere(1.0, 0.5);
    auto bad = g;
    bad.edges[0].length = -1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    auto bad2 = g;
    bad2.boundaries[0].length = 0.0;
    CHECK_THROWS_AS(bad2.validate(), DomainError);
    auto bad3 = g;
    bad3.pants[0][2] = {CuffType::glued, 4, 0.0};
    CHECK_THROWS_AS(bad3.validate(), StructuralError);
}
