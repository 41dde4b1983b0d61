#include "steklab/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "steklab/errors.hpp"

namespace steklab::topo {

int euler_number(const Signature& sig) { return 2 - 2 * sig.g - sig.b - sig.p; }

int k_max(const Signature& sig) {
    if (sig.g < 0 || sig.b < 0 || sig.p < 0)
        throw DomainError("k_max: negative signature entry");
    if (euler_number(sig) >= 0)
        throw DomainError("k_max: signature does not admit a hyperbolic structure");
    if (sig.b < 1) throw DomainError("k_max: need at least one boundary component");
    if (sig.g >= 1 || sig.p >= 2) return sig.b - 1;
    if (sig.p == 1) return sig.b - 2;  // g = 0, b >= 2 given chi < 0
    return sig.b - 3;                  // g = p = 0, b >= 4 given chi < 0... b >= 3
}

CkStatus ck_status(const Signature& sig, int k) {
    if (k < 1) throw DomainError("ck_status: k must be >= 1");
    int K = k_max(sig);
    return (k <= K) ? CkStatus::nonempty : CkStatus::empty;
}

int PantsGraph::num_cusps() const {
    int n = 0;
    for (const auto& pa : pants)
        for (const auto& c : pa)
            if (c.type == CuffType::cusp) ++n;
    return n;
}

double PantsGraph::cuff_length(const CuffSlot& cs) const {
    const Cuff& c = pants.at(cs.pants).at(cs.slot);
    switch (c.type) {
        case CuffType::boundary: return boundaries.at(c.index).length;
        case CuffType::glued: return edges.at(c.index).length;
        case CuffType::cusp: return 0.0;
    }
    return 0.0;
}

Signature PantsGraph::signature() const {
    Signature s;
    s.b = num_boundaries();
    s.p = num_cusps();
    // first Betti number of the connected graph; cycles and self-loops add genus
    s.g = num_edges() - num_pants() + 1;
    return s;
}

double PantsGraph::alpha() const {
    double a = kInfiniteLength;
    for (const auto& b : boundaries) a = std::min(a, b.length);
    return a;
}

double PantsGraph::beta() const {
    double b = 0.0;
    for (const auto& bl : boundaries) b = std::max(b, bl.length);
    return b;
}

std::vector<int> PantsGraph::components_without(const std::vector<int>& removed_edges,
                                                int* n_comp) const {
    std::vector<char> removed(edges.size(), 0);
    for (int e : removed_edges) removed.at(e) = 1;
    std::vector<int> parent(pants.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (size_t e = 0; e < edges.size(); ++e) {
        if (removed[e]) continue;
        int a = find(edges[e].end1.pants), b = find(edges[e].end2.pants);
        if (a != b) parent[a] = b;
    }
    std::vector<int> comp(pants.size(), -1);
    int n = 0;
    for (size_t i = 0; i < pants.size(); ++i) {
        int r = find(static_cast<int>(i));
        if (comp[r] < 0) comp[r] = n++;
        comp[i] = comp[r];
    }
    if (n_comp) *n_comp = n;
    return comp;
}

bool PantsGraph::connected() const {
    if (pants.empty()) return false;
    int n = 0;
    components_without({}, &n);
    return n == 1;
}

void PantsGraph::validate() const {
    if (pants.empty()) throw StructuralError("pants graph: no pants");
    auto check_slot = [&](const CuffSlot& cs, const char* what) {
        if (cs.pants < 0 || cs.pants >= num_pants() || cs.slot < 0 || cs.slot > 2)
            throw StructuralError(std::string("pants graph: bad slot reference in ") + what);
    };
    // every glued cuff refers to exactly one edge endpoint and vice versa
    for (size_t e = 0; e < edges.size(); ++e) {
        const auto& ed = edges[e];
        check_slot(ed.end1, "edge");
        check_slot(ed.end2, "edge");
        if (ed.end1 == ed.end2) throw StructuralError("pants graph: edge glues a slot to itself");
        if (!(ed.length > 0) || !std::isfinite(ed.length))
            throw DomainError("pants graph: interior edge '" + ed.name + "' needs positive length");
        for (const CuffSlot* cs : {&ed.end1, &ed.end2}) {
            const Cuff& c = pants[cs->pants][cs->slot];
            if (c.type != CuffType::glued || c.index != static_cast<int>(e))
                throw StructuralError("pants graph: cuff/edge cross-reference mismatch");
        }
    }
    for (size_t b = 0; b < boundaries.size(); ++b) {
        const auto& bl = boundaries[b];
        check_slot(bl.at, "boundary");
        const Cuff& c = pants[bl.at.pants][bl.at.slot];
        if (c.type != CuffType::boundary || c.index != static_cast<int>(b))
            throw StructuralError("pants graph: boundary label cross-reference mismatch");
        if (!(bl.length > 0) || !std::isfinite(bl.length))
            throw DomainError("pants graph: boundary '" + bl.name + "' needs positive length");
    }
    for (int p = 0; p < num_pants(); ++p) {
        for (int s = 0; s < 3; ++s) {
            const Cuff& c = pants[p][s];
            if (c.type == CuffType::glued) {
                if (c.index < 0 || c.index >= num_edges())
                    throw StructuralError("pants graph: dangling glued cuff");
                const auto& ed = edges[c.index];
                CuffSlot me{p, s};
                if (!(ed.end1 == me) && !(ed.end2 == me))
                    throw StructuralError("pants graph: glued cuff not an endpoint of its edge");
            } else if (c.type == CuffType::boundary) {
                if (c.index < 0 || c.index >= num_boundaries())
                    throw StructuralError("pants graph: dangling boundary cuff");
            }
        }
    }
    if (!connected()) throw StructuralError("pants graph: not connected");
}

// --- builders ---

namespace {
Cuff boundary_cuff(int label) { return Cuff{CuffType::boundary, label, 0.0}; }
Cuff glued_cuff(int edge) { return Cuff{CuffType::glued, edge, 0.0}; }
}  // namespace

PantsGraph make_sphere_chain(const std::vector<double>& bl,
                             const std::vector<double>& il) {
    int b = static_cast<int>(bl.size());
    if (b < 4) throw DomainError("sphere chain needs at least 4 boundary components");
    if (static_cast<int>(il.size()) != b - 3)
        throw DomainError("sphere chain with b boundaries needs b-3 interior lengths");
    PantsGraph g;
    int n = b - 2;
    g.pants.resize(n);
    auto add_boundary = [&](int pants, int slot, int label) {
        g.pants[pants][slot] = boundary_cuff(label);
        g.boundaries.push_back({CuffSlot{pants, slot}, bl[label], "B" + std::to_string(label + 1)});
    };
    auto add_edge = [&](CuffSlot e1, CuffSlot e2, double len) {
        int id = g.num_edges();
        g.pants[e1.pants][e1.slot] = glued_cuff(id);
        g.pants[e2.pants][e2.slot] = glued_cuff(id);
        g.edges.push_back({e1, e2, len, "gamma" + std::to_string(id + 1)});
    };
    add_boundary(0, 0, 0);
    add_boundary(0, 1, 1);
    for (int i = 1; i < n - 1; ++i) add_boundary(i, 1, i + 1);
    add_boundary(n - 1, 1, b - 2);
    add_boundary(n - 1, 2, b - 1);
    for (int i = 0; i + 1 < n; ++i) add_edge({i, 2}, {i + 1, 0}, il[i]);
    g.validate();
    return g;
}

PantsGraph make_four_holed_sphere(double boundary_length, double interior_length) {
    return make_sphere_chain(std::vector<double>(4, boundary_length), {interior_length});
}

PantsGraph make_ring(int b, const std::vector<double>& bl, const std::vector<double>& rl) {
    if (b < 1) throw DomainError("ring needs b >= 1");
    if (static_cast<int>(bl.size()) != b || static_cast<int>(rl.size()) != b)
        throw DomainError("ring needs b boundary lengths and b ring lengths");
    PantsGraph g;
    g.pants.resize(b);
    if (b == 1) {
        // one pants with two cuffs self-glued: the one-holed torus
        g.pants[0][2] = boundary_cuff(0);
        g.boundaries.push_back({CuffSlot{0, 2}, bl[0], "B1"});
        g.pants[0][0] = glued_cuff(0);
        g.pants[0][1] = glued_cuff(0);
        g.edges.push_back({CuffSlot{0, 0}, CuffSlot{0, 1}, rl[0], "gamma1"});
    } else {
        for (int i = 0; i < b; ++i) {
            g.pants[i][2] = boundary_cuff(i);
            g.boundaries.push_back({CuffSlot{i, 2}, bl[i], "B" + std::to_string(i + 1)});
        }
        for (int i = 0; i < b; ++i) {
            int j = (i + 1) % b;
            g.pants[i][1] = glued_cuff(i);
            g.pants[j][0] = glued_cuff(i);
            g.edges.push_back({CuffSlot{i, 1}, CuffSlot{j, 0}, rl[i], "gamma" + std::to_string(i + 1)});
        }
    }
    g.validate();
    return g;
}

PantsGraph canonical_pants_graph(const Signature& sig, double boundary_length,
                                 double interior_length) {
    if (euler_number(sig) >= 0)
        throw DomainError("canonical_pants_graph: signature not hyperbolic");
    const int g = sig.g, b = sig.b, p = sig.p;
    const int n = 2 * g - 2 + b + p;  // pants count
    PantsGraph pg;
    pg.pants.resize(n);

    std::vector<char> used(static_cast<size_t>(n) * 3, 0);
    auto mark = [&](int pa, int sl) { used[pa * 3 + sl] = 1; };
    auto free_slot = [&](int pa) {
        for (int s = 0; s < 3; ++s)
            if (!used[pa * 3 + s]) return s;
        throw StructuralError("canonical_pants_graph: no free slot");
    };
    int next_edge_name = 0;
    auto add_edge = [&](int pa1, int pa2, double len) {
        int s1 = free_slot(pa1);
        mark(pa1, s1);
        int s2 = free_slot(pa2);
        mark(pa2, s2);
        int id = pg.num_edges();
        pg.pants[pa1][s1] = glued_cuff(id);
        pg.pants[pa2][s2] = glued_cuff(id);
        pg.edges.push_back({CuffSlot{pa1, s1}, CuffSlot{pa2, s2}, len,
                            "gamma" + std::to_string(++next_edge_name)});
    };
    // ends[i]: true = boundary, false = cusp; placement order decides which
    // pants carries which end.
    std::vector<bool> ends;
    auto place_end = [&](int pa, bool is_boundary) {
        int s = free_slot(pa);
        mark(pa, s);
        if (is_boundary) {
            int label = pg.num_boundaries();
            pg.pants[pa][s] = boundary_cuff(label);
            pg.boundaries.push_back({CuffSlot{pa, s}, boundary_length,
                                     "B" + std::to_string(label + 1)});
        } else {
            pg.pants[pa][s] = Cuff{CuffType::cusp, -1, 0.0};
        }
    };

    if (g == 0) {
        // Chain v0..v(n-1). End pants carry two ends each, interior pants one.
        // Cusps are pushed to the chain ends so the boundaries sit on distinct
        // pants whenever cusps allow it.
        for (int i = 0; i < p; ++i) ends.push_back(false);
        for (int i = 0; i < b; ++i) ends.push_back(true);
        if (p >= 2) {
            // one cusp at each end: [C, ...interleave..., C]
            std::vector<bool> seq;
            seq.push_back(false);
            for (int i = 0; i < b; ++i) seq.push_back(true);
            for (int i = 0; i < p - 1; ++i) seq.push_back(false);
            ends = seq;
        }
        for (int i = 0; i + 1 < n; ++i) add_edge(i, i + 1, interior_length);
        size_t e = 0;
        place_end(0, ends[e++]);
        place_end(0, ends[e++]);
        for (int i = 1; i < n - 1; ++i) place_end(i, ends[e++]);
        if (n > 1) {
            place_end(n - 1, ends[e++]);
            place_end(n - 1, ends[e++]);
        } else {
            place_end(0, ends[e++]);
        }
    } else {
        // Ring of b + p + 2(g-1) pants: the cycle carries one genus, each
        // adjacent leftover pair doubles into one more. Every boundary sits on
        // its own pants so all of them can be mutually separated.
        int nr = n;
        if (nr == 1) {
            // one-holed torus (g=1, b+p=1)
            place_end(0, b == 1);
            add_edge(0, 0, interior_length);
        } else {
            for (int i = 0; i + 1 < nr; ++i) add_edge(i, i + 1, interior_length);
            add_edge(nr - 1, 0, interior_length);
            for (int i = 0; i < b; ++i) place_end(i, true);
            for (int i = 0; i < p; ++i) place_end(b + i, false);
            int extra = nr - b - p;  // = 2(g-1), consecutive pairs get a doubling edge
            for (int i = 0; i + 1 < extra; i += 2)
                add_edge(b + p + i, b + p + i + 1, interior_length);
        }
    }
    pg.validate();
    if (!(pg.signature() == sig))
        throw StructuralError("canonical_pants_graph: realized signature mismatch");
    return pg;
}

// --- multicurve enumeration ---

std::vector<MultiCurve> enumerate_separating_multicurves(const PantsGraph& graph, int k) {
    graph.validate();
    if (k < 1) throw DomainError("enumerate_separating_multicurves: k must be >= 1");
    int E = graph.num_edges();
    if (E > kMaxEnumerableEdges)
        throw CapacityError("enumerate_separating_multicurves: " + std::to_string(E) +
                            " interior edges exceeds the exhaustive-enumeration cap of " +
                            std::to_string(kMaxEnumerableEdges));
    std::vector<MultiCurve> out;
    const int P = graph.num_pants();
    for (unsigned long mask = 0; mask < (1ul << E); ++mask) {
        std::vector<int> removed;
        for (int e = 0; e < E; ++e)
            if (mask & (1ul << e)) removed.push_back(e);
        int nc = 0;
        std::vector<int> comp = graph.components_without(removed, &nc);
        if (nc != k + 1) continue;
        std::vector<MultiCurve::Component> comps(nc);
        for (int i = 0; i < P; ++i) comps[comp[i]].pants.push_back(i);
        for (int bi = 0; bi < graph.num_boundaries(); ++bi)
            comps[comp[graph.boundaries[bi].at.pants]].boundary_labels.push_back(bi);
        bool all_have_boundary = std::all_of(comps.begin(), comps.end(), [](const auto& c) {
            return !c.boundary_labels.empty();
        });
        if (!all_have_boundary) continue;
        MultiCurve mc;
        mc.curves = removed;
        for (int e : removed) mc.total_length += graph.edges[e].length;
        mc.components_after_cut = std::move(comps);
        out.push_back(std::move(mc));
    }
    return out;
}

std::optional<MultiCurve> minimizing_multicurve(const PantsGraph& graph, int k,
                                                std::optional<double> epsilon) {
    auto all = enumerate_separating_multicurves(graph, k);
    std::optional<MultiCurve> best;
    for (auto& mc : all) {
        if (epsilon) {
            bool ok = std::all_of(mc.curves.begin(), mc.curves.end(), [&](int e) {
                return graph.edges[e].length <= 2.0 * (*epsilon);
            });
            if (!ok) continue;
        }
        if (!best || mc.total_length < best->total_length) best = mc;
    }
    return best;
}

double ell_k(const PantsGraph& graph, int k, std::optional<double> epsilon) {
    auto best = minimizing_multicurve(graph, k, epsilon);
    return best ? best->total_length : kInfiniteLength;
}

}  // namespace steklab::topo
