#include "steklab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "steklab/delaunay.hpp"
#include "steklab/errors.hpp"

namespace steklab::mesh {

using hyp::cplx;
using hypgeom::gudermannian;
using hypgeom::inverse_gudermannian;
using hypgeom::tube_width;

double ChartSpec::conformal_factor(const Vec2& p) const {
    if (kind == Kind::strip) return 1.0 / std::cos(p.y());
    double r2 = radius * radius;
    return 2.0 * radius / (r2 - p.squaredNorm());
}

namespace {

// Dunavant degree-4 rule on the reference triangle, weights summing to 1.
struct QuadPoint {
    double l1, l2, l3, w;
};
constexpr std::array<QuadPoint, 6> kTriQuad = {{
    {0.108103018168070, 0.445948490915965, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.108103018168070, 0.445948490915965, 0.223381589678011},
    {0.445948490915965, 0.445948490915965, 0.108103018168070, 0.223381589678011},
    {0.816847572980459, 0.091576213509771, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.816847572980459, 0.091576213509771, 0.109951743655322},
    {0.091576213509771, 0.091576213509771, 0.816847572980459, 0.109951743655322},
}};

double chart_tri_area(const std::array<Vec2, 3>& p) {
    return 0.5 *
           ((p[1] - p[0]).x() * (p[2] - p[0]).y() - (p[1] - p[0]).y() * (p[2] - p[0]).x());
}

double edge_hyp_length(const ChartSpec& chart, const Vec2& a, const Vec2& b) {
    // 2-point Gauss along the chart segment with the exact conformal factor
    constexpr double g1 = 0.5 - 0.28867513459481287;
    constexpr double g2 = 0.5 + 0.28867513459481287;
    double L = (b - a).norm();
    Vec2 p1 = a + g1 * (b - a), p2 = a + g2 * (b - a);
    return 0.5 * L * (chart.conformal_factor(p1) + chart.conformal_factor(p2));
}

}  // namespace

double SurfaceMesh::triangle_chart_area(int t) const { return chart_tri_area(tris[t].p); }

double SurfaceMesh::triangle_hyp_area(int t) const {
    const Tri& tr = tris[t];
    const ChartSpec& ch = charts[tr.chart];
    double A = std::abs(chart_tri_area(tr.p));
    double s = 0.0;
    for (const QuadPoint& q : kTriQuad) {
        Vec2 p = q.l1 * tr.p[0] + q.l2 * tr.p[1] + q.l3 * tr.p[2];
        double lam = ch.conformal_factor(p);
        s += q.w * lam * lam;
    }
    return A * s;
}

double SurfaceMesh::total_area() const {
    double a = 0.0;
    for (size_t t = 0; t < tris.size(); ++t) a += triangle_hyp_area(static_cast<int>(t));
    return a;
}

std::vector<double> SurfaceMesh::measured_boundary_lengths() const {
    std::vector<double> out(boundary_names.size(), 0.0);
    for (const BoundaryEdge& e : bedges) out.at(e.component) += e.hyp_length;
    return out;
}

int SurfaceMesh::euler_characteristic() const {
    std::set<std::pair<int, int>> edges;
    for (const Tri& t : tris)
        for (int e = 0; e < 3; ++e) edges.insert(std::minmax(t.v[e], t.v[(e + 1) % 3]));
    return n_vertices - static_cast<int>(edges.size()) + static_cast<int>(tris.size());
}

int SurfaceMesh::boundary_cycle_count() const {
    std::map<std::pair<int, int>, int> count;
    for (const Tri& t : tris)
        for (int e = 0; e < 3; ++e) count[std::minmax(t.v[e], t.v[(e + 1) % 3])]++;
    std::map<int, std::vector<int>> adj;
    for (const auto& [e, c] : count) {
        if (c != 1) continue;
        adj[e.first].push_back(e.second);
        adj[e.second].push_back(e.first);
    }
    std::set<int> seen;
    int cycles = 0;
    for (const auto& [v, nbrs] : adj) {
        (void)nbrs;
        if (seen.count(v)) continue;
        ++cycles;
        std::vector<int> stack{v};
        seen.insert(v);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int w : adj[u])
                if (!seen.count(w)) {
                    seen.insert(w);
                    stack.push_back(w);
                }
        }
    }
    return cycles;
}

void SurfaceMesh::validate() const {
    for (size_t t = 0; t < tris.size(); ++t) {
        double a = chart_tri_area(tris[t].p);
        if (!(a > 1e-14))
            throw AssemblyError("mesh: degenerate or inverted element " + std::to_string(t) +
                                " (chart area " + std::to_string(a) + ")");
        for (int e = 0; e < 3; ++e)
            if (tris[t].v[e] < 0 || tris[t].v[e] >= n_vertices)
                throw StructuralError("mesh: triangle vertex id out of range");
    }
    std::map<std::pair<int, int>, int> count;
    for (const Tri& t : tris)
        for (int e = 0; e < 3; ++e) count[std::minmax(t.v[e], t.v[(e + 1) % 3])]++;
    for (const auto& [e, c] : count) {
        (void)e;
        if (c > 2) throw StructuralError("mesh: edge shared by more than two triangles");
    }
    std::set<std::pair<int, int>> labeled;
    for (const BoundaryEdge& e : bedges) {
        labeled.insert(std::minmax(e.va, e.vb));
        auto it = count.find(std::minmax(e.va, e.vb));
        if (it == count.end() || it->second != 1)
            throw StructuralError("mesh: labeled boundary edge is not a boundary edge");
    }
    for (const auto& [e, c] : count)
        if (c == 1 && !labeled.count(e)) throw StructuralError("mesh: unlabeled boundary edge");

    // orientability by propagation of per-triangle flags
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> inc;
    for (size_t t = 0; t < tris.size(); ++t)
        for (int e = 0; e < 3; ++e) {
            int a = tris[t].v[e], b = tris[t].v[(e + 1) % 3];
            inc[std::minmax(a, b)].push_back({static_cast<int>(t), a < b ? +1 : -1});
        }
    std::vector<int> flag(tris.size(), 0);
    for (size_t seed = 0; seed < tris.size(); ++seed) {
        if (flag[seed]) continue;
        flag[seed] = 1;
        std::vector<int> stack{static_cast<int>(seed)};
        while (!stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            for (int e = 0; e < 3; ++e) {
                int a = tris[t].v[e], b = tris[t].v[(e + 1) % 3];
                auto it = inc.find(std::minmax(a, b));
                if (it == inc.end() || it->second.size() != 2) continue;
                for (auto [ot, odir] : it->second) {
                    if (ot == t) continue;
                    int mydir = a < b ? +1 : -1;
                    int want = (mydir == odir) ? -flag[t] : flag[t];
                    if (flag[ot] == 0) {
                        flag[ot] = want;
                        stack.push_back(ot);
                    } else if (flag[ot] != want) {
                        throw StructuralError("mesh: non-orientable gluing detected");
                    }
                }
            }
        }
    }
    if (boundary_cycle_count() != num_boundary_components())
        throw StructuralError("mesh: boundary cycle count does not match component count");
}

std::vector<int> SurfaceMesh::triangles_in_collar(int cuff) const {
    std::vector<int> out;
    for (size_t t = 0; t < tris.size(); ++t) {
        const Region& r = regions[tris[t].region];
        if (r.kind == Region::Kind::collar && r.cuff == cuff) out.push_back(static_cast<int>(t));
    }
    return out;
}

std::vector<int> SurfaceMesh::triangles_in_cores(const std::vector<int>& pants) const {
    std::set<int> ps(pants.begin(), pants.end());
    std::vector<int> out;
    for (size_t t = 0; t < tris.size(); ++t) {
        const Region& r = regions[tris[t].region];
        if (r.kind == Region::Kind::core && ps.count(r.pants)) out.push_back(static_cast<int>(t));
    }
    return out;
}

std::vector<std::pair<int, double>> SurfaceMesh::boundary_nodes(int component) const {
    std::vector<std::pair<int, double>> out;
    for (const BoundaryEdge& e : bedges)
        if (e.component == component) out.push_back({e.va, e.s_a});
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    return out;
}

std::vector<std::pair<int, int>> SurfaceMesh::reflection_pairs(int cuff) const {
    const CuffRecord& c = cuffs.at(cuff);
    std::vector<std::pair<int, int>> out;
    if (c.kind == CuffRecord::Kind::model) {
        if (c.far_components.size() != 2)
            throw StructuralError("reflection_pairs: not a two-sided collar");
        auto g1 = boundary_nodes(c.far_components[0]);
        auto g2 = boundary_nodes(c.far_components[1]);
        if (g1.size() != g2.size()) throw StructuralError("reflection_pairs: side mismatch");
        for (size_t i = 0; i < g1.size(); ++i) out.push_back({g1[i].first, g2[i].first});
        return out;
    }
    if (c.kind != CuffRecord::Kind::interior || c.arcs.size() != 4)
        throw StructuralError("reflection_pairs: cuff has no two-sided collar");
    auto zip = [&](int ia, int ib) {
        const ArcInterface& A = arcs[c.arcs[ia]];
        const ArcInterface& B = arcs[c.arcs[ib]];
        if (A.nodes.size() != B.nodes.size())
            throw StructuralError("reflection_pairs: arc size mismatch");
        for (size_t i = 0; i < A.nodes.size(); ++i) out.push_back({A.nodes[i], B.nodes[i]});
    };
    zip(0, 3);
    zip(1, 2);
    return out;
}

// ---------------------------------------------------------------------------
// construction helpers
// ---------------------------------------------------------------------------

namespace {

struct Builder {
    std::vector<int> uf;
    int fresh() {
        uf.push_back(static_cast<int>(uf.size()));
        return static_cast<int>(uf.size()) - 1;
    }
    int find(int x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) uf[std::max(a, b)] = std::min(a, b);
    }
};

struct StripPatch {
    int nt = 0, m = 0;
    bool wrap = false;
    std::vector<double> tau;    // nt+1 levels
    std::vector<double> sgrid;  // m+1 breakpoints (sgrid[m] = full extent)
    std::vector<int> ids;
    int ncols() const { return wrap ? m : m + 1; }
    int node(int i, int j) const { return ids[i * ncols() + (wrap ? j % m : j)]; }
};

StripPatch make_strip_nodes(Builder& B, const std::vector<double>& tau,
                            const std::vector<double>& sgrid, bool wrap) {
    StripPatch s;
    s.nt = static_cast<int>(tau.size()) - 1;
    s.m = static_cast<int>(sgrid.size()) - 1;
    s.wrap = wrap;
    s.tau = tau;
    s.sgrid = sgrid;
    s.ids.resize(static_cast<size_t>(s.nt + 1) * s.ncols());
    for (auto& id : s.ids) id = B.fresh();
    return s;
}

struct PendingTri {
    std::array<int, 3> v;
    std::array<Vec2, 3> p;
    int chart, region;
};

// Emits the cell triangles; returns the index of the first one, whose first
// edge runs along the s-increasing bottom row.
int emit_strip_triangles(const StripPatch& s, int chart, int region,
                         std::vector<PendingTri>& out) {
    int first = static_cast<int>(out.size());
    for (int i = 0; i < s.nt; ++i) {
        for (int j = 0; j < s.m; ++j) {
            double sa = s.sgrid[j], sb = s.sgrid[j + 1];
            Vec2 p00(sa, s.tau[i]), p01(sb, s.tau[i]);
            Vec2 p10(sa, s.tau[i + 1]), p11(sb, s.tau[i + 1]);
            int n00 = s.node(i, j), n01 = s.node(i, j + 1);
            int n10 = s.node(i + 1, j), n11 = s.node(i + 1, j + 1);
            out.push_back({{n00, n01, n11}, {p00, p01, p11}, chart, region});
            out.push_back({{n00, n11, n10}, {p00, p11, p10}, chart, region});
        }
    }
    return first;
}

std::vector<double> tau_grid(double w, int nt) {
    std::vector<double> tau(nt + 1);
    for (int i = 0; i <= nt; ++i) tau[i] = gudermannian(w * i / nt);
    return tau;
}

std::vector<double> tau_grid_sym(double w, int nt_half) {
    std::vector<double> tau(2 * nt_half + 1);
    for (int i = -nt_half; i <= nt_half; ++i)
        tau[i + nt_half] = (i < 0 ? -1.0 : 1.0) * gudermannian(w * std::abs(i) / nt_half);
    return tau;
}

int subdiv_m(double len_half, double w, double h) {
    int m1 = static_cast<int>(std::ceil(len_half / h));
    int m2 = static_cast<int>(std::ceil(len_half * std::cosh(w) / (2.0 * h)));
    return std::max({1, m1, m2});
}

int subdiv_nt(double w, double h) { return std::max(1, static_cast<int>(std::ceil(w / h))); }

double polyline_chart_length(const std::function<cplx(double)>& f, double a, double b) {
    double L = 0.0;
    cplx prev = f(a);
    for (int i = 1; i <= 8; ++i) {
        cplx cur = f(a + (b - a) * i / 8.0);
        L += std::abs(cur - prev);
        prev = cur;
    }
    return L;
}

// Chart sagitta of the equidistant-arc interval [s0, s1].
double arc_sagitta(const hyp::FermiFrame& fr, double w, double s0, double s1) {
    cplx a = fr.point(w, s0), b = fr.point(w, s1), m = fr.point(w, 0.5 * (s0 + s1));
    return std::abs(m - 0.5 * (a + b));
}

// Uniform breakpoints with both end intervals geometrically graded so that
// the first/last chord's sagitta stays below the given clearances.
std::vector<double> graded_sgrid(double len_half, int m, const hyp::FermiFrame& fr, double w,
                                 double clear0, double clear1) {
    double step = len_half / m;
    auto depth_for = [&](bool at_end) {
        double clear = at_end ? clear1 : clear0;
        int d = 0;
        for (; d < 14; ++d) {
            double a = at_end ? len_half - step / (1 << d) : 0.0;
            double b = at_end ? len_half : step / (1 << d);
            if (arc_sagitta(fr, w, a, b) <= 0.35 * clear) break;
        }
        return d;
    };
    int d0 = depth_for(false), d1 = depth_for(true);
    std::vector<double> g;
    g.push_back(0.0);
    for (int i = d0; i >= 1; --i) g.push_back(step / (1 << i));
    for (int j = 1; j < m; ++j) g.push_back(step * j);
    for (int i = 1; i <= d1; ++i) g.push_back(len_half - step / (1 << i));
    g.push_back(len_half);
    // strictly increasing and deduplicated (m == 1 can collide at midpoints)
    std::vector<double> out;
    for (double v : g)
        if (out.empty() || v > out.back() + 1e-15 * std::max(1.0, len_half)) out.push_back(v);
    if (std::abs(out.back() - len_half) > 1e-12) out.push_back(len_half);
    return out;
}

// Assembles a closed polygon from parametrized pieces, deduplicating shared
// endpoints and asserting geometric closure.
struct PieceWalker {
    std::vector<Vec2> poly;
    std::vector<std::vector<int>> piece_idx;

    void add_piece(const std::vector<cplx>& pts, bool closes) {
        std::vector<int> idx;
        for (size_t j = 0; j < pts.size(); ++j) {
            Vec2 q(pts[j].real(), pts[j].imag());
            if (j == 0 && !poly.empty()) {
                if ((q - poly.back()).norm() > 1e-9)
                    throw GeometricError("mesh: chart polygon pieces do not meet");
                idx.push_back(static_cast<int>(poly.size()) - 1);
                continue;
            }
            if (j + 1 == pts.size() && closes) {
                if ((q - poly.front()).norm() > 1e-9)
                    throw GeometricError("mesh: chart polygon failed to close");
                idx.push_back(0);
                continue;
            }
            poly.push_back(q);
            idx.push_back(static_cast<int>(poly.size()) - 1);
        }
        piece_idx.push_back(std::move(idx));
    }
};

}  // namespace

// ---------------------------------------------------------------------------
// mesh_surface
// ---------------------------------------------------------------------------

SurfaceMesh mesh_surface(const topo::PantsGraph& spec, double h, long max_triangles) {
    spec.validate();
    if (!(h > 1e-3 && h < 1.0)) throw DomainError("mesh_surface: h must lie in (1e-3, 1)");
    if (spec.num_cusps() > 0)
        throw StructuralError("mesh_surface: cusped surfaces are not meshable");
    if (spec.num_boundaries() == 0)
        throw StructuralError("mesh_surface: surface needs at least one boundary component");

    const int NP = spec.num_pants();
    SurfaceMesh M;
    M.charts = {ChartSpec{ChartSpec::Kind::strip, 1.0}, ChartSpec{ChartSpec::Kind::disk, 1.0}};
    const int kStrip = 0, kDisk = 1;
    M.target_h = h;
    for (const auto& bl : spec.boundaries) {
        M.boundary_names.push_back(bl.name);
        M.boundary_ref_length.push_back(bl.length);
    }

    Builder B;
    std::vector<PendingTri> tris;

    std::vector<hypgeom::Pants> geo;
    geo.reserve(NP);
    for (int p = 0; p < NP; ++p) {
        std::array<double, 3> L{};
        for (int k = 0; k < 3; ++k) L[k] = spec.cuff_length({p, k});
        geo.push_back(hypgeom::pants_from_boundary_lengths(L[0], L[1], L[2]));
    }
    std::vector<std::array<hyp::FermiFrame, 3>> frames(NP);
    std::vector<std::array<double, 3>> seam_margin_chart(NP);  // per seam piece
    for (int p = 0; p < NP; ++p) {
        const hypgeom::Pants& P = geo[p];
        for (int k = 0; k < 3; ++k) frames[p][k] = P.cuff_frame(k);
        for (int k = 0; k < 3; ++k) {
            int kn = (k + 1) % 3;
            double d0 = P.collar_width[k], d1 = P.seam_length[k] - P.collar_width[kn];
            cplx A = P.hex.vertex[(2 * k + 1) % 6], Bv = P.hex.vertex[(2 * k + 2) % 6];
            seam_margin_chart[p][k] = polyline_chart_length(
                [&](double d) { return hyp::disk_geodesic_point(A, Bv, d); }, d0, d1);
        }
    }

    // shared s-grid per cuff circle; both sides of a gluing see one grid.
    // End intervals are graded so equidistant-arc bending cannot flip the
    // sliver elements wedged into tight seam corners.
    std::vector<std::vector<double>> edge_grid(spec.num_edges());
    std::vector<std::array<std::vector<double>, 3>> slot_grid(NP);
    {
        struct Side {
            int p, k;
        };
        auto grid_for = [&](const std::vector<Side>& sides, double len) {
            int m = 1;
            for (const Side& s : sides)
                m = std::max(m, subdiv_m(len / 2.0, geo[s.p].collar_width[s.k], h));
            // clearances: chart lengths of the seam middles at each strip end
            double c0 = 1e300, c1 = 1e300;
            for (const Side& s : sides) {
                c0 = std::min(c0, seam_margin_chart[s.p][(s.k + 2) % 3]);
                c1 = std::min(c1, seam_margin_chart[s.p][s.k]);
            }
            // the grid must satisfy the sagitta rule for every side's arc
            std::vector<double> best;
            for (const Side& s : sides) {
                auto g = graded_sgrid(len / 2.0, m, frames[s.p][s.k], geo[s.p].collar_width[s.k],
                                      c0, c1);
                if (g.size() > best.size()) best = g;
            }
            return best;
        };
        for (int e = 0; e < spec.num_edges(); ++e) {
            const auto& ed = spec.edges[e];
            edge_grid[e] = grid_for({{ed.end1.pants, ed.end1.slot}, {ed.end2.pants, ed.end2.slot}},
                                    ed.length);
            slot_grid[ed.end1.pants][ed.end1.slot] = edge_grid[e];
            slot_grid[ed.end2.pants][ed.end2.slot] = edge_grid[e];
        }
        for (const auto& bl : spec.boundaries)
            slot_grid[bl.at.pants][bl.at.slot] =
                grid_for({{bl.at.pants, bl.at.slot}}, bl.length);
    }

    struct StripSet {
        StripPatch s[2];
        int first_tri[2] = {-1, -1};
        double w = 0, len = 0, tau_w = 0;
        int m = 0, nt = 0;
    };
    std::vector<std::array<StripSet, 3>> strips(NP);
    struct ZedSet {
        dela::PolygonMesh local;
        std::vector<int> ids[2];
        std::vector<std::vector<int>> piece_idx;  // [arc0 seam0 arc1 seam1 arc2 seam2]
    };
    std::vector<ZedSet> zeds(NP);

    long tri_count = 0;
    auto check_cap = [&](long add) {
        tri_count += add;
        if (tri_count > max_triangles)
            throw CapacityError("mesh_surface: triangle cap of " + std::to_string(max_triangles) +
                                " exceeded");
    };

    for (int p = 0; p < NP; ++p) {
        const hypgeom::Pants& P = geo[p];
        for (int k = 0; k < 3; ++k) {
            StripSet& ss = strips[p][k];
            ss.len = P.boundary_length[k];
            ss.w = P.collar_width[k];
            ss.tau_w = gudermannian(ss.w);
            const auto& sg = slot_grid[p][k];
            ss.m = static_cast<int>(sg.size()) - 1;
            ss.nt = subdiv_nt(ss.w, h);
            auto tau = tau_grid(ss.w, ss.nt);
            for (int hx = 0; hx < 2; ++hx) ss.s[hx] = make_strip_nodes(B, tau, sg, false);
            check_cap(2L * 2 * ss.nt * ss.m);
        }

        PieceWalker walker;
        for (int k = 0; k < 3; ++k) {
            const StripSet& ss = strips[p][k];
            std::vector<cplx> arc_pts;
            for (int j = 0; j <= ss.m; ++j)
                arc_pts.push_back(frames[p][k].point(ss.w, ss.s[0].sgrid[j]));
            walker.add_piece(arc_pts, false);

            int kn = (k + 1) % 3;
            double sigma = P.seam_length[k];
            double d0 = P.collar_width[k], d1 = sigma - P.collar_width[kn];
            cplx A = P.hex.vertex[(2 * k + 1) % 6], Bv = P.hex.vertex[(2 * k + 2) % 6];
            auto seam_pt = [&](double d) { return hyp::disk_geodesic_point(A, Bv, d); };
            int q = std::max(1, static_cast<int>(std::ceil(seam_margin_chart[p][k] / h)));
            std::vector<cplx> seam_pts;
            for (int j = 0; j <= q; ++j) seam_pts.push_back(seam_pt(d0 + (d1 - d0) * j / q));
            walker.add_piece(seam_pts, k == 2);
        }
        ZedSet& Z = zeds[p];
        Z.local = dela::triangulate_polygon(walker.poly, h);
        Z.piece_idx = walker.piece_idx;
        for (int hx = 0; hx < 2; ++hx) {
            Z.ids[hx].resize(Z.local.points.size());
            for (auto& id : Z.ids[hx]) id = B.fresh();
        }
        check_cap(2L * static_cast<long>(Z.local.triangles.size()));
    }

    // intra-pants identifications
    for (int p = 0; p < NP; ++p) {
        for (int k = 0; k < 3; ++k) {
            StripSet& ss = strips[p][k];
            for (int i = 0; i <= ss.nt; ++i) {
                B.unite(ss.s[0].node(i, 0), ss.s[1].node(i, 0));
                B.unite(ss.s[0].node(i, ss.m), ss.s[1].node(i, ss.m));
            }
            for (int hx = 0; hx < 2; ++hx) {
                const auto& api = zeds[p].piece_idx[2 * k];
                for (int j = 0; j <= ss.m; ++j)
                    B.unite(ss.s[hx].node(ss.nt, j), zeds[p].ids[hx][api[j]]);
            }
        }
        for (int k = 0; k < 3; ++k)
            for (int idx : zeds[p].piece_idx[2 * k + 1])
                B.unite(zeds[p].ids[0][idx], zeds[p].ids[1][idx]);
    }

    // emit triangles
    for (int p = 0; p < NP; ++p) {
        for (int k = 0; k < 3; ++k) {
            StripSet& ss = strips[p][k];
            for (int hx = 0; hx < 2; ++hx) {
                int region = static_cast<int>(M.regions.size());
                M.regions.push_back(Region{Region::Kind::collar, -1, p, hx});
                ss.first_tri[hx] = emit_strip_triangles(ss.s[hx], kStrip, region, tris);
            }
        }
        ZedSet& Z = zeds[p];
        for (int hx = 0; hx < 2; ++hx) {
            int region = static_cast<int>(M.regions.size());
            M.regions.push_back(Region{Region::Kind::core, -1, p, hx});
            for (const auto& t : Z.local.triangles) {
                PendingTri pt;
                pt.chart = kDisk;
                pt.region = region;
                for (int e = 0; e < 3; ++e) {
                    pt.v[e] = Z.ids[hx][t[e]];
                    Vec2 q = Z.local.points[t[e]];
                    pt.p[e] = hx == 0 ? q : Vec2(q.x(), -q.y());
                }
                if (hx == 1) {  // conjugation flipped the chart orientation
                    std::swap(pt.v[1], pt.v[2]);
                    std::swap(pt.p[1], pt.p[2]);
                }
                tris.push_back(pt);
            }
        }
    }

    // per-pants orientation flags (cuffs not glued yet)
    std::vector<int> flag(tris.size(), 0);
    {
        std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> inc;
        for (size_t t = 0; t < tris.size(); ++t)
            for (int e = 0; e < 3; ++e) {
                int a = B.find(tris[t].v[e]), b = B.find(tris[t].v[(e + 1) % 3]);
                inc[std::minmax(a, b)].push_back({static_cast<int>(t), a < b ? +1 : -1});
            }
        for (size_t seed = 0; seed < tris.size(); ++seed) {
            if (flag[seed]) continue;
            flag[seed] = 1;
            std::vector<int> stack{static_cast<int>(seed)};
            while (!stack.empty()) {
                int t = stack.back();
                stack.pop_back();
                for (int e = 0; e < 3; ++e) {
                    int a = B.find(tris[t].v[e]), b = B.find(tris[t].v[(e + 1) % 3]);
                    auto it = inc.find(std::minmax(a, b));
                    if (it == inc.end() || it->second.size() != 2) continue;
                    for (auto [ot, odir] : it->second) {
                        if (ot == t) continue;
                        int mydir = a < b ? +1 : -1;
                        int want = (mydir == odir) ? -flag[t] : flag[t];
                        if (flag[ot] == 0) {
                            flag[ot] = want;
                            stack.push_back(ot);
                        } else if (flag[ot] != want) {
                            throw StructuralError("mesh_surface: inconsistent pants orientation");
                        }
                    }
                }
            }
        }
    }

    // glue the cuffs; the per-edge matching (s -> s or s -> len - s, both
    // zero-twist) is chosen so the glued mesh stays orientable
    auto circle_node = [&](int p, int k, int jg) {
        const StripSet& ss = strips[p][k];
        int per = 2 * ss.m;
        jg = ((jg % per) + per) % per;
        if (jg <= ss.m) return ss.s[0].node(0, jg);
        return ss.s[1].node(0, 2 * ss.m - jg);
    };
    auto circle_s = [&](int p, int k, int jg) {
        const StripSet& ss = strips[p][k];
        int per = 2 * ss.m;
        jg = ((jg % per) + per) % per;
        if (jg <= ss.m) return ss.s[0].sgrid[jg];
        return ss.len - ss.s[0].sgrid[2 * ss.m - jg];
    };
    std::vector<bool> reflect_glue(spec.num_edges(), true);
    for (int e = 0; e < spec.num_edges(); ++e) {
        const auto& ed = spec.edges[e];
        const StripSet& sa = strips[ed.end1.pants][ed.end1.slot];
        const StripSet& sb = strips[ed.end2.pants][ed.end2.slot];
        if (sa.m != sb.m || sa.nt != sb.nt)
            throw StructuralError("mesh_surface: mismatched cuff grids");
        // both reference triangles traverse their bottom row s-increasing;
        // the reflected matching reverses one of them
        reflect_glue[e] = (flag[sa.first_tri[0]] == flag[sb.first_tri[0]]);
        int per = 2 * sa.m;
        for (int j = 0; j < per; ++j) {
            int jq = reflect_glue[e] ? (per - j) % per : j;
            B.unite(circle_node(ed.end1.pants, ed.end1.slot, j),
                    circle_node(ed.end2.pants, ed.end2.slot, jq));
        }
    }

    // compact ids and emit the final mesh
    std::vector<int> compact(B.uf.size(), -1);
    int nv = 0;
    auto cid = [&](int prov) {
        int r = B.find(prov);
        if (compact[r] < 0) compact[r] = nv++;
        return compact[r];
    };
    for (auto& t : tris)
        for (int e = 0; e < 3; ++e) t.v[e] = cid(t.v[e]);
    M.n_vertices = nv;
    M.tris.reserve(tris.size());
    for (auto& t : tris) M.tris.push_back(Tri{t.v, t.p, t.chart, t.region});
    M.vpos.assign(nv, Vec2(0, 0));
    M.vchart.assign(nv, 0);
    for (const Tri& t : M.tris)
        for (int e = 0; e < 3; ++e) {
            M.vpos[t.v[e]] = t.p[e];
            M.vchart[t.v[e]] = t.chart;
        }

    auto make_arc = [&](int p, int k, int hx, int cuff_id) {
        const StripSet& ss = strips[p][k];
        ArcInterface ai;
        ai.cuff = cuff_id;
        ai.width = ss.w;
        ai.tau_w = ss.tau_w;
        ai.frame = frames[p][k];
        ai.conj = (hx == 1);
        for (int j = 0; j <= ss.m; ++j) {
            ai.nodes.push_back(cid(ss.s[hx].node(ss.nt, j)));
            ai.s.push_back(ss.s[hx].sgrid[j]);
        }
        M.arcs.push_back(std::move(ai));
        return static_cast<int>(M.arcs.size()) - 1;
    };

    std::vector<std::array<int, 3>> cuff_of(NP, {-1, -1, -1});
    for (int e = 0; e < spec.num_edges(); ++e) {
        const auto& ed = spec.edges[e];
        CuffRecord c;
        c.kind = CuffRecord::Kind::interior;
        c.length = ed.length;
        c.width = tube_width(ed.length);
        c.edge = e;
        c.pants_a = ed.end1.pants;
        c.pants_b = ed.end2.pants;
        const StripSet& ss = strips[ed.end1.pants][ed.end1.slot];
        c.m = ss.m;
        c.nt = ss.nt;
        int id = static_cast<int>(M.cuffs.size());
        c.arcs = {make_arc(ed.end1.pants, ed.end1.slot, 0, id),
                  make_arc(ed.end1.pants, ed.end1.slot, 1, id),
                  make_arc(ed.end2.pants, ed.end2.slot, 0, id),
                  make_arc(ed.end2.pants, ed.end2.slot, 1, id)};
        if (!reflect_glue[e]) std::swap(c.arcs[2], c.arcs[3]);
        for (int j = 0; j < 2 * ss.m; ++j)
            c.core_nodes.push_back(cid(circle_node(ed.end1.pants, ed.end1.slot, j)));
        cuff_of[ed.end1.pants][ed.end1.slot] = id;
        cuff_of[ed.end2.pants][ed.end2.slot] = id;
        M.cuffs.push_back(std::move(c));
    }
    for (int b = 0; b < spec.num_boundaries(); ++b) {
        const auto& bl = spec.boundaries[b];
        int p = bl.at.pants, k = bl.at.slot;
        const StripSet& ss = strips[p][k];
        CuffRecord c;
        c.kind = CuffRecord::Kind::boundary;
        c.length = bl.length;
        c.width = ss.w;
        c.boundary_component = b;
        c.pants_a = p;
        c.m = ss.m;
        c.nt = ss.nt;
        int id = static_cast<int>(M.cuffs.size());
        c.arcs = {make_arc(p, k, 0, id), make_arc(p, k, 1, id)};
        for (int j = 0; j < 2 * ss.m; ++j) c.core_nodes.push_back(cid(circle_node(p, k, j)));
        cuff_of[p][k] = id;
        M.cuffs.push_back(std::move(c));

        for (int j = 0; j < 2 * ss.m; ++j) {
            BoundaryEdge be;
            be.va = cid(circle_node(p, k, j));
            be.vb = cid(circle_node(p, k, j + 1));
            be.chart = kStrip;
            be.component = b;
            be.s_a = circle_s(p, k, j);
            be.s_b = j + 1 == 2 * ss.m ? bl.length : circle_s(p, k, j + 1);
            if (j < ss.m)
                be.p = {Vec2(ss.s[0].sgrid[j], 0.0), Vec2(ss.s[0].sgrid[j + 1], 0.0)};
            else
                be.p = {Vec2(ss.s[0].sgrid[2 * ss.m - j], 0.0),
                        Vec2(ss.s[0].sgrid[2 * ss.m - j - 1], 0.0)};
            be.hyp_length = edge_hyp_length(M.charts[kStrip], be.p[0], be.p[1]);
            M.bedges.push_back(be);
        }
    }
    {
        int r = 0;
        for (int p = 0; p < NP; ++p) {
            for (int k = 0; k < 3; ++k)
                for (int hx = 0; hx < 2; ++hx) M.regions[r++].cuff = cuff_of[p][k];
            r += 2;  // core regions of this pants
        }
    }
    // seam middles are geodesic interfaces: refine along the true curve
    for (int p = 0; p < NP; ++p)
        for (int k = 0; k < 3; ++k) {
            std::vector<int> chain;
            for (int idx : zeds[p].piece_idx[2 * k + 1]) chain.push_back(cid(zeds[p].ids[0][idx]));
            M.geodesic_chains.push_back(std::move(chain));
        }

    M.validate();
    return M;
}

// ---------------------------------------------------------------------------
// standalone model meshes
// ---------------------------------------------------------------------------

namespace {

SurfaceMesh strip_cylinder_mesh(double core_length, double h, bool full) {
    if (!(h > 1e-3 && h < 1.0)) throw DomainError("model mesh: h must lie in (1e-3, 1)");
    double w = tube_width(core_length);
    int nt = subdiv_nt(w, h);
    int m = std::max(4, 2 * static_cast<int>(std::ceil(core_length / (2.0 * h))));
    double ds = core_length / m;

    SurfaceMesh M;
    M.charts = {ChartSpec{ChartSpec::Kind::strip, 1.0}};
    M.target_h = h;

    Builder B;
    std::vector<PendingTri> tris;
    std::vector<double> tau = full ? tau_grid_sym(w, nt) : tau_grid(w, nt);
    std::vector<double> sgrid(m + 1);
    for (int j = 0; j <= m; ++j) sgrid[j] = j * ds;
    StripPatch S = make_strip_nodes(B, tau, sgrid, true);
    M.regions.push_back(Region{Region::Kind::collar, 0, -1, 0});
    emit_strip_triangles(S, 0, 0, tris);
    int rows = static_cast<int>(tau.size()) - 1;

    M.n_vertices = static_cast<int>(B.uf.size());
    for (auto& t : tris) M.tris.push_back(Tri{t.v, t.p, t.chart, t.region});
    M.vpos.assign(M.n_vertices, Vec2(0, 0));
    M.vchart.assign(M.n_vertices, 0);
    for (const Tri& t : M.tris)
        for (int e = 0; e < 3; ++e) M.vpos[t.v[e]] = t.p[e];

    auto add_circle_edges = [&](int row, int comp) {
        for (int j = 0; j < m; ++j) {
            BoundaryEdge be;
            be.va = S.node(row, j);
            be.vb = S.node(row, j + 1);
            be.chart = 0;
            be.component = comp;
            be.s_a = j * ds;
            be.s_b = (j + 1) * ds;
            be.p = {Vec2(j * ds, tau[row]), Vec2((j + 1) * ds, tau[row])};
            be.hyp_length = edge_hyp_length(M.charts[0], be.p[0], be.p[1]);
            M.bedges.push_back(be);
        }
    };

    CuffRecord c;
    c.kind = CuffRecord::Kind::model;
    c.length = core_length;
    c.width = w;
    c.m = m;
    c.nt = rows;
    if (full) {
        M.boundary_names = {"left", "right"};
        double far = core_length * std::cosh(w);
        M.boundary_ref_length = {far, far};
        add_circle_edges(0, 0);
        add_circle_edges(rows, 1);
        c.far_components = {0, 1};
        for (int j = 0; j < m; ++j) c.core_nodes.push_back(S.node(rows / 2, j));
    } else {
        M.boundary_names = {"core", "far"};
        M.boundary_ref_length = {core_length, core_length * std::cosh(w)};
        add_circle_edges(0, 0);
        add_circle_edges(rows, 1);
        c.far_components = {1};
        for (int j = 0; j < m; ++j) c.core_nodes.push_back(S.node(0, j));
    }
    M.cuffs.push_back(c);
    M.validate();
    return M;
}

}  // namespace

SurfaceMesh mesh_half_collar(double core_length, double h) {
    return strip_cylinder_mesh(core_length, h, false);
}

SurfaceMesh mesh_cylinder(double core_length, double h) {
    return strip_cylinder_mesh(core_length, h, true);
}

namespace {

SurfaceMesh mesh_half_collar_disk_impl(double core_length, double h, double h_lattice) {
    if (!(h > 1e-3 && h < 1.0)) throw DomainError("model mesh: h must lie in (1e-3, 1)");
    double w = tube_width(core_length);
    double half = core_length / 2.0;
    cplx A(0.0, 0.0);
    cplx Bp(std::tanh(half / 2.0), 0.0);
    hyp::FermiFrame F = hyp::fermi_frame(A, Bp, cplx(0.0, 0.5));

    int nt = subdiv_nt(w, h);
    int ms = std::max(2, subdiv_m(half, w, h));

    PieceWalker walker;
    std::vector<cplx> core_pts, right_pts, far_pts, left_pts;
    for (int j = 0; j <= ms; ++j) core_pts.push_back(F.point(0.0, half * j / ms));
    for (int i = 0; i <= nt; ++i) right_pts.push_back(F.point(w * i / nt, half));
    for (int j = 0; j <= ms; ++j) far_pts.push_back(F.point(w, half * (ms - j) / ms));
    for (int i = 0; i <= nt; ++i) left_pts.push_back(F.point(w * (nt - i) / nt, 0.0));
    walker.add_piece(core_pts, false);
    walker.add_piece(right_pts, false);
    walker.add_piece(far_pts, false);
    walker.add_piece(left_pts, true);
    const auto& core_idx = walker.piece_idx[0];
    const auto& right_idx = walker.piece_idx[1];
    const auto& far_idx = walker.piece_idx[2];
    const auto& left_idx = walker.piece_idx[3];

    // the two chart copies glue left-to-right; interior points must separate
    // the side pieces or mirrored crossing edges would collide
    double width = std::abs(std::tanh(half / 2.0));
    double h_tri = std::min(h_lattice, width / 2.5);
    dela::PolygonMesh local = dela::triangulate_polygon(walker.poly, h_tri);

    SurfaceMesh M;
    M.charts = {ChartSpec{ChartSpec::Kind::disk, 1.0}};
    M.target_h = h;
    M.boundary_names = {"core", "far"};
    M.boundary_ref_length = {core_length, core_length * std::cosh(w)};

    Builder B;
    std::array<std::vector<int>, 2> ids;
    for (int inst = 0; inst < 2; ++inst) {
        ids[inst].resize(local.points.size());
        for (auto& id : ids[inst]) id = B.fresh();
    }
    for (int i = 0; i <= nt; ++i) {
        B.unite(ids[0][right_idx[i]], ids[1][left_idx[nt - i]]);
        B.unite(ids[1][right_idx[i]], ids[0][left_idx[nt - i]]);
    }
    std::vector<PendingTri> tris;
    for (int inst = 0; inst < 2; ++inst) {
        int region = static_cast<int>(M.regions.size());
        M.regions.push_back(Region{Region::Kind::collar, 0, -1, inst});
        for (const auto& t : local.triangles) {
            PendingTri pt;
            pt.chart = 0;
            pt.region = region;
            for (int e = 0; e < 3; ++e) {
                pt.v[e] = ids[inst][t[e]];
                pt.p[e] = local.points[t[e]];
            }
            tris.push_back(pt);
        }
    }
    std::vector<int> compact(B.uf.size(), -1);
    int nv = 0;
    auto cid = [&](int prov) {
        int r = B.find(prov);
        if (compact[r] < 0) compact[r] = nv++;
        return compact[r];
    };
    for (auto& t : tris)
        for (int e = 0; e < 3; ++e) t.v[e] = cid(t.v[e]);
    M.n_vertices = nv;
    for (auto& t : tris) M.tris.push_back(Tri{t.v, t.p, t.chart, t.region});
    M.vpos.assign(nv, Vec2(0, 0));
    M.vchart.assign(nv, 0);
    for (const Tri& t : M.tris)
        for (int e = 0; e < 3; ++e) M.vpos[t.v[e]] = t.p[e];

    CuffRecord c;
    c.kind = CuffRecord::Kind::model;
    c.length = core_length;
    c.width = w;
    c.m = ms;
    c.nt = nt;
    c.far_components = {1};
    for (int inst = 0; inst < 2; ++inst) {
        ArcInterface ai;
        ai.cuff = 0;
        ai.width = w;
        ai.tau_w = gudermannian(w);
        ai.frame = F;
        ai.conj = false;
        ai.has_strip = false;
        for (int j = 0; j <= ms; ++j) {
            ai.nodes.push_back(cid(ids[inst][far_idx[ms - j]]));  // ascending s
            ai.s.push_back(half * j / ms);
        }
        M.arcs.push_back(std::move(ai));
        c.arcs.push_back(static_cast<int>(M.arcs.size()) - 1);
    }
    for (int inst = 0; inst < 2; ++inst)
        for (int j = 0; j < ms; ++j) c.core_nodes.push_back(cid(ids[inst][core_idx[j]]));
    M.cuffs.push_back(c);

    for (int inst = 0; inst < 2; ++inst) {
        double off = inst * half;
        for (int j = 0; j < ms; ++j) {
            BoundaryEdge be;
            be.va = cid(ids[inst][core_idx[j]]);
            be.vb = cid(ids[inst][core_idx[j + 1]]);
            be.chart = 0;
            be.component = 0;
            be.s_a = off + half * j / ms;
            be.s_b = off + half * (j + 1) / ms;
            be.p = {local.points[core_idx[j]], local.points[core_idx[j + 1]]};
            be.hyp_length = edge_hyp_length(M.charts[0], be.p[0], be.p[1]);
            M.bedges.push_back(be);

            BoundaryEdge bf;
            bf.va = cid(ids[inst][far_idx[ms - j]]);
            bf.vb = cid(ids[inst][far_idx[ms - j - 1]]);
            bf.chart = 0;
            bf.component = 1;
            bf.s_a = off + half * j / ms;
            bf.s_b = off + half * (j + 1) / ms;
            bf.p = {local.points[far_idx[ms - j]], local.points[far_idx[ms - j - 1]]};
            bf.hyp_length = edge_hyp_length(M.charts[0], bf.p[0], bf.p[1]);
            M.bedges.push_back(bf);
        }
    }
    // geodesic interfaces and the core circles refine along true curves
    for (int inst = 0; inst < 2; ++inst) {
        std::vector<int> seam;
        for (int i = 0; i <= nt; ++i) seam.push_back(cid(ids[inst][right_idx[i]]));
        M.geodesic_chains.push_back(std::move(seam));
        std::vector<int> corec;
        for (int j = 0; j <= ms; ++j) corec.push_back(cid(ids[inst][core_idx[j]]));
        M.geodesic_chains.push_back(std::move(corec));
    }
    M.validate();
    return M;
}

}  // namespace

SurfaceMesh mesh_half_collar_disk(double core_length, double h) {
    // a too-coarse interior lattice can leave mirrored crossing edges that
    // collide under the self-gluing; retry finer until the mesh validates
    double h_try = h;
    for (int attempt = 0; attempt < 4; ++attempt) {
        try {
            return mesh_half_collar_disk_impl(core_length, h, h_try);
        } catch (const StructuralError&) {
            h_try *= 0.6;
        }
    }
    return mesh_half_collar_disk_impl(core_length, h, h_try);
}

// ---------------------------------------------------------------------------
// refinement
// ---------------------------------------------------------------------------

SurfaceMesh refine(const SurfaceMesh& m) {
    SurfaceMesh R;
    R.charts = m.charts;
    R.regions = m.regions;
    R.boundary_names = m.boundary_names;
    R.boundary_ref_length = m.boundary_ref_length;
    R.target_h = m.target_h / 2.0;
    R.refinement_level = m.refinement_level + 1;

    int next = m.n_vertices;
    std::map<std::pair<int, int>, int> mid_id;
    auto midpoint_id = [&](int a, int b) {
        auto key = std::minmax(a, b);
        auto it = mid_id.find(key);
        if (it != mid_id.end()) return it->second;
        mid_id[key] = next;
        return next++;
    };

    // new nodes on equidistant interfaces go onto the true curve
    struct ArcMid {
        Vec2 strip_xy, disk_xy;
        bool has_strip, has_disk;
    };
    std::map<std::pair<int, int>, ArcMid> arc_mid;
    for (const ArcInterface& ai : m.arcs) {
        for (size_t j = 0; j + 1 < ai.nodes.size(); ++j) {
            double smid = 0.5 * (ai.s[j] + ai.s[j + 1]);
            ArcMid am;
            am.has_strip = ai.has_strip;
            am.has_disk = ai.has_disk;
            am.strip_xy = Vec2(smid, ai.tau_w);
            cplx z = ai.frame.point(ai.width, smid);
            if (ai.conj) z = std::conj(z);
            am.disk_xy = Vec2(z.real(), z.imag());
            arc_mid[std::minmax(ai.nodes[j], ai.nodes[j + 1])] = am;
        }
    }
    // geodesic chains take the hyperbolic midpoint, which is isometry
    // equivariant and hence consistent across chart copies
    std::set<std::pair<int, int>> chain_edges;
    for (const auto& ch : m.geodesic_chains)
        for (size_t j = 0; j + 1 < ch.size(); ++j)
            chain_edges.insert(std::minmax(ch[j], ch[j + 1]));
    for (const BoundaryEdge& be : m.bedges)
        if (m.charts[be.chart].kind == ChartSpec::Kind::disk &&
            !arc_mid.count(std::minmax(be.va, be.vb)))
            chain_edges.insert(std::minmax(be.va, be.vb));

    auto strip_midpoint = [&](const Vec2& a, const Vec2& b) {
        double ta = inverse_gudermannian(a.y()), tb = inverse_gudermannian(b.y());
        return Vec2(0.5 * (a.x() + b.x()), gudermannian(0.5 * (ta + tb)));
    };
    auto hyper_midpoint = [&](const Vec2& a, const Vec2& b) {
        cplx zm = hyp::disk_geodesic_midpoint(cplx(a.x(), a.y()), cplx(b.x(), b.y()));
        return Vec2(zm.real(), zm.imag());
    };

    // midpoint positions per (edge, region) for disk charts
    std::map<std::pair<std::pair<int, int>, int>, Vec2> disk_pos;
    for (const Tri& t : m.tris) {
        if (m.charts[t.chart].kind != ChartSpec::Kind::disk) continue;
        for (int e = 0; e < 3; ++e) {
            int ea = e, eb = (e + 1) % 3;
            std::pair<int, int> ekey = std::minmax(t.v[ea], t.v[eb]);
            auto key = std::make_pair(ekey, t.region);
            if (disk_pos.count(key)) continue;
            auto it = arc_mid.find(ekey);
            if (it != arc_mid.end() && it->second.has_disk)
                disk_pos[key] = it->second.disk_xy;
            else if (chain_edges.count(ekey))
                disk_pos[key] = hyper_midpoint(t.p[ea], t.p[eb]);
            else
                disk_pos[key] = 0.5 * (t.p[ea] + t.p[eb]);
        }
    }
    auto edge_mid_pos = [&](const Tri& t, int ea, int eb) {
        const ChartSpec& ch = m.charts[t.chart];
        if (ch.kind == ChartSpec::Kind::strip) {
            auto it = arc_mid.find(std::minmax(t.v[ea], t.v[eb]));
            if (it != arc_mid.end() && it->second.has_strip) return it->second.strip_xy;
            return strip_midpoint(t.p[ea], t.p[eb]);
        }
        return disk_pos.at({std::minmax(t.v[ea], t.v[eb]), t.region});
    };
    // last-resort demotion: straighten curve midpoints that would flip a
    // child element (possible only at very coarse resolution)
    for (int pass = 0; pass < 8; ++pass) {
        std::vector<std::pair<std::pair<int, int>, int>> demote;
        for (const Tri& t : m.tris) {
            if (m.charts[t.chart].kind != ChartSpec::Kind::disk) continue;
            Vec2 p01 = edge_mid_pos(t, 0, 1);
            Vec2 p12 = edge_mid_pos(t, 1, 2);
            Vec2 p20 = edge_mid_pos(t, 2, 0);
            std::array<std::array<Vec2, 3>, 4> kids = {{{t.p[0], p01, p20},
                                                        {t.p[1], p12, p01},
                                                        {t.p[2], p20, p12},
                                                        {p01, p12, p20}}};
            bool bad = false;
            for (const auto& k : kids)
                if (!(chart_tri_area(k) > 1e-14)) bad = true;
            if (!bad) continue;
            for (int e = 0; e < 3; ++e)
                demote.push_back({std::minmax(t.v[e], t.v[(e + 1) % 3]), t.region});
        }
        if (demote.empty()) break;
        for (const auto& key : demote) {
            for (const Tri& t : m.tris) {
                if (t.region != key.second) continue;
                for (int e = 0; e < 3; ++e) {
                    int ea = e, eb = (e + 1) % 3;
                    std::pair<int, int> ek = std::minmax(t.v[ea], t.v[eb]);
                    if (ek != key.first) continue;
                    disk_pos[key] = 0.5 * (t.p[ea] + t.p[eb]);
                }
            }
        }
    }

    for (const Tri& t : m.tris) {
        int m01 = midpoint_id(t.v[0], t.v[1]);
        int m12 = midpoint_id(t.v[1], t.v[2]);
        int m20 = midpoint_id(t.v[2], t.v[0]);
        Vec2 p01 = edge_mid_pos(t, 0, 1);
        Vec2 p12 = edge_mid_pos(t, 1, 2);
        Vec2 p20 = edge_mid_pos(t, 2, 0);
        R.tris.push_back(Tri{{t.v[0], m01, m20}, {t.p[0], p01, p20}, t.chart, t.region});
        R.tris.push_back(Tri{{t.v[1], m12, m01}, {t.p[1], p12, p01}, t.chart, t.region});
        R.tris.push_back(Tri{{t.v[2], m20, m12}, {t.p[2], p20, p12}, t.chart, t.region});
        R.tris.push_back(Tri{{m01, m12, m20}, {p01, p12, p20}, t.chart, t.region});
    }
    R.n_vertices = next;

    R.vpos.assign(R.n_vertices, Vec2(0, 0));
    R.vchart.assign(R.n_vertices, 0);
    for (const Tri& t : R.tris)
        for (int e = 0; e < 3; ++e) {
            R.vpos[t.v[e]] = t.p[e];
            R.vchart[t.v[e]] = t.chart;
        }

    for (const BoundaryEdge& be : m.bedges) {
        std::pair<int, int> key = std::minmax(be.va, be.vb);
        auto mit = mid_id.find(key);
        if (mit == mid_id.end())
            throw StructuralError("refine: boundary edge without an adjacent triangle");
        int mid = mit->second;
        const ChartSpec& ch = m.charts[be.chart];
        Vec2 pm;
        if (ch.kind == ChartSpec::Kind::strip) {
            auto am = arc_mid.find(key);
            pm = (am != arc_mid.end() && am->second.has_strip) ? am->second.strip_xy
                                                               : strip_midpoint(be.p[0], be.p[1]);
        } else {
            pm = hyper_midpoint(be.p[0], be.p[1]);
            for (const auto& [k, v] : disk_pos)
                if (k.first == key) pm = v;
        }
        double smid = 0.5 * (be.s_a + be.s_b);
        BoundaryEdge b1 = be, b2 = be;
        b1.vb = mid;
        b1.p = {be.p[0], pm};
        b1.s_b = smid;
        b1.hyp_length = edge_hyp_length(ch, b1.p[0], b1.p[1]);
        b2.va = mid;
        b2.p = {pm, be.p[1]};
        b2.s_a = smid;
        b2.hyp_length = edge_hyp_length(ch, b2.p[0], b2.p[1]);
        R.bedges.push_back(b1);
        R.bedges.push_back(b2);
    }

    R.arcs = m.arcs;
    for (ArcInterface& ai : R.arcs) {
        std::vector<int> nn;
        std::vector<double> ns;
        for (size_t j = 0; j + 1 < ai.nodes.size(); ++j) {
            nn.push_back(ai.nodes[j]);
            ns.push_back(ai.s[j]);
            nn.push_back(mid_id.at(std::minmax(ai.nodes[j], ai.nodes[j + 1])));
            ns.push_back(0.5 * (ai.s[j] + ai.s[j + 1]));
        }
        nn.push_back(ai.nodes.back());
        ns.push_back(ai.s.back());
        ai.nodes = std::move(nn);
        ai.s = std::move(ns);
    }
    R.geodesic_chains = m.geodesic_chains;
    for (auto& ch : R.geodesic_chains) {
        std::vector<int> nn;
        for (size_t j = 0; j + 1 < ch.size(); ++j) {
            nn.push_back(ch[j]);
            nn.push_back(mid_id.at(std::minmax(ch[j], ch[j + 1])));
        }
        nn.push_back(ch.back());
        ch = std::move(nn);
    }
    R.cuffs = m.cuffs;
    for (CuffRecord& c : R.cuffs) {
        c.m *= 2;
        c.nt *= 2;
        std::vector<int> cn;
        size_t n = c.core_nodes.size();
        for (size_t j = 0; j < n; ++j) {
            int a = c.core_nodes[j], b = c.core_nodes[(j + 1) % n];
            cn.push_back(a);
            auto it = mid_id.find(std::minmax(a, b));
            if (it == mid_id.end()) throw StructuralError("refine: missing core circle midpoint");
            cn.push_back(it->second);
        }
        c.core_nodes = std::move(cn);
    }
    R.validate();
    return R;
}

}  // namespace steklab::mesh
