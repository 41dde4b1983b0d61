#include "steklab/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "steklab/errors.hpp"

namespace steklab::dela {

namespace {

double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    // > 0 iff d is inside the circumcircle of CCW triangle abc
    double adx = a.x() - d.x(), ady = a.y() - d.y();
    double bdx = b.x() - d.x(), bdy = b.y() - d.y();
    double cdx = c.x() - d.x(), cdy = c.y() - d.y();
    double ad = adx * adx + ady * ady;
    double bd = bdx * bdx + bdy * bdy;
    double cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - cdy * bd) - ady * (bdx * cd - cdx * bd) +
           ad * (bdx * cdy - cdx * bdy);
}

struct Tri {
    std::array<int, 3> v{-1, -1, -1};
    std::array<int, 3> n{-1, -1, -1};  // neighbor across edge opposite v[i]
    bool alive = false;
};

struct Triangulation {
    std::vector<Vec2> pts;
    std::vector<Tri> tris;
    int last = -1;

    int locate(const Vec2& p) const {
        int t = last;
        if (t < 0 || !tris[t].alive) {
            for (size_t i = 0; i < tris.size(); ++i)
                if (tris[i].alive) {
                    t = static_cast<int>(i);
                    break;
                }
        }
        int guard = static_cast<int>(tris.size()) + 16;
        for (int step = 0; step < guard; ++step) {
            const Tri& tr = tris[t];
            int exit_edge = -1;
            for (int e = 0; e < 3; ++e) {
                const Vec2& a = pts[tr.v[(e + 1) % 3]];
                const Vec2& b = pts[tr.v[(e + 2) % 3]];
                if (orient2d(a, b, p) < 0) {
                    exit_edge = e;
                    break;
                }
            }
            if (exit_edge < 0) return t;
            int nt = tr.n[exit_edge];
            if (nt < 0) return t;
            t = nt;
        }
        throw GeometricError("delaunay: point location did not terminate");
    }

    void insert(int pi) {
        const Vec2& p = pts[pi];
        int t0 = locate(p);
        std::vector<int> cavity;
        std::vector<char> in_cavity(tris.size(), 0);
        std::vector<int> stack{t0};
        in_cavity[t0] = 1;
        while (!stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            cavity.push_back(t);
            for (int e = 0; e < 3; ++e) {
                int nt = tris[t].n[e];
                if (nt < 0 || in_cavity[nt]) continue;
                const Tri& tr = tris[nt];
                if (incircle(pts[tr.v[0]], pts[tr.v[1]], pts[tr.v[2]], p) > 0) {
                    in_cavity[nt] = 1;
                    stack.push_back(nt);
                }
            }
        }
        struct BEdge {
            int u, v, outer;
        };
        std::vector<BEdge> ring;
        for (int t : cavity) {
            for (int e = 0; e < 3; ++e) {
                int nt = tris[t].n[e];
                if (nt >= 0 && in_cavity[nt]) continue;
                ring.push_back({tris[t].v[(e + 1) % 3], tris[t].v[(e + 2) % 3], nt});
            }
        }
        for (int t : cavity) tris[t].alive = false;
        std::map<int, int> fan_at;  // u -> new tri (p, u, v)
        std::vector<int> created;
        for (const BEdge& be : ring) {
            Tri nt;
            nt.v = {pi, be.u, be.v};
            nt.n = {be.outer, -1, -1};
            nt.alive = true;
            int id = static_cast<int>(tris.size());
            tris.push_back(nt);
            created.push_back(id);
            fan_at[be.u] = id;
            if (be.outer >= 0) {
                Tri& ot = tris[be.outer];
                for (int e = 0; e < 3; ++e) {
                    int a = ot.v[(e + 1) % 3], b = ot.v[(e + 2) % 3];
                    if (a == be.v && b == be.u) ot.n[e] = id;
                }
            }
        }
        for (int id : created) {
            Tri& tr = tris[id];
            tr.n[1] = fan_at.at(tr.v[2]);  // across (p, v): fan starting at v
            // across (p, u): the fan triangle ending at u
            for (int other : created)
                if (tris[other].v[2] == tr.v[1]) tr.n[2] = other;
        }
        last = created.front();
    }

    bool edge_exists(int a, int b) const {
        for (const Tri& t : tris) {
            if (!t.alive) continue;
            for (int e = 0; e < 3; ++e) {
                int u = t.v[e], v = t.v[(e + 1) % 3];
                if ((u == a && v == b) || (u == b && v == a)) return true;
            }
        }
        return false;
    }

    // flip the diagonal shared by t and tris[t].n[e] (the edge opposite t's v[e])
    void flip(int t, int e) {
        int s = tris[t].n[e];
        int es = -1;
        for (int i = 0; i < 3; ++i)
            if (tris[s].n[i] == t) es = i;
        int a = tris[t].v[e];
        int b = tris[t].v[(e + 1) % 3];
        int c = tris[t].v[(e + 2) % 3];
        int d = tris[s].v[es];
        int n_ca = tris[t].n[(e + 1) % 3];
        int n_ab = tris[t].n[(e + 2) % 3];
        int n_bd = -1, n_dc = -1;
        for (int i = 0; i < 3; ++i) {
            if (tris[s].v[i] == c) n_bd = tris[s].n[i];
            if (tris[s].v[i] == b) n_dc = tris[s].n[i];
        }
        tris[t].v = {a, b, d};
        tris[t].n = {n_bd, s, n_ab};
        tris[s].v = {a, d, c};
        tris[s].n = {n_dc, n_ca, t};
        auto relink = [&](int outer, int old_owner, int new_owner) {
            if (outer < 0) return;
            for (int i = 0; i < 3; ++i)
                if (tris[outer].n[i] == old_owner) tris[outer].n[i] = new_owner;
        };
        relink(n_bd, s, t);
        relink(n_ca, t, s);
    }
};

double dist_point_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    double t = ab.squaredNorm() > 0 ? (p - a).dot(ab) / ab.squaredNorm() : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

}  // namespace

bool point_in_polygon(const std::vector<Vec2>& poly, const Vec2& p) {
    bool inside = false;
    size_t n = poly.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        if ((poly[i].y() > p.y()) != (poly[j].y() > p.y())) {
            double xi = poly[j].x() + (poly[i].x() - poly[j].x()) * (p.y() - poly[j].y()) /
                                          (poly[i].y() - poly[j].y());
            if (p.x() < xi) inside = !inside;
        }
    }
    return inside;
}

PolygonMesh triangulate_polygon(const std::vector<Vec2>& polygon_in, double h) {
    size_t n = polygon_in.size();
    if (n < 3) throw DomainError("triangulate_polygon: need >= 3 nodes");
    double area2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = polygon_in[i];
        const Vec2& b = polygon_in[(i + 1) % n];
        area2 += a.x() * b.y() - b.x() * a.y();
    }
    // normalize to CCW internally; `order[i]` is the input index at slot i
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (area2 < 0)
        for (size_t i = 1; i < n; ++i) order[i] = static_cast<int>(n - i);
    std::vector<Vec2> poly(n);
    for (size_t i = 0; i < n; ++i) poly[i] = polygon_in[order[i]];

    Vec2 lo = poly[0], hi = poly[0];
    for (const Vec2& p : poly) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    std::vector<Vec2> interior;
    double dy = h * std::sqrt(3.0) / 2.0;
    int row = 0;
    for (double y = lo.y() + 0.6 * h; y < hi.y(); y += dy, ++row) {
        double x0 = lo.x() + ((row % 2) ? 0.75 * h : 0.25 * h);
        for (double x = x0; x < hi.x(); x += h) {
            Vec2 p(x, y);
            if (!point_in_polygon(poly, p)) continue;
            double dmin = 1e300;
            for (size_t i = 0; i < n; ++i)
                dmin = std::min(dmin, dist_point_segment(p, poly[i], poly[(i + 1) % n]));
            if (dmin >= 0.7 * h) interior.push_back(p);
        }
    }

    Triangulation T;
    T.pts.reserve(n + interior.size() + 3);
    for (const Vec2& p : poly) T.pts.push_back(p);
    for (const Vec2& p : interior) T.pts.push_back(p);
    Vec2 mid = 0.5 * (lo + hi);
    double R = 4.0 * std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1.0});
    int s0 = static_cast<int>(T.pts.size());
    T.pts.push_back(mid + Vec2(-2.5 * R, -R));
    T.pts.push_back(mid + Vec2(2.5 * R, -R));
    T.pts.push_back(mid + Vec2(0.0, 2.5 * R));
    Tri super;
    super.v = {s0, s0 + 1, s0 + 2};
    super.alive = true;
    T.tris.push_back(super);
    T.last = 0;
    for (int i = 0; i < s0; ++i) T.insert(i);

    // recover polygon edges the Delaunay pass may have dropped
    for (size_t i = 0; i < n; ++i) {
        int a = static_cast<int>(i), b = static_cast<int>((i + 1) % n);
        int guard = 0;
        while (!T.edge_exists(a, b)) {
            if (++guard > 256)
                throw GeometricError("triangulate_polygon: boundary edge recovery stalled");
            bool flipped = false;
            for (size_t t = 0; t < T.tris.size() && !flipped; ++t) {
                if (!T.tris[t].alive) continue;
                for (int e = 0; e < 3 && !flipped; ++e) {
                    if (T.tris[t].n[e] < 0) continue;
                    int u = T.tris[t].v[(e + 1) % 3], v = T.tris[t].v[(e + 2) % 3];
                    if (u == a || u == b || v == a || v == b) continue;
                    const Vec2 &A = T.pts[a], &B = T.pts[b], &U = T.pts[u], &V = T.pts[v];
                    if (orient2d(A, B, U) * orient2d(A, B, V) >= 0) continue;
                    if (orient2d(U, V, A) * orient2d(U, V, B) >= 0) continue;
                    int s = T.tris[t].n[e];
                    int dvert = -1;
                    for (int i2 = 0; i2 < 3; ++i2)
                        if (T.tris[s].n[i2] == static_cast<int>(t)) dvert = T.tris[s].v[i2];
                    int cvert = T.tris[t].v[e];
                    if (dvert < 0) continue;
                    // flip only across a strictly convex quad
                    if (orient2d(T.pts[cvert], T.pts[dvert], U) *
                            orient2d(T.pts[cvert], T.pts[dvert], V) <
                        0) {
                        T.flip(static_cast<int>(t), e);
                        flipped = true;
                    }
                }
            }
            if (!flipped)
                throw GeometricError("triangulate_polygon: boundary edge recovery stalled");
        }
    }

    PolygonMesh out;
    out.n_boundary = static_cast<int>(n);
    out.points.resize(T.pts.size() - 3);
    for (size_t i = 0; i < n; ++i) out.points[i] = polygon_in[i];
    for (size_t i = n; i < T.pts.size() - 3; ++i) out.points[i] = T.pts[i];
    auto remap = [&](int v) { return v < static_cast<int>(n) ? order[v] : v; };
    for (const Tri& t : T.tris) {
        if (!t.alive) continue;
        if (t.v[0] >= s0 || t.v[1] >= s0 || t.v[2] >= s0) continue;
        Vec2 cen = (T.pts[t.v[0]] + T.pts[t.v[1]] + T.pts[t.v[2]]) / 3.0;
        if (!point_in_polygon(poly, cen)) continue;
        out.triangles.push_back({remap(t.v[0]), remap(t.v[1]), remap(t.v[2])});
    }
    if (out.triangles.empty()) throw GeometricError("triangulate_polygon: empty result");

    // capped Laplacian smoothing of interior points
    std::vector<std::vector<int>> nb(out.points.size());
    std::vector<std::vector<int>> inc(out.points.size());
    for (size_t ti = 0; ti < out.triangles.size(); ++ti)
        for (int e = 0; e < 3; ++e) {
            const auto& t = out.triangles[ti];
            nb[t[e]].push_back(t[(e + 1) % 3]);
            inc[t[e]].push_back(static_cast<int>(ti));
        }
    auto tri_ok = [&](const std::array<int, 3>& t) {
        return orient2d(out.points[t[0]], out.points[t[1]], out.points[t[2]]) > 1e-14;
    };
    for (int sweep = 0; sweep < 3; ++sweep) {
        for (size_t i = n; i < out.points.size(); ++i) {
            if (nb[i].empty()) continue;
            Vec2 avg(0, 0);
            for (int j : nb[i]) avg += out.points[j];
            avg /= static_cast<double>(nb[i].size());
            Vec2 old = out.points[i];
            out.points[i] = 0.5 * (old + avg);
            bool ok = true;
            for (int ti : inc[i])
                if (!tri_ok(out.triangles[ti])) ok = false;
            if (!ok) out.points[i] = old;
        }
    }
    for (const auto& t : out.triangles)
        if (!tri_ok(t)) throw GeometricError("triangulate_polygon: inverted element");
    return out;
}

}  // namespace steklab::dela
