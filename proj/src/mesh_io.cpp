#include <cstdio>
#include <cstring>
#include <sstream>

#include "steklab/errors.hpp"
#include "steklab/mesh.hpp"

namespace steklab::mesh {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Lines {
    std::istringstream in;
    int lineno = 0;
    explicit Lines(const std::string& s) : in(s) {}
    std::string next() {
        std::string line;
        if (!std::getline(in, line)) throw ParseError("mesh import: unexpected end of file");
        ++lineno;
        return line;
    }
};

}  // namespace

std::string export_mesh_text(const SurfaceMesh& m) {
    std::ostringstream os;
    os << "steklab-mesh 1\n";
    os << "charts " << m.charts.size() << "\n";
    for (size_t i = 0; i < m.charts.size(); ++i) {
        const ChartSpec& c = m.charts[i];
        os << i << " " << (c.kind == ChartSpec::Kind::strip ? "strip" : "disk") << " "
           << fmt(c.radius) << "\n";
    }
    os << "vertices " << m.n_vertices << "\n";
    for (int v = 0; v < m.n_vertices; ++v)
        os << v << " " << m.vchart[v] << " " << fmt(m.vpos[v].x()) << " " << fmt(m.vpos[v].y())
           << "\n";
    os << "regions " << m.regions.size() << "\n";
    for (const Region& r : m.regions)
        os << (r.kind == Region::Kind::collar ? "collar" : "core") << " " << r.cuff << " "
           << r.pants << " " << r.hexside << "\n";
    os << "triangles " << m.tris.size() << "\n";
    for (const Tri& t : m.tris) {
        os << t.v[0] << " " << t.v[1] << " " << t.v[2] << " " << t.chart << " " << t.region;
        for (int e = 0; e < 3; ++e) os << " " << fmt(t.p[e].x()) << " " << fmt(t.p[e].y());
        os << "\n";
    }
    os << "boundary_components " << m.boundary_names.size() << "\n";
    for (size_t b = 0; b < m.boundary_names.size(); ++b)
        os << m.boundary_names[b] << " " << fmt(m.boundary_ref_length[b]) << "\n";
    os << "boundary_edges " << m.bedges.size() << "\n";
    for (const BoundaryEdge& e : m.bedges) {
        os << e.va << " " << e.vb << " " << e.chart << " " << e.component << " " << fmt(e.s_a)
           << " " << fmt(e.s_b) << " " << fmt(e.hyp_length) << " " << fmt(e.p[0].x()) << " "
           << fmt(e.p[0].y()) << " " << fmt(e.p[1].x()) << " " << fmt(e.p[1].y()) << "\n";
    }
    os << "target_h " << fmt(m.target_h) << "\n";
    os << "refinement_level " << m.refinement_level << "\n";
    os << "end\n";
    return os.str();
}

SurfaceMesh import_mesh_text(const std::string& text) {
    Lines L(text);
    auto expect_header = [&](const std::string& line, const char* word) -> long {
        std::istringstream is(line);
        std::string w;
        long n = 0;
        if (!(is >> w >> n) || w != word)
            throw ParseError(std::string("mesh import: expected '") + word + "' header, got: " +
                             line);
        return n;
    };
    {
        std::string magic = L.next();
        if (magic != "steklab-mesh 1")
            throw ParseError("mesh import: bad magic line: " + magic);
    }
    SurfaceMesh m;
    long nch = expect_header(L.next(), "charts");
    m.charts.resize(nch);
    for (long i = 0; i < nch; ++i) {
        std::istringstream is(L.next());
        long id;
        std::string kind;
        double radius;
        if (!(is >> id >> kind >> radius) || id != i)
            throw ParseError("mesh import: bad chart line");
        m.charts[i].kind = kind == "strip" ? ChartSpec::Kind::strip : ChartSpec::Kind::disk;
        m.charts[i].radius = radius;
    }
    long nv = expect_header(L.next(), "vertices");
    m.n_vertices = static_cast<int>(nv);
    m.vpos.resize(nv);
    m.vchart.resize(nv);
    for (long i = 0; i < nv; ++i) {
        std::istringstream is(L.next());
        long id, chart;
        double x, y;
        if (!(is >> id >> chart >> x >> y) || id != i)
            throw ParseError("mesh import: bad vertex line " + std::to_string(i));
        m.vchart[i] = static_cast<int>(chart);
        m.vpos[i] = Vec2(x, y);
    }
    long nr = expect_header(L.next(), "regions");
    for (long i = 0; i < nr; ++i) {
        std::istringstream is(L.next());
        std::string kind;
        Region r;
        if (!(is >> kind >> r.cuff >> r.pants >> r.hexside))
            throw ParseError("mesh import: bad region line");
        r.kind = kind == "collar" ? Region::Kind::collar : Region::Kind::core;
        m.regions.push_back(r);
    }
    long ntri = expect_header(L.next(), "triangles");
    for (long i = 0; i < ntri; ++i) {
        std::istringstream is(L.next());
        Tri t;
        double c[6];
        if (!(is >> t.v[0] >> t.v[1] >> t.v[2] >> t.chart >> t.region >> c[0] >> c[1] >> c[2] >>
              c[3] >> c[4] >> c[5]))
            throw ParseError("mesh import: bad triangle line " + std::to_string(i));
        for (int e = 0; e < 3; ++e) t.p[e] = Vec2(c[2 * e], c[2 * e + 1]);
        m.tris.push_back(t);
    }
    long nb = expect_header(L.next(), "boundary_components");
    for (long i = 0; i < nb; ++i) {
        std::istringstream is(L.next());
        std::string name;
        double ref;
        if (!(is >> name >> ref)) throw ParseError("mesh import: bad boundary component line");
        m.boundary_names.push_back(name);
        m.boundary_ref_length.push_back(ref);
    }
    long nbe = expect_header(L.next(), "boundary_edges");
    for (long i = 0; i < nbe; ++i) {
        std::istringstream is(L.next());
        BoundaryEdge e;
        double xa, ya, xb, yb;
        if (!(is >> e.va >> e.vb >> e.chart >> e.component >> e.s_a >> e.s_b >> e.hyp_length >>
              xa >> ya >> xb >> yb))
            throw ParseError("mesh import: bad boundary edge line " + std::to_string(i));
        e.p = {Vec2(xa, ya), Vec2(xb, yb)};
        m.bedges.push_back(e);
    }
    {
        std::istringstream is(L.next());
        std::string w;
        if (!(is >> w >> m.target_h) || w != "target_h")
            throw ParseError("mesh import: missing target_h");
    }
    {
        std::istringstream is(L.next());
        std::string w;
        if (!(is >> w >> m.refinement_level) || w != "refinement_level")
            throw ParseError("mesh import: missing refinement_level");
    }
    if (L.next() != "end") throw ParseError("mesh import: missing end marker");
    m.validate();
    return m;
}

}  // namespace steklab::mesh
