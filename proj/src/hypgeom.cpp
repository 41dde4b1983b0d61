#include "steklab/hypgeom.hpp"

#include <cmath>

#include "steklab/errors.hpp"

namespace steklab::hypgeom {

using hyp::cplx;
using hyp::Mobius;

namespace {
constexpr double kMinLength = 1e-6;

void require_positive_length(double v, const char* what) {
    if (!std::isfinite(v) || v <= 0.0)
        throw DomainError(std::string(what) + ": length must be positive and finite");
    if (v < kMinLength)
        throw DomainError(std::string(what) + ": length below 1e-6 is outside the supported range");
}
}  // namespace

double opposite_side(double x, double y, double z) {
    double num = std::cosh(x) + std::cosh(y) * std::cosh(z);
    double den = std::sinh(y) * std::sinh(z);
    return std::acosh(num / den);
}

double Hexagon::identity_residual() const {
    double r = 0.0;
    for (int k = 0; k < 3; ++k) {
        double a = side[(2 * k + 2) % 6], b = side[(2 * k + 4) % 6];
        double c = side[2 * k], copp = side[(2 * k + 3) % 6];
        double lhs = std::cosh(c);
        double rhs = std::sinh(a) * std::sinh(b) * std::cosh(copp) - std::cosh(a) * std::cosh(b);
        r = std::max(r, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    return r;
}

Hexagon hexagon_from_alternating_sides(double a, double b, double c) {
    require_positive_length(a, "hexagon side a");
    require_positive_length(b, "hexagon side b");
    require_positive_length(c, "hexagon side c");

    Hexagon h;
    h.side[0] = a;
    h.side[2] = b;
    h.side[4] = c;
    h.side[1] = opposite_side(c, a, b);
    h.side[3] = opposite_side(a, b, c);
    h.side[5] = opposite_side(b, c, a);

    // Realize by walking the sides in the disk, turning a right angle at
    // each vertex. The walk must close up; if it does not, the chart has
    // degenerated numerically.
    Mobius frame;  // identity
    for (int i = 0; i < 6; ++i) {
        h.vertex[i] = frame(cplx(0.0));
        frame = hyp::compose(frame, hyp::disk_axis_translation(h.side[i]));
        frame = hyp::compose(frame, hyp::disk_rotation(M_PI / 2.0));
    }
    double closure = std::abs(frame(cplx(0.0)) - h.vertex[0]);
    double max_abs = 0.0;
    for (const auto& v : h.vertex) max_abs = std::max(max_abs, std::abs(v));
    if (!(closure < 1e-9) || max_abs > 1.0 - 1e-9)
        throw GeometricError("hexagon chart degenerated for sides (" + std::to_string(a) + ", " +
                             std::to_string(b) + ", " + std::to_string(c) + ")");

    // Recenter on the Euclidean vertex barycenter for numerical comfort.
    cplx bary(0.0);
    for (const auto& v : h.vertex) bary += v;
    bary /= 6.0;
    Mobius recenter = hyp::disk_translate_to_origin(bary);
    for (auto& v : h.vertex) v = recenter(v);

    // The walk realizes side lengths exactly by construction; check anyway.
    for (int i = 0; i < 6; ++i) {
        double d = hyp::disk_dist(h.vertex[i], h.vertex[(i + 1) % 6]);
        if (std::abs(d - h.side[i]) > 1e-8 * (1.0 + h.side[i]))
            throw GeometricError("hexagon side realization drifted");
    }
    return h;
}

hyp::FermiFrame Pants::cuff_frame(int k) const {
    cplx A = hex.vertex[2 * k];
    cplx B = hex.vertex[(2 * k + 1) % 6];
    cplx probe = hex.vertex[(2 * k + 3) % 6];  // an opposite vertex, inside
    return hyp::fermi_frame(A, B, probe);
}

Pants pants_from_boundary_lengths(double l1, double l2, double l3) {
    Pants p;
    p.boundary_length = {l1, l2, l3};
    p.hex = hexagon_from_alternating_sides(l1 / 2.0, l2 / 2.0, l3 / 2.0);
    for (int k = 0; k < 3; ++k) {
        p.seam_length[k] = p.hex.side[2 * k + 1];
        p.collar_width[k] = tube_width(p.boundary_length[k]);
    }
    // Collar disjointness along each seam; equality is impossible for
    // embedded collars, so a violation means the chart went bad.
    for (int k = 0; k < 3; ++k) {
        int kn = (k + 1) % 3;
        if (p.collar_width[k] + p.collar_width[kn] >= p.seam_length[k])
            throw GeometricError("pants collars overlap along a seam; lengths (" +
                                 std::to_string(l1) + ", " + std::to_string(l2) + ", " +
                                 std::to_string(l3) + ")");
    }
    return p;
}

double tube_width(double core_length) {
    require_positive_length(core_length, "tube_width");
    return std::asinh(1.0 / std::sinh(core_length / 2.0));
}

double epsilon_circ(double beta) {
    require_positive_length(beta, "epsilon_circ");
    return std::min(std::asinh(1.0), tube_width(beta));
}

double gudermannian(double t) {
    if (!std::isfinite(t)) throw DomainError("gudermannian: non-finite input");
    return std::atan(std::sinh(t));
}

double inverse_gudermannian(double tau) {
    return std::asinh(std::tan(tau));
}

double ThickThin::thin_area() const {
    double a = 0.0;
    for (const auto& c : thin_collars) a += c.area;
    for (const auto& c : half_collars) a += c.area;
    return a;
}

double ThickThin::thick_area() const {
    double a = 0.0;
    for (const auto& c : thick_components) a += c.area;
    return a;
}

ThickThin thick_thin_decomposition(const topo::PantsGraph& spec, double beta) {
    spec.validate();
    if (spec.num_boundaries() == 0)
        throw DomainError("thick_thin_decomposition: surface has no boundary");
    if (std::abs(beta - spec.beta()) > 1e-12 * std::max(1.0, spec.beta()))
        throw DomainError("thick_thin_decomposition: beta is not the maximum boundary length");

    ThickThin tt;
    tt.epsilon = epsilon_circ(beta);

    std::vector<int> thin_edges;
    for (int e = 0; e < spec.num_edges(); ++e) {
        double len = spec.edges[e].length;
        if (len <= 2.0 * tt.epsilon) {
            Collar c;
            c.kind = Collar::Kind::full;
            c.core_length = len;
            c.width = tube_width(len);
            c.area = 2.0 * len * std::sinh(c.width);
            c.edge = e;
            tt.thin_collars.push_back(c);
            thin_edges.push_back(e);
        }
    }
    for (int b = 0; b < spec.num_boundaries(); ++b) {
        Collar c;
        c.kind = Collar::Kind::half;
        c.core_length = spec.boundaries[b].length;
        c.width = tube_width(c.core_length);
        c.area = c.core_length * std::sinh(c.width);
        c.boundary = b;
        tt.half_collars.push_back(c);
    }

    int n_comp = 0;
    std::vector<int> comp = spec.components_without(thin_edges, &n_comp);
    tt.thick_components.resize(n_comp);
    for (int i = 0; i < spec.num_pants(); ++i) {
        tt.thick_components[comp[i]].pants.push_back(i);
        tt.thick_components[comp[i]].area += 2.0 * M_PI;  // each pants has area 2pi
    }
    // subtract the collar parts that sit inside each component
    for (const auto& c : tt.thin_collars) {
        const auto& ed = spec.edges[c.edge];
        tt.thick_components[comp[ed.end1.pants]].area -= c.area / 2.0;
        tt.thick_components[comp[ed.end2.pants]].area -= c.area / 2.0;
    }
    for (const auto& c : tt.half_collars) {
        const auto& bl = spec.boundaries[c.boundary];
        tt.thick_components[comp[bl.at.pants]].area -= c.area;
    }
    return tt;
}

}  // namespace steklab::hypgeom
