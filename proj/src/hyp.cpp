#include "steklab/hyp.hpp"

#include <cmath>

#include "steklab/errors.hpp"

namespace steklab::hyp {

Mobius Mobius::inverse() const {
    if (!conj_first) {
        return Mobius{d, -b, -c, a, false};
    }
    // w = (a conj(z) + b)/(c conj(z) + d)  =>  z = conj((d w - b)/(-c w + a))
    return Mobius{std::conj(d), std::conj(-b), std::conj(-c), std::conj(a), true};
}

Mobius compose(const Mobius& f, const Mobius& g) {
    cplx ga = g.a, gb = g.b, gc = g.c, gd = g.d;
    if (f.conj_first) {
        ga = std::conj(ga);
        gb = std::conj(gb);
        gc = std::conj(gc);
        gd = std::conj(gd);
    }
    Mobius r;
    r.a = f.a * ga + f.b * gc;
    r.b = f.a * gb + f.b * gd;
    r.c = f.c * ga + f.d * gc;
    r.d = f.c * gb + f.d * gd;
    r.conj_first = f.conj_first != g.conj_first;
    return r;
}

double disk_dist(cplx z, cplx w) {
    double num = std::abs(z - w);
    double den = std::abs(1.0 - z * std::conj(w));
    return 2.0 * std::atanh(num / den);
}

double disk_conformal_factor(cplx z, double radius) {
    return 2.0 * radius / (radius * radius - std::norm(z));
}

Mobius disk_translate_to_origin(cplx p) {
    // z -> (z - p)/(1 - conj(p) z)
    return Mobius{1.0, -p, -std::conj(p), 1.0, false};
}

Mobius disk_axis_translation(double d) {
    double th = std::tanh(d / 2.0);
    return Mobius{1.0, th, th, 1.0, false};
}

Mobius disk_rotation(double angle) {
    return Mobius{std::polar(1.0, angle), 0.0, 0.0, 1.0, false};
}

cplx disk_geodesic_point(cplx z, cplx w, double d) {
    Mobius to0 = disk_translate_to_origin(z);
    cplx u = to0(w);
    double au = std::abs(u);
    if (au == 0.0) return z;
    cplx dir = u / au;
    double r = std::tanh(d / 2.0);
    return to0.inverse()(r * dir);
}

cplx disk_geodesic_midpoint(cplx z, cplx w) {
    return disk_geodesic_point(z, w, disk_dist(z, w) / 2.0);
}

double uhp_dist(cplx z, cplx w) {
    double t = std::norm(z - w) / (2.0 * z.imag() * w.imag());
    return std::acosh(1.0 + t);
}

Mobius cayley_disk_to_uhp() {
    // w = i (1 + z)/(1 - z); maps 0 -> i and the real diameter onto i R+
    // with arclength preserved: t -> i e^{dist(0,t)}.
    return Mobius{cplx(0, 1), cplx(0, 1), -1.0, 1.0, false};
}

cplx FermiFrame::point(double t, double s) const {
    // In the half-plane, Fermi coordinates about i R+ with s = 0 at i:
    // z = e^s (tanh t + i sech t); t > 0 is the Re z > 0 side.
    cplx z = std::exp(s) * cplx(std::tanh(t), 1.0 / std::cosh(t));
    return uhp_to_disk(z);
}

FermiFrame fermi_frame(cplx A, cplx B, cplx side_probe) {
    Mobius toO = disk_translate_to_origin(A);
    cplx Bi = toO(B);
    if (std::abs(Bi) < 1e-15) throw GeometricError("fermi_frame: coincident endpoints");
    Mobius rot = disk_rotation(-std::arg(Bi));
    Mobius W = compose(rot, toO);     // A -> 0, B -> positive real axis
    Mobius G = compose(cayley_disk_to_uhp(), W);  // disk -> UHP, A -> i
    Mobius U = G.inverse();

    // The +t Fermi side (Re > 0 in UHP) maps to Im < 0 in the W-frame.
    // Flip with the UHP reflection z -> -conj(z) if the probe is on Im > 0.
    if (W(side_probe).imag() > 0.0) {
        Mobius flip{-1.0, 0.0, 0.0, 1.0, true};
        U = compose(U, flip);
    }
    FermiFrame fr;
    fr.uhp_to_disk = U;
    return fr;
}

}  // namespace steklab::hyp
