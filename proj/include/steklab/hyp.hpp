#pragma once

#include <complex>

namespace steklab::hyp {

using cplx = std::complex<double>;

/// Orientation-preserving or -reversing Moebius transformation,
/// z -> (a z + b)/(c z + d), optionally conjugating z first.
struct Mobius {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};
    bool conj_first{false};

    cplx operator()(cplx z) const {
        if (conj_first) z = std::conj(z);
        return (a * z + b) / (c * z + d);
    }

    Mobius inverse() const;
};

/// compose(f, g) acts as z -> f(g(z)).
Mobius compose(const Mobius& f, const Mobius& g);

// --- Poincare disk model (curvature -1, metric 2|dz|/(1-|z|^2)) ---

double disk_dist(cplx z, cplx w);
/// Conformal factor of the disk of chart radius R (default 1): 2R/(R^2-|z|^2).
double disk_conformal_factor(cplx z, double radius = 1.0);
/// Hyperbolic midpoint of the geodesic segment [z, w].
cplx disk_geodesic_midpoint(cplx z, cplx w);
/// Point at hyperbolic distance d from z toward w along their geodesic.
cplx disk_geodesic_point(cplx z, cplx w, double d);

/// Disk automorphism sending p to the origin.
Mobius disk_translate_to_origin(cplx p);
/// Translation by distance d along the real-axis geodesic (0 -> tanh(d/2)).
Mobius disk_axis_translation(double d);
/// Rotation about the origin.
Mobius disk_rotation(double angle);

// --- Upper half-plane model (metric |dz|/Im z) ---

double uhp_dist(cplx z, cplx w);
/// Cayley map, disk -> upper half-plane (0 -> i, real diameter -> i R+).
Mobius cayley_disk_to_uhp();

/// Fermi coordinates attached to an oriented geodesic segment A -> B in the
/// disk. point(t, s) is the disk image of the point at signed distance t from
/// the geodesic whose foot lies at arclength s from A; the t > 0 side is the
/// side containing `side_probe`. s = 0 maps to A.
struct FermiFrame {
    Mobius uhp_to_disk;  // composed placement map
    cplx point(double t, double s) const;
};

FermiFrame fermi_frame(cplx A, cplx B, cplx side_probe);

}  // namespace steklab::hyp
