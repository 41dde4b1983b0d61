#include <algorithm>
#include <cmath>

#include "steklab/errors.hpp"
#include "steklab/hypgeom.hpp"
#include "steklab/steklov.hpp"

namespace steklab::steklov {

using hypgeom::gudermannian;
using hypgeom::tube_width;

namespace {

// One RK4 sweep of the radial system u' = v / cosh t, v' = mu^2 u / cosh t
// (v = cosh t * u'), from t0 to t1.
struct State {
    double u, v;
};

State rk4_sweep(State y, double t0, double t1, double mu, int steps) {
    auto f = [mu](double t, State s) {
        double c = std::cosh(t);
        return State{s.v / c, mu * mu * s.u / c};
    };
    double h = (t1 - t0) / steps;
    double t = t0;
    for (int i = 0; i < steps; ++i) {
        State k1 = f(t, y);
        State k2 = f(t + h / 2, {y.u + h / 2 * k1.u, y.v + h / 2 * k1.v});
        State k3 = f(t + h / 2, {y.u + h / 2 * k2.u, y.v + h / 2 * k2.v});
        State k4 = f(t + h, {y.u + h * k3.u, y.v + h * k3.v});
        y.u += h / 6 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u);
        y.v += h / 6 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v);
        t += h;
    }
    return y;
}

int steps_for(double mu, double w) {
    // RK4 global error ~ w h^4 mu^5 / 120; aim below 1e-12 relative
    double target = 1e-12;
    double m5 = std::pow(std::max(mu, 1.0), 5.0);
    double h = std::pow(target * 120.0 / (std::max(w, 0.1) * m5), 0.25);
    int n = static_cast<int>(std::ceil(w / h));
    return std::clamp(n, 4000, 4000000);
}

}  // namespace

double shoot_halfcollar_sigma(double core_length, int n, FarCondition far) {
    if (!(core_length > 0)) throw DomainError("shooting: core length must be positive");
    if (n < 0) throw DomainError("shooting: mode index must be >= 0");
    double w = tube_width(core_length);
    double mu = 2.0 * M_PI * n / core_length;
    if (n == 0 && far == FarCondition::neumann) return 0.0;
    // integrate from the far end toward the core; v = cosh t * u'
    State y = far == FarCondition::neumann ? State{1.0, 0.0} : State{0.0, -1.0};
    y = rk4_sweep(y, w, 0.0, mu, steps_for(mu, w));
    // outward normal at the core points toward -t: sigma = -u'(0)/u(0)
    return -y.v / y.u;
}

double shoot_cylinder_sigma(double core_length, int n, int parity) {
    if (!(core_length > 0)) throw DomainError("shooting: core length must be positive");
    if (n < 0 || (parity != 0 && parity != 1))
        throw DomainError("shooting: bad mode or parity");
    double w = tube_width(core_length);
    double mu = 2.0 * M_PI * n / core_length;
    if (n == 0 && parity == 0) return 0.0;
    State y = parity == 0 ? State{1.0, 0.0} : State{0.0, 1.0};  // even/odd at t = 0
    y = rk4_sweep(y, 0.0, w, mu, steps_for(mu, w));
    // outward normal at the far circle points toward +t: sigma = u'(w)/u(w)
    return (y.v / std::cosh(w)) / y.u;
}

std::vector<ModeValue> halfcollar_model_spectrum(double core_length, FarCondition far,
                                                 int n_max) {
    if (!(core_length > 0))
        throw DomainError("halfcollar_model_spectrum: core length must be positive");
    if (n_max < 0) throw DomainError("halfcollar_model_spectrum: n_max must be >= 0");
    double tau = gudermannian(tube_width(core_length));
    std::vector<ModeValue> out;
    for (int n = 0; n <= n_max; ++n) {
        double mu = 2.0 * M_PI * n / core_length;
        double sigma;
        if (far == FarCondition::neumann)
            sigma = n == 0 ? 0.0 : mu * std::tanh(mu * tau);
        else
            sigma = n == 0 ? 1.0 / tau : mu / std::tanh(mu * tau);
        out.push_back({n, 0, sigma});
    }
    return out;
}

std::vector<ModeValue> cylinder_model_spectrum(double core_length, int n_max) {
    if (!(core_length > 0))
        throw DomainError("cylinder_model_spectrum: core length must be positive");
    if (n_max < 0) throw DomainError("cylinder_model_spectrum: n_max must be >= 0");
    std::vector<ModeValue> out;
    for (int n = 0; n <= n_max; ++n)
        for (int parity = 0; parity < 2; ++parity)
            out.push_back({n, parity, shoot_cylinder_sigma(core_length, n, parity)});
    std::sort(out.begin(), out.end(), [](const ModeValue& a, const ModeValue& b) {
        if (a.n != b.n) return a.n < b.n;
        return a.parity < b.parity;
    });
    return out;
}

}  // namespace steklab::steklov
