// oracles.cpp

#include "ancilla/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ancilla::oracles {
namespace {

void require_exchange(double J) {
    if (!(std::abs(J) > 0.0)) throw ConfigError("dispersion needs |J| > 0");
}

} // namespace

double dispersion(double k, double h, double J) {
    require_exchange(J);
    const double g = h / std::abs(J);
    const double s = std::sin(0.5 * k);
    // 1 + g^2 - 2 g cos k = (1 - g)^2 + 4 g sin^2(k/2)
    return std::abs(J) * std::sqrt(std::max(0.0, (1.0 - g) * (1.0 - g) + 4.0 * g * s * s));
}

double group_velocity(double k, double h, double J) {
    require_exchange(J);
    const double g = h / std::abs(J);
    const double s = std::sin(0.5 * k);
    const double radicand = (1.0 - g) * (1.0 - g) + 4.0 * g * s * s;
    if (radicand == 0.0) return std::abs(J) * std::min(1.0, std::abs(g));  // k -> 0 limit at g = 1
    return std::abs(J) * g * std::sin(k) / std::sqrt(radicand);
}

DispersionPoint dispersion_point(double k, double h, double J) {
    return {k, dispersion(k, h, J), group_velocity(k, h, J)};
}

double max_group_velocity(double h, double J) {
    require_exchange(J);
    if (h < 0.0) throw ConfigError("max_group_velocity expects h >= 0");
    return std::abs(J) * std::min(1.0, h / std::abs(J));
}

double max_group_velocity_numeric(double h, double J, int scan_points) {
    require_exchange(J);
    const double pi = std::numbers::pi;
    const double dk = pi / (scan_points - 1);
    int best = 0;
    double best_v = group_velocity(0.0, h, J);
    for (int i = 1; i < scan_points; ++i) {
        const double v = group_velocity(i * dk, h, J);
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    double a = std::max(0.0, (best - 1) * dk);
    double b = std::min(pi, (best + 1) * dk);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = group_velocity(c, h, J), fd = group_velocity(d, h, J);
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = group_velocity(c, h, J);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = group_velocity(d, h, J);
        }
    }
    return std::max({best_v, fc, fd, group_velocity(a, h, J), group_velocity(b, h, J)});
}

double tfic_ground_energy(int L, double h, double J) {
    if (L < 2 || L % 2 != 0) throw ConfigError("tfic_ground_energy needs an even L >= 2");
    double e = 0.0;
    for (int m = 0; m < L; ++m) e -= dispersion(std::numbers::pi * (2.0 * m + 1.0) / L, h, J);
    return e;
}

double displaced_occupation(double t, double m, const ModelParams& p) {
    if (std::abs(m) > p.L) throw ConfigError("S_x eigenvalue must satisfy |m| <= L");
    if (!(p.omega_c > 0.0)) throw ConfigError("omega_c must be > 0");
    const double g = p.lambda * m / std::sqrt(static_cast<double>(p.L));
    const double amp = 2.0 * g / p.omega_c;
    const double s = std::sin(0.5 * p.omega_c * t);
    return amp * amp * s * s;
}

} // namespace ancilla::oracles
