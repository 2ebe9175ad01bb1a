// oracles.hpp — closed-form references: free-fermion solution of the
// transverse-field Ising chain and the J = 0 displaced oscillator

#pragma once

#include "ancilla/hilbert.hpp"

namespace ancilla::oracles {

struct DispersionPoint {
    double k = 0.0;
    double epsilon = 0.0;
    double velocity = 0.0;
};

// eps_k = |J| sqrt(1 + g^2 - 2 g cos k), g = h/|J|.
double dispersion(double k, double h, double J);

// d eps_k / dk, written with (1 - cos k) = 2 sin^2(k/2) so it stays finite at
// the critical point.
double group_velocity(double k, double h, double J);

DispersionPoint dispersion_point(double k, double h, double J);

// |J| min(1, h/|J|).
double max_group_velocity(double h, double J);

// Brute-force maximization of group_velocity over k in [0, pi]: a uniform
// scan followed by golden-section refinement of the best bracket.
double max_group_velocity_numeric(double h, double J, int scan_points = 20001);

// -sum_k eps_k over k = pi (2m + 1) / L, m = 0..L-1. L must be even.
double tfic_ground_energy(int L, double h, double J);

// (2 g / omega_c)^2 sin^2(omega_c t / 2), g = lambda m / sqrt(L): boson
// occupation at J = 0 for an S_x eigenstate |m> (x) |0>.
double displaced_occupation(double t, double m, const ModelParams& p);

} // namespace ancilla::oracles
