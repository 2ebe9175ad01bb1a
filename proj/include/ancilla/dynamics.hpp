// dynamics.hpp — initial states, ground states and real-time propagation

#pragma once

#include "ancilla/hilbert.hpp"
#include "ancilla/operator.hpp"

#include <functional>
#include <vector>

namespace ancilla {

struct PureState {
    Vector amplitudes;
    double time = 0.0;   // units of 1/|J|

    double norm_error() const { return std::abs(amplitudes.norm() - 1.0); }
};

struct TimeGrid {
    double t_start = 0.0;
    double t_end = 50.0;
    double sample_dt = 0.1;

    void validate() const;
    std::size_t size() const;         // number of samples, both ends included
    double at(std::size_t k) const;   // t_start + k * sample_dt, clipped to t_end
    bool operator==(const TimeGrid&) const = default;
};

struct PropagatorOptions {
    Index dense_threshold = 4096;   // full eigendecomposition when D <= this
    int krylov_max_dim = 40;
    double tolerance = 1e-10;       // local error per Krylov step
    int max_retries = 30;           // consecutive step halvings before giving up
};

enum class Propagation { automatic, dense, krylov };

struct EigensolverOptions {
    double tolerance = 1e-12;       // residual norm |H x - E x|
    int krylov_dim = 80;
    int max_restarts = 200;
    unsigned seed = 20211;          // start vector for the fallback run
};

struct Eigenpair {
    double energy = 0.0;
    Vector vector;
    double residual = 0.0;
};

// |up...up>_z (x) |0>.
PureState prepare_polarized(const ModelParams& p);

// All spins along +x (sign > 0) or -x, boson vacuum. An S_x eigenstate with
// eigenvalue sign * L.
PureState prepare_x_polarized(const ModelParams& p, int sign = +1);

// Lowest eigenpair by restarted Lanczos with full reorthogonalization.
Eigenpair lowest_eigenpair(const HermitianOperator& H, const Vector& start, const EigensolverOptions& opts = {});

// Ground state of build_ising(spin_only(p)) tensored with the boson vacuum of
// p. The Lanczos run starts from |up...up>, so within a degenerate ground
// space the state is the projection of the +z polarized state; a second run
// from a seeded random vector guards against a start orthogonal to the
// ground space. The global phase makes the largest amplitude real positive.
struct GroundState {
    PureState state;
    double energy = 0.0;
    double residual = 0.0;
};
GroundState prepare_spin_ground_state(const ModelParams& p, const EigensolverOptions& opts = {});

// Krylov (Lanczos) propagator for exp(-i H dt) with adaptive step size.
class KrylovPropagator {
public:
    KrylovPropagator(const HermitianOperator& H, PropagatorOptions opts = {});

    // Advances psi by dt in place, subdividing the step when the Krylov
    // error estimate exceeds the tolerance at the maximal dimension.
    void advance(Vector& psi, double dt);

    std::size_t matvecs() const { return matvecs_; }

private:
    bool try_step(const Vector& psi, double tau, Vector& out);

    const HermitianOperator& H_;
    PropagatorOptions opts_;
    double scale_;
    std::size_t matvecs_ = 0;
};

// exp(-i H t) by a single dense eigendecomposition.
class DensePropagator {
public:
    explicit DensePropagator(const HermitianOperator& H);
    Vector at(const Vector& psi0, double t) const;

private:
    RealVector energies_;
    Matrix vectors_;
};

using SampleCallback = std::function<void(const PureState&)>;

// Calls on_sample with psi(t_k) for every grid point. psi0.time is the
// reference time of the initial amplitudes (normally 0).
void evolve(const PureState& psi0, const HermitianOperator& H, const TimeGrid& grid, const SampleCallback& on_sample,
            const PropagatorOptions& opts = {}, Propagation method = Propagation::automatic);

std::vector<PureState> evolve(const PureState& psi0, const HermitianOperator& H, const TimeGrid& grid,
                              const PropagatorOptions& opts = {}, Propagation method = Propagation::automatic);

} // namespace ancilla
