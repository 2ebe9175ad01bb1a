// dynamics.cpp — state preparation, Lanczos ground states, propagation

#include "ancilla/dynamics.hpp"

#include "ancilla/hamiltonian.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace ancilla {

void TimeGrid::validate() const {
    if (!(t_start >= 0.0)) throw ConfigError("t_start must be >= 0");
    if (!(t_end > t_start)) throw ConfigError("t_end must be greater than t_start");
    if (!(sample_dt > 0.0)) throw ConfigError("sample_dt must be > 0");
}

std::size_t TimeGrid::size() const {
    validate();
    const double steps = (t_end - t_start) / sample_dt;
    return static_cast<std::size_t>(std::ceil(steps - 1e-9)) + 1;
}

double TimeGrid::at(std::size_t k) const {
    return std::min(t_start + static_cast<double>(k) * sample_dt, t_end);
}

PureState prepare_polarized(const ModelParams& p) {
    const auto D = static_cast<Index>(composite_dim(p));
    PureState s;
    s.amplitudes = Vector::Zero(D);
    s.amplitudes(static_cast<Index>(compose({spin_dim(p.L) - 1, 0}, p))) = 1.0;
    return s;
}

PureState prepare_x_polarized(const ModelParams& p, int sign) {
    const auto D = static_cast<Index>(composite_dim(p));
    const auto ns = static_cast<Index>(spin_dim(p.L));
    // |+x> = (|up> + |down>)/sqrt2, |-x> = (|up> - |down>)/sqrt2
    const double amp = std::pow(2.0, -0.5 * p.L);
    PureState s;
    s.amplitudes = Vector::Zero(D);
    for (Index c = 0; c < ns; ++c) {
        int downs = 0;
        for (int i = 0; i < p.L; ++i) downs += ((c >> i) & 1) ? 0 : 1;
        const double sgn = (sign < 0 && (downs % 2 == 1)) ? -1.0 : 1.0;
        s.amplitudes(c) = sgn * amp;
    }
    return s;
}

namespace {

// Lanczos with full reorthogonalization; returns the lowest Ritz pair of the
// Krylov space spanned from v0 (normalized), up to m vectors.
Eigenpair lanczos_pass(const SparseMatrix& H, const Vector& v0, int m, double breakdown) {
    const Index D = H.rows();
    m = static_cast<int>(std::min<Index>(m, D));
    Matrix V(D, m);
    std::vector<double> alpha, beta;
    V.col(0) = v0;
    int k = 0;
    for (; k < m; ++k) {
        Vector w = H * V.col(k);
        const double a = V.col(k).dot(w).real();
        alpha.push_back(a);
        w -= a * V.col(k);
        if (k > 0) w -= beta[k - 1] * V.col(k - 1);
        for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(k + 1) * (V.leftCols(k + 1).adjoint() * w);
        const double b = w.norm();
        if (k + 1 == m || b < breakdown) {
            ++k;
            break;
        }
        beta.push_back(b);
        V.col(k + 1) = w / b;
    }
    RealVector d = Eigen::Map<RealVector>(alpha.data(), k);
    RealVector e = RealVector::Zero(std::max(k - 1, 0));
    for (int i = 0; i + 1 < k; ++i) e(i) = beta[i];
    Eigen::SelfAdjointEigenSolver<RealMatrix> tri;
    tri.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    Eigenpair out;
    out.energy = tri.eigenvalues()(0);
    out.vector = V.leftCols(k) * tri.eigenvectors().col(0).cast<Complex>();
    out.vector.normalize();
    out.residual = (H * out.vector - out.energy * out.vector).norm();
    return out;
}

void fix_phase(Vector& v) {
    Index best = 0;
    for (Index i = 1; i < v.size(); ++i)
        if (std::abs(v(i)) > std::abs(v(best)) * (1.0 + 1e-12)) best = i;
    if (std::abs(v(best)) > 0.0) v *= std::conj(v(best)) / std::abs(v(best));
}

} // namespace

Eigenpair lowest_eigenpair(const HermitianOperator& H, const Vector& start, const EigensolverOptions& opts) {
    if (start.size() != H.dim()) throw ConfigError("start vector dimension does not match the operator");
    const double nrm = start.norm();
    if (!(nrm > 0.0)) throw ConfigError("start vector must be nonzero");
    const double breakdown = 1e-13 * std::max(1.0, H.norm_bound());
    Vector v = start / nrm;
    Eigenpair best;
    for (int r = 0; r < opts.max_restarts; ++r) {
        best = lanczos_pass(H.matrix(), v, opts.krylov_dim, breakdown);
        if (best.residual <= opts.tolerance) return best;
        v = best.vector;
    }
    throw NumericalError("Lanczos ground state did not converge (residual " + std::to_string(best.residual) +
                         " after " + std::to_string(opts.max_restarts) + " restarts)");
}

GroundState prepare_spin_ground_state(const ModelParams& p, const EigensolverOptions& opts) {
    validate(p);
    const ModelParams sp = spin_only(p);
    const HermitianOperator H = build_ising(sp);
    const auto ns = static_cast<Index>(spin_dim(p.L));

    Vector up = Vector::Zero(ns);
    up(ns - 1) = 1.0;
    Eigenpair gs = lowest_eigenpair(H, up, opts);

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss;
    Vector rnd(ns);
    for (Index i = 0; i < ns; ++i) rnd(i) = Complex(gauss(rng), gauss(rng));
    const Eigenpair alt = lowest_eigenpair(H, rnd, opts);
    if (alt.energy < gs.energy - 1e-9 * std::max(1.0, std::abs(gs.energy))) gs = alt;

    fix_phase(gs.vector);
    GroundState out;
    out.energy = gs.energy;
    out.residual = gs.residual;
    out.state.amplitudes = Vector::Zero(static_cast<Index>(composite_dim(p)));
    out.state.amplitudes.head(ns) = gs.vector;
    return out;
}

KrylovPropagator::KrylovPropagator(const HermitianOperator& H, PropagatorOptions opts)
    : H_(H), opts_(opts), scale_(std::max(1.0, H.norm_bound())) {
    if (opts_.krylov_max_dim < 2) throw ConfigError("Krylov dimension must be >= 2");
}

bool KrylovPropagator::try_step(const Vector& psi, double tau, Vector& out) {
    const Index D = psi.size();
    const int m = static_cast<int>(std::min<Index>(opts_.krylov_max_dim, D));
    const double beta0 = psi.norm();
    if (beta0 == 0.0) {
        out = psi;
        return true;
    }
    Matrix V(D, m);
    V.col(0) = psi / beta0;
    std::vector<double> alpha, beta;
    const double breakdown = 1e-13 * scale_;

    for (int k = 0; k < m; ++k) {
        Vector w = H_.matrix() * V.col(k);
        ++matvecs_;
        const double a = V.col(k).dot(w).real();
        alpha.push_back(a);
        w -= a * V.col(k);
        if (k > 0) w -= beta[k - 1] * V.col(k - 1);
        w -= V.leftCols(k + 1) * (V.leftCols(k + 1).adjoint() * w);
        const double b = w.norm();

        const int n = k + 1;
        RealVector d = Eigen::Map<RealVector>(alpha.data(), n);
        RealVector e(n - 1);
        for (int i = 0; i + 1 < n; ++i) e(i) = beta[i];
        Eigen::SelfAdjointEigenSolver<RealMatrix> tri;
        tri.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
        const RealMatrix& Q = tri.eigenvectors();
        Vector c(n);
        {
            Vector phase(n);
            for (int j = 0; j < n; ++j) phase(j) = std::polar(Q(0, j), -tau * tri.eigenvalues()(j));
            c = Q.cast<Complex>() * phase;
        }
        const bool invariant = b < breakdown;
        const double err = beta0 * b * std::abs(c(n - 1));
        if (invariant || err <= opts_.tolerance) {
            out = beta0 * (V.leftCols(n) * c);
            return true;
        }
        if (k + 1 == m) return false;
        beta.push_back(b);
        V.col(k + 1) = w / b;
    }
    return false;
}

void KrylovPropagator::advance(Vector& psi, double dt) {
    if (dt <= 0.0) return;
    double remaining = dt;
    double tau = dt;
    int halvings = 0;
    Vector next;
    while (remaining > 1e-13 * dt) {
        tau = std::min(tau, remaining);
        if (try_step(psi, tau, next)) {
            psi.swap(next);
            remaining -= tau;
            halvings = 0;
        } else {
            if (++halvings > opts_.max_retries)
                throw NumericalError("Krylov propagation failed to reach tolerance after " +
                                     std::to_string(opts_.max_retries) + " step reductions");
            tau *= 0.5;
        }
    }
}

DensePropagator::DensePropagator(const HermitianOperator& H) {
    const Matrix dense = Matrix(H.matrix());
    if (dense.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(dense.real());
        if (es.info() != Eigen::Success) throw NumericalError("dense eigendecomposition failed");
        energies_ = es.eigenvalues();
        vectors_ = es.eigenvectors().cast<Complex>();
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> es(dense);
        if (es.info() != Eigen::Success) throw NumericalError("dense eigendecomposition failed");
        energies_ = es.eigenvalues();
        vectors_ = es.eigenvectors();
    }
}

Vector DensePropagator::at(const Vector& psi0, double t) const {
    Vector c = vectors_.adjoint() * psi0;
    for (Index j = 0; j < c.size(); ++j) c(j) *= std::polar(1.0, -energies_(j) * t);
    return vectors_ * c;
}

void evolve(const PureState& psi0, const HermitianOperator& H, const TimeGrid& grid, const SampleCallback& on_sample,
            const PropagatorOptions& opts, Propagation method) {
    grid.validate();
    if (psi0.amplitudes.size() != H.dim()) throw ConfigError("state and Hamiltonian dimensions differ");
    if (psi0.norm_error() > 1e-10) throw ConfigError("initial state is not normalized");
    if (grid.t_start < psi0.time) throw ConfigError("grid starts before the state's time tag");

    if (method == Propagation::automatic)
        method = H.dim() <= opts.dense_threshold ? Propagation::dense : Propagation::krylov;

    const std::size_t n = grid.size();
    if (method == Propagation::dense) {
        const DensePropagator prop(H);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = grid.at(k);
            on_sample(PureState{prop.at(psi0.amplitudes, t - psi0.time), t});
        }
        return;
    }

    KrylovPropagator prop(H, opts);
    Vector psi = psi0.amplitudes;
    double now = psi0.time;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = grid.at(k);
        prop.advance(psi, t - now);
        now = t;
        on_sample(PureState{psi, t});
    }
}

std::vector<PureState> evolve(const PureState& psi0, const HermitianOperator& H, const TimeGrid& grid,
                              const PropagatorOptions& opts, Propagation method) {
    std::vector<PureState> out;
    out.reserve(grid.size());
    evolve(psi0, H, grid, [&](const PureState& s) { out.push_back(s); }, opts, method);
    return out;
}

} // namespace ancilla
