// entanglement.cpp

#include "ancilla/entanglement.hpp"

#include "ancilla/hamiltonian.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace ancilla {
namespace {

// Column-major view of the amplitudes as a (2^L x q) matrix M(s, n).
Eigen::Map<const Matrix> as_spin_boson_matrix(const PureState& psi, const ModelParams& p) {
    const auto ns = static_cast<Index>(spin_dim(p.L));
    if (psi.amplitudes.size() != ns * p.q) throw ConfigError("state dimension does not match the model");
    return {psi.amplitudes.data(), ns, p.q};
}

SubsystemSpec complement(const SubsystemSpec& keep, const ModelParams& p) {
    SubsystemSpec rest;
    for (int i = 0; i < p.L; ++i)
        if (std::find(keep.retained_spins.begin(), keep.retained_spins.end(), i) == keep.retained_spins.end())
            rest.retained_spins.push_back(i);
    rest.retain_ancilla = !keep.retain_ancilla;
    return rest;
}

Index retained_dim(const SubsystemSpec& s, const ModelParams& p) {
    Index d = Index{1} << s.retained_spins.size();
    if (s.retain_ancilla) d *= p.q;
    return d;
}

RealVector hermitian_eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition did not converge");
    return es.eigenvalues();
}

} // namespace

void ReducedDensityMatrix::check_invariants() const {
    if (matrix.rows() != matrix.cols()) throw NumericalError("reduced density matrix is not square");
    const double tr_err = std::abs(matrix.trace() - Complex(1.0));
    if (tr_err > 1e-10) throw NumericalError("reduced density matrix trace deviates by " + std::to_string(tr_err));
    const double herm = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12) throw NumericalError("reduced density matrix is not Hermitian (" + std::to_string(herm) + ")");
    const double lowest = hermitian_eigenvalues(matrix).minCoeff();
    if (lowest < -1e-10) throw NumericalError("reduced density matrix has eigenvalue " + std::to_string(lowest));
}

ReducedDensityMatrix partial_trace(const PureState& psi, const SubsystemSpec& keep, const ModelParams& p,
                                   Index ceiling) {
    validate(keep, p);
    const auto ns = static_cast<Index>(spin_dim(p.L));
    if (psi.amplitudes.size() != ns * p.q) throw ConfigError("state dimension does not match the model");
    const Index dk = retained_dim(keep, p);
    if (dk > ceiling)
        throw ConfigError("retained dimension " + std::to_string(dk) + " exceeds the dense ceiling " +
                          std::to_string(ceiling));
    const SubsystemSpec rest = complement(keep, p);
    const Index dr = psi.amplitudes.size() / dk;
    const auto nk = static_cast<int>(keep.retained_spins.size());
    const auto nr = static_cast<int>(rest.retained_spins.size());

    Matrix M = Matrix::Zero(dk, dr);
    for (Index n = 0; n < p.q; ++n)
        for (Index s = 0; s < ns; ++s) {
            Index ki = 0, ri = 0;
            for (int j = 0; j < nk; ++j) ki |= ((s >> keep.retained_spins[j]) & 1) << j;
            for (int j = 0; j < nr; ++j) ri |= ((s >> rest.retained_spins[j]) & 1) << j;
            if (keep.retain_ancilla) ki += n << nk;
            else ri += n << nr;
            M(ki, ri) = psi.amplitudes(n * ns + s);
        }

    ReducedDensityMatrix rho;
    rho.subsystem = keep;
    rho.matrix = M * M.adjoint();
    rho.matrix = (0.5 * (rho.matrix + rho.matrix.adjoint())).eval();
    rho.check_invariants();
    return rho;
}

double vn_entropy(const ReducedDensityMatrix& rho) {
    return entropy_from_spectrum(hermitian_eigenvalues(rho.matrix));
}

double subsystem_entropy(const PureState& psi, const SubsystemSpec& keep, const ModelParams& p) {
    validate(keep, p);
    const SubsystemSpec rest = complement(keep, p);
    if (rest.retained_spins.empty() && !rest.retain_ancilla) return 0.0;
    const bool use_rest = retained_dim(rest, p) < retained_dim(keep, p);
    return vn_entropy(partial_trace(psi, use_rest ? rest : keep, p, std::numeric_limits<Index>::max()));
}

double mutual_information_half(const PureState& psi, const ModelParams& p, MiConvention conv) {
    if (p.L % 2 != 0) throw ConfigError("half-chain mutual information needs an even L");
    const int half = p.L / 2;
    const double s_a = subsystem_entropy(psi, SubsystemSpec::site_range(0, half), p);
    const double s_ab = entropy_from_spectrum(spin_ancilla_schmidt(psi, p).weights);
    if (conv == MiConvention::half) return s_a - 0.5 * s_ab;
    const double s_b = subsystem_entropy(psi, SubsystemSpec::site_range(half, p.L), p);
    return s_a + s_b - s_ab;
}

double variance(const PureState& psi, const HermitianOperator& O) {
    if (O.dim() != psi.amplitudes.size()) throw ConfigError("operator and state dimensions differ");
    const Vector Opsi = O.matrix() * psi.amplitudes;
    const double mean = psi.amplitudes.dot(Opsi).real();
    return (Opsi - mean * psi.amplitudes).squaredNorm();
}

double qfi(const ReducedDensityMatrix& rho, const Matrix& O_reduced) {
    if (O_reduced.rows() != rho.dim() || O_reduced.cols() != rho.dim())
        throw ConfigError("operator does not act on the reduced space");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition of rho did not converge");
    return qfi_from_eigensystem(es.eigenvalues(), es.eigenvectors(), O_reduced);
}

double qfi(const ReducedDensityMatrix& rho, const HermitianOperator& O_reduced) {
    return qfi(rho, Matrix(O_reduced.matrix()));
}

SchmidtSpectrum spin_ancilla_schmidt(const PureState& psi, const ModelParams& p) {
    const auto M = as_spin_boson_matrix(psi, p);
    RealVector w;
    Matrix U;
    if (M.cols() <= M.rows()) {
        const Matrix gram = M.adjoint() * M;
        Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
        if (es.info() != Eigen::Success) throw NumericalError("Schmidt decomposition did not converge");
        w = es.eigenvalues();
        U = M * es.eigenvectors();
        for (Index k = 0; k < w.size(); ++k)
            if (w(k) > SchmidtSpectrum::kSchmidtFloor) U.col(k) /= std::sqrt(w(k));
    } else {
        const Matrix rho = M * M.adjoint();
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
        if (es.info() != Eigen::Success) throw NumericalError("Schmidt decomposition did not converge");
        w = es.eigenvalues();
        U = es.eigenvectors();
    }
    // Descending weights, dropping those at or below the floor.
    std::vector<Index> order;
    for (Index k = w.size() - 1; k >= 0; --k)
        if (w(k) > SchmidtSpectrum::kSchmidtFloor) order.push_back(k);
    SchmidtSpectrum out;
    out.weights.resize(static_cast<Index>(order.size()));
    out.spin_vectors.resize(M.rows(), static_cast<Index>(order.size()));
    for (std::size_t j = 0; j < order.size(); ++j) {
        out.weights(static_cast<Index>(j)) = w(order[j]);
        out.spin_vectors.col(static_cast<Index>(j)) = U.col(order[j]);
    }
    return out;
}

double qfi(const SchmidtSpectrum& schmidt, const SparseMatrix& spin_op) {
    const Matrix& U = schmidt.spin_vectors;
    const RealVector& v = schmidt.weights;
    if (spin_op.rows() != U.rows()) throw ConfigError("operator does not act on the spin space");
    const Matrix OU = spin_op * U;
    const Matrix elems = U.adjoint() * OU;

    double inside = 0.0;
    double outside = 0.0;
    for (Index a = 0; a < v.size(); ++a) {
        for (Index b = 0; b < v.size(); ++b) {
            const double sum = v(a) + v(b);
            if (sum <= kQfiCutoff) continue;
            const double diff = v(a) - v(b);
            inside += diff * diff / sum * std::norm(elems(a, b));
        }
        if (v(a) > kQfiCutoff) {
            const double leak = std::max(0.0, OU.col(a).squaredNorm() - elems.col(a).squaredNorm());
            outside += v(a) * leak;
        }
    }
    return 2.0 * inside + 4.0 * outside;
}

FisherDensity fisher_density(double F, const ModelParams& p) {
    if (F < 0.0) throw ConfigError("Fisher information must be non-negative");
    FisherDensity fd;
    fd.density = F / static_cast<double>(p.L);
    fd.partite_level = fd.density > 0.0 ? static_cast<int>(std::floor(fd.density)) + 1 : 0;
    return fd;
}

double cramer_rao_bound(double F) {
    return F > 0.0 ? 1.0 / F : std::numeric_limits<double>::infinity();
}

double mel(const PureState& psi, Axis mu, const ModelParams& p) {
    const double var = variance(psi, collective_spin(mu, p));
    const double F = qfi(spin_ancilla_schmidt(psi, p), collective_spin(mu, spin_only(p)).matrix());
    return var - 0.25 * F;
}

MetricEvaluator::MetricEvaluator(const ModelParams& p, std::shared_ptr<const HermitianOperator> H, MiConvention conv)
    : p_(p), conv_(conv), H_(std::move(H)) {
    validate(p_);
    if (!H_ || H_->dim() != static_cast<Index>(composite_dim(p_)))
        throw ConfigError("Hamiltonian does not match the parameter point");
    const ModelParams sp = spin_only(p_);
    sx_spin_ = collective_spin(Axis::x, sp).matrix();
    sz_spin_ = collective_spin(Axis::z, sp).matrix();
    N_ = boson_number(p_);
    ZZ_ = zz_bonds(sp);
}

MetricSample MetricEvaluator::evaluate(const PureState& psi) const {
    const auto M = as_spin_boson_matrix(psi, p_);
    const double L = static_cast<double>(p_.L);
    MetricSample m;
    m.t = psi.time;
    m.norm_err = psi.norm_error();

    const SchmidtSpectrum schmidt = spin_ancilla_schmidt(psi, p_);
    m.S_vN_A = entropy_from_spectrum(schmidt.weights);

    if (p_.L % 2 == 0) {
        const int half = p_.L / 2;
        const double s_a = subsystem_entropy(psi, SubsystemSpec::site_range(0, half), p_);
        if (conv_ == MiConvention::half) {
            m.MI_half = s_a - 0.5 * m.S_vN_A;
        } else {
            const double s_b = subsystem_entropy(psi, SubsystemSpec::site_range(half, p_.L), p_);
            m.MI_half = s_a + s_b - m.S_vN_A;
        }
    } else {
        m.MI_half = std::numeric_limits<double>::quiet_NaN();
    }

    // (S (x) I) psi is S applied to every boson column of M.
    auto moments = [&](const SparseMatrix& S, double& mean, double& var) {
        const Matrix SM = S * M;
        mean = M.cwiseProduct(SM.conjugate()).sum().real();
        var = (SM - mean * M).squaredNorm();
    };
    double mx = 0.0, mz = 0.0;
    moments(sx_spin_, mx, m.var_Sx);
    moments(sz_spin_, mz, m.var_Sz);
    m.mag_x = mx / L;
    m.mag_z = mz / L;

    m.F_Sx = qfi(schmidt, sx_spin_);
    m.F_Sz = qfi(schmidt, sz_spin_);
    m.f_Sx = m.F_Sx / L;
    m.f_Sz = m.F_Sz / L;
    m.MEL_Sx = m.var_Sx - 0.25 * m.F_Sx;
    m.MEL_Sz = m.var_Sz - 0.25 * m.F_Sz;

    m.n_boson = N_.expectation(psi.amplitudes);
    const Matrix zzM = ZZ_.matrix() * M;
    m.zz_nn = M.cwiseProduct(zzM.conjugate()).sum().real() / static_cast<double>(bond_count(p_));
    m.energy = H_->expectation(psi.amplitudes);
    return m;
}

} // namespace ancilla
