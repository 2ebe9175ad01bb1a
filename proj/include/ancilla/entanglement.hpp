// entanglement.hpp — reduced density matrices, entropies, mutual information,
// variance, quantum Fisher information and multipartite entanglement loss

#pragma once

#include "ancilla/dynamics.hpp"
#include "ancilla/hilbert.hpp"
#include "ancilla/operator.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>

namespace ancilla {

struct ReducedDensityMatrix {
    Matrix matrix;
    SubsystemSpec subsystem;

    Index dim() const { return matrix.rows(); }

    // Throws NumericalError unless trace = 1 (1e-10), Hermitian (1e-12) and
    // eigenvalues >= -1e-10.
    void check_invariants() const;
};

// Traces out every factor not listed in `keep`. Retained sites appear in the
// order given, the first one as the least significant bit of the reduced
// spin index; a retained ancilla is the slowest index. The retained
// dimension must not exceed `ceiling`.
ReducedDensityMatrix partial_trace(const PureState& psi, const SubsystemSpec& keep, const ModelParams& p,
                                   Index ceiling = 4096);

// -sum_k l ln l over a spectrum. Eigenvalues are clamped to [0, 1] before the
// logarithm (numerical negatives within 1e-12 contribute nothing).
template <typename Derived>
double entropy_from_spectrum(const Eigen::MatrixBase<Derived>& eigenvalues) {
    double s = 0.0;
    for (Index k = 0; k < eigenvalues.size(); ++k) {
        const double l = std::clamp(static_cast<double>(eigenvalues(k)), 0.0, 1.0);
        if (l > 0.0) s -= l * std::log(l);
    }
    return s;
}

double vn_entropy(const ReducedDensityMatrix& rho);

// Entropy of the retained subsystem of a pure state, computed on whichever
// side of the cut is smaller.
double subsystem_entropy(const PureState& psi, const SubsystemSpec& keep, const ModelParams& p);

enum class MiConvention {
    eq2,    // S(a|bc) + S(b|ac) - S(ab|c)
    half,   // S(a|bc) - S(ab|c)/2
};

// a = sites [0, L/2), b = sites [L/2, L), c = ancilla. L must be even.
double mutual_information_half(const PureState& psi, const ModelParams& p, MiConvention conv = MiConvention::eq2);

// <O^2> - <O>^2 on the full composite state.
double variance(const PureState& psi, const HermitianOperator& O);

inline constexpr double kQfiCutoff = 1e-12;

// F = 2 sum_{a,b: v_a + v_b > eps} (v_a - v_b)^2/(v_a + v_b) |<u_a|O|u_b>|^2
// from the eigensystem of rho (columns of u), O given on the same space.
template <typename DerivedW, typename DerivedU, typename DerivedO>
double qfi_from_eigensystem(const Eigen::MatrixBase<DerivedW>& v, const Eigen::MatrixBase<DerivedU>& u,
                            const Eigen::MatrixBase<DerivedO>& O) {
    const Matrix elems = u.adjoint() * O * u;
    double f = 0.0;
    for (Index a = 0; a < v.size(); ++a)
        for (Index b = 0; b < v.size(); ++b) {
            const double sum = v(a) + v(b);
            if (sum <= kQfiCutoff) continue;
            const double diff = v(a) - v(b);
            f += diff * diff / sum * std::norm(elems(a, b));
        }
    return 2.0 * f;
}

// QFI of a reduced density matrix for an operator acting on that space.
double qfi(const ReducedDensityMatrix& rho, const Matrix& O_reduced);
double qfi(const ReducedDensityMatrix& rho, const HermitianOperator& O_reduced);

// Schmidt decomposition across the spins | ancilla cut. Only weights above
// kSchmidtFloor are kept; spin_vectors are the matching orthonormal
// eigenvectors of the spin reduced density matrix (2^L x rank).
struct SchmidtSpectrum {
    static constexpr double kSchmidtFloor = 1e-13;
    RealVector weights;
    Matrix spin_vectors;
};

SchmidtSpectrum spin_ancilla_schmidt(const PureState& psi, const ModelParams& p);

// QFI of the spin reduced density matrix from its Schmidt form. Pairs with
// one vector outside the range contribute v_a |<u_b|O|u_a>|^2 each way,
// summed in closed form through |O u_a|^2 - sum_range |<u_b|O|u_a>|^2.
double qfi(const SchmidtSpectrum& schmidt, const SparseMatrix& spin_op);

struct FisherDensity {
    double density = 0.0;
    int partite_level = 0;   // floor(f) + 1 when f > 0, else 0
};

FisherDensity fisher_density(double F, const ModelParams& p);

// Cramer-Rao phase sensitivity 1/F (infinite for F = 0).
double cramer_rao_bound(double F);

// Var(S_mu (x) I) - F(rho_spins, S_mu)/4.
double mel(const PureState& psi, Axis mu, const ModelParams& p);

struct MetricSample {
    double t = 0.0;
    double S_vN_A = 0.0;
    double MI_half = 0.0;
    double var_Sx = 0.0;
    double var_Sz = 0.0;
    double F_Sx = 0.0;
    double F_Sz = 0.0;
    double f_Sx = 0.0;
    double f_Sz = 0.0;
    double MEL_Sx = 0.0;
    double MEL_Sz = 0.0;
    double n_boson = 0.0;
    double mag_x = 0.0;
    double mag_z = 0.0;
    double zz_nn = 0.0;
    double energy = 0.0;
    double norm_err = 0.0;
};

struct MetricField {
    const char* name;
    double MetricSample::*member;
};

// Column order of every CSV and aggregate table.
inline constexpr std::array<MetricField, 17> kMetricFields{{
    {"t", &MetricSample::t},
    {"S_vN_A", &MetricSample::S_vN_A},
    {"MI_half", &MetricSample::MI_half},
    {"var_Sx", &MetricSample::var_Sx},
    {"var_Sz", &MetricSample::var_Sz},
    {"F_Sx", &MetricSample::F_Sx},
    {"F_Sz", &MetricSample::F_Sz},
    {"f_Sx", &MetricSample::f_Sx},
    {"f_Sz", &MetricSample::f_Sz},
    {"MEL_Sx", &MetricSample::MEL_Sx},
    {"MEL_Sz", &MetricSample::MEL_Sz},
    {"n_boson", &MetricSample::n_boson},
    {"mag_x", &MetricSample::mag_x},
    {"mag_z", &MetricSample::mag_z},
    {"zz_nn", &MetricSample::zz_nn},
    {"energy", &MetricSample::energy},
    {"norm_err", &MetricSample::norm_err},
}};

// Evaluates every MetricSample field for states of one parameter point. The
// operators are built once; evaluate() is const and thread-safe.
class MetricEvaluator {
public:
    MetricEvaluator(const ModelParams& p, std::shared_ptr<const HermitianOperator> H,
                    MiConvention conv = MiConvention::eq2);

    MetricSample evaluate(const PureState& psi) const;

private:
    ModelParams p_;
    MiConvention conv_;
    std::shared_ptr<const HermitianOperator> H_;
    HermitianOperator Sx_, Sz_, N_, ZZ_;
    SparseMatrix sx_spin_, sz_spin_;
};

} // namespace ancilla
