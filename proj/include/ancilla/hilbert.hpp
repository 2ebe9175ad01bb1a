// hilbert.hpp — composite space of L spin-1/2 sites and one q-level boson
//
// Flat basis index = boson_level * 2^L + spin_config, with bit i of
// spin_config describing site i (1 = up along z). Spin partial traces
// therefore run over the fast index.

#pragma once

#include "ancilla/types.hpp"

#include <cstdint>
#include <vector>

namespace ancilla {

struct ModelParams {
    int L = 8;               // spin sites
    int q = 40;              // boson truncation dimension
    double J = -1.0;         // Ising exchange (signed, enters as -J sum zz)
    double h = 1.0;          // transverse field
    double omega_c = 0.5;    // ancilla level splitting
    double lambda = 0.0;     // spin-ancilla coupling
    bool periodic = true;
    std::uint64_t dim_ceiling = std::uint64_t{1} << 21;

    // The coupling is usually quoted as lambda^2 / omega_c.
    static double lambda_from_ratio(double lambda2_over_omega, double omega_c);
    double lambda2_over_omega() const { return lambda * lambda / omega_c; }

    bool operator==(const ModelParams&) const = default;
};

// Throws ConfigError when an invariant is violated (L >= 2, q >= 1,
// omega_c > 0, composite dimension within dim_ceiling).
void validate(const ModelParams& p);

// True when q <= L: results are then not expected to be converged in the
// boson dimension. Callers warn, they do not fail.
bool below_boson_regime(const ModelParams& p);

std::uint64_t spin_dim(int L);
std::uint64_t composite_dim(const ModelParams& p);

// Parameters of the spin chain alone (q = 1, lambda = 0).
ModelParams spin_only(const ModelParams& p);

struct BasisIndex {
    std::uint64_t spin_config = 0;
    int boson_level = 0;

    bool operator==(const BasisIndex&) const = default;
};

std::uint64_t compose(const BasisIndex& b, const ModelParams& p);
BasisIndex decompose(std::uint64_t flat, const ModelParams& p);

// Which factors are kept when tracing; everything else is traced out.
struct SubsystemSpec {
    std::vector<int> retained_spins;
    bool retain_ancilla = false;

    static SubsystemSpec all_spins(int L);
    static SubsystemSpec ancilla_only();
    static SubsystemSpec site_range(int first, int last, bool with_ancilla = false);

    bool operator==(const SubsystemSpec&) const = default;
};

void validate(const SubsystemSpec& s, const ModelParams& p);

// Single-site and single-mode matrices. 2x2 operators are written in the
// (|up>, |down>) order, so sigma_z = diag(+1, -1).
namespace ops {

Eigen::Matrix2cd identity2();
Eigen::Matrix2cd sigma_x();
Eigen::Matrix2cd sigma_y();
Eigen::Matrix2cd sigma_z();

Matrix annihilation(int q);   // a|n> = sqrt(n)|n-1>, hard cutoff at q-1
Matrix creation(int q);
Matrix number(int q);

} // namespace ops

// Acts as op2x2 on `site`, identity on the other spins and the boson.
SparseMatrix embed_site_operator(const Eigen::Matrix2cd& op2x2, int site, const ModelParams& p);

// Identity on all spins, opqxq on the boson factor.
SparseMatrix embed_boson_operator(const Matrix& opqxq, const ModelParams& p);

} // namespace ancilla
