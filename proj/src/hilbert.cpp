// hilbert.cpp — index conventions and tensor-product placement

#include "ancilla/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace ancilla {

double ModelParams::lambda_from_ratio(double lambda2_over_omega, double omega_c) {
    if (lambda2_over_omega < 0.0)
        throw ConfigError("lambda^2/omega_c must be non-negative");
    return std::sqrt(lambda2_over_omega * omega_c);
}

void validate(const ModelParams& p) {
    if (p.L < 2) throw ConfigError("L must be >= 2 (got " + std::to_string(p.L) + ")");
    if (p.L > 40) throw ConfigError("L = " + std::to_string(p.L) + " is beyond any dense-vector capacity");
    if (p.q < 1) throw ConfigError("q must be >= 1 (got " + std::to_string(p.q) + ")");
    if (!(p.omega_c > 0.0)) throw ConfigError("omega_c must be > 0");
    if (!std::isfinite(p.J) || !std::isfinite(p.h) || !std::isfinite(p.lambda))
        throw ConfigError("J, h and lambda must be finite");
    if (p.lambda != 0.0 && p.q < 2)
        throw ConfigError("a nonzero coupling needs q >= 2");
    const std::uint64_t d = spin_dim(p.L) * static_cast<std::uint64_t>(p.q);
    if (d > p.dim_ceiling)
        throw ConfigError("composite dimension 2^" + std::to_string(p.L) + " * " + std::to_string(p.q) + " = " +
                          std::to_string(d) + " exceeds the ceiling " + std::to_string(p.dim_ceiling));
}

bool below_boson_regime(const ModelParams& p) { return p.q <= p.L; }

std::uint64_t spin_dim(int L) { return std::uint64_t{1} << L; }

std::uint64_t composite_dim(const ModelParams& p) {
    validate(p);
    return spin_dim(p.L) * static_cast<std::uint64_t>(p.q);
}

ModelParams spin_only(const ModelParams& p) {
    ModelParams s = p;
    s.q = 1;
    s.lambda = 0.0;
    return s;
}

std::uint64_t compose(const BasisIndex& b, const ModelParams& p) {
    if (b.spin_config >= spin_dim(p.L) || b.boson_level < 0 || b.boson_level >= p.q)
        throw ConfigError("basis index out of range");
    return static_cast<std::uint64_t>(b.boson_level) * spin_dim(p.L) + b.spin_config;
}

BasisIndex decompose(std::uint64_t flat, const ModelParams& p) {
    const std::uint64_t ns = spin_dim(p.L);
    if (flat >= ns * static_cast<std::uint64_t>(p.q)) throw ConfigError("flat index out of range");
    return {flat % ns, static_cast<int>(flat / ns)};
}

SubsystemSpec SubsystemSpec::all_spins(int L) { return site_range(0, L, false); }

SubsystemSpec SubsystemSpec::ancilla_only() { return {{}, true}; }

SubsystemSpec SubsystemSpec::site_range(int first, int last, bool with_ancilla) {
    SubsystemSpec s;
    for (int i = first; i < last; ++i) s.retained_spins.push_back(i);
    s.retain_ancilla = with_ancilla;
    return s;
}

void validate(const SubsystemSpec& s, const ModelParams& p) {
    if (s.retained_spins.empty() && !s.retain_ancilla)
        throw ConfigError("subsystem must retain at least one factor");
    std::vector<int> sorted = s.retained_spins;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ConfigError("subsystem lists a site twice");
    for (int i : sorted)
        if (i < 0 || i >= p.L) throw ConfigError("subsystem site " + std::to_string(i) + " outside [0, L)");
}

namespace ops {

Eigen::Matrix2cd identity2() { return Eigen::Matrix2cd::Identity(); }

Eigen::Matrix2cd sigma_x() {
    Eigen::Matrix2cd m;
    m << 0.0, 1.0,
         1.0, 0.0;
    return m;
}

Eigen::Matrix2cd sigma_y() {
    Eigen::Matrix2cd m;
    m << 0.0, Complex(0.0, -1.0),
         Complex(0.0, 1.0), 0.0;
    return m;
}

Eigen::Matrix2cd sigma_z() {
    Eigen::Matrix2cd m;
    m << 1.0, 0.0,
         0.0, -1.0;
    return m;
}

Matrix annihilation(int q) {
    if (q < 1) throw ConfigError("boson dimension must be >= 1");
    Matrix a = Matrix::Zero(q, q);
    for (int n = 1; n < q; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Matrix creation(int q) { return annihilation(q).adjoint(); }

Matrix number(int q) {
    if (q < 1) throw ConfigError("boson dimension must be >= 1");
    Matrix n = Matrix::Zero(q, q);
    for (int k = 0; k < q; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

} // namespace ops

SparseMatrix embed_site_operator(const Eigen::Matrix2cd& op2x2, int site, const ModelParams& p) {
    const auto D = static_cast<Index>(composite_dim(p));
    if (site < 0 || site >= p.L) throw ConfigError("site " + std::to_string(site) + " outside [0, L)");
    const std::uint64_t bit = std::uint64_t{1} << site;

    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(static_cast<std::size_t>(2 * D));
    for (Index row = 0; row < D; ++row) {
        const bool up = (static_cast<std::uint64_t>(row) & bit) != 0;
        const int local_row = up ? 0 : 1;
        for (int local_col = 0; local_col < 2; ++local_col) {
            const Complex v = op2x2(local_row, local_col);
            if (v == Complex(0.0)) continue;
            const bool col_up = local_col == 0;
            const Index col = col_up ? (row | static_cast<Index>(bit)) : (row & ~static_cast<Index>(bit));
            trip.emplace_back(row, col, v);
        }
    }
    SparseMatrix m(D, D);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

SparseMatrix embed_boson_operator(const Matrix& opqxq, const ModelParams& p) {
    const auto D = static_cast<Index>(composite_dim(p));
    if (opqxq.rows() != p.q || opqxq.cols() != p.q)
        throw ConfigError("boson operator must be q x q (q = " + std::to_string(p.q) + ")");
    const auto ns = static_cast<Index>(spin_dim(p.L));

    std::vector<Eigen::Triplet<Complex>> trip;
    for (Index n = 0; n < p.q; ++n)
        for (Index m = 0; m < p.q; ++m) {
            const Complex v = opqxq(n, m);
            if (v == Complex(0.0)) continue;
            for (Index s = 0; s < ns; ++s) trip.emplace_back(n * ns + s, m * ns + s, v);
        }
    SparseMatrix out(D, D);
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

} // namespace ancilla
