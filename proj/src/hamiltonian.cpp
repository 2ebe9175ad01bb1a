// hamiltonian.cpp

#include "ancilla/hamiltonian.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

namespace ancilla {
namespace {

using Triplets = std::vector<Eigen::Triplet<Complex>>;

inline double sz(std::uint64_t config, int site) { return ((config >> site) & 1U) ? 1.0 : -1.0; }

SparseMatrix from_triplets(Index D, const Triplets& t) {
    SparseMatrix m(D, D);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

} // namespace

int bond_count(const ModelParams& p) { return p.periodic ? p.L : p.L - 1; }

HermitianOperator build_ising(const ModelParams& p) {
    const auto D = static_cast<Index>(composite_dim(p));
    const auto ns = static_cast<std::uint64_t>(spin_dim(p.L));
    const int bonds = bond_count(p);

    Triplets t;
    t.reserve(static_cast<std::size_t>(D) * static_cast<std::size_t>(p.L + 1));
    for (Index row = 0; row < D; ++row) {
        const std::uint64_t s = static_cast<std::uint64_t>(row) % ns;
        double diag = 0.0;
        for (int b = 0; b < bonds; ++b) diag += sz(s, b) * sz(s, (b + 1) % p.L);
        diag *= -p.J;
        if (diag != 0.0) t.emplace_back(row, row, diag);
        if (p.h != 0.0)
            for (int i = 0; i < p.L; ++i) t.emplace_back(row, row ^ (Index{1} << i), p.h);
    }
    return HermitianOperator(from_triplets(D, t));
}

HermitianOperator build_dicke(const ModelParams& p) {
    const auto D = static_cast<Index>(composite_dim(p));
    const auto ns = static_cast<Index>(spin_dim(p.L));
    const double g = p.lambda / std::sqrt(static_cast<double>(p.L));

    Triplets t;
    t.reserve(static_cast<std::size_t>(D) * static_cast<std::size_t>(2 * p.L + 1));
    for (Index row = 0; row < D; ++row) {
        const Index n = row / ns;
        if (n != 0) t.emplace_back(row, row, p.omega_c * static_cast<double>(n));
        if (g == 0.0) continue;
        // <s', n-1| a sx_i |s, n> and <s', n+1| a^dag sx_i |s, n>, row = (s', n)
        for (int i = 0; i < p.L; ++i) {
            const Index flipped = (row % ns) ^ (Index{1} << i);
            if (n + 1 < p.q) t.emplace_back(row, (n + 1) * ns + flipped, g * std::sqrt(static_cast<double>(n + 1)));
            if (n >= 1) t.emplace_back(row, (n - 1) * ns + flipped, g * std::sqrt(static_cast<double>(n)));
        }
    }
    return HermitianOperator(from_triplets(D, t));
}

HermitianOperator build_full(const ModelParams& p) { return build_ising(p) + build_dicke(p); }

HermitianOperator collective_spin(Axis mu, const ModelParams& p) {
    const auto D = static_cast<Index>(composite_dim(p));
    Triplets t;
    t.reserve(static_cast<std::size_t>(D) * static_cast<std::size_t>(p.L));
    for (Index row = 0; row < D; ++row) {
        const auto s = static_cast<std::uint64_t>(row);
        if (mu == Axis::z) {
            double m = 0.0;
            for (int i = 0; i < p.L; ++i) m += sz(s, i);
            if (m != 0.0) t.emplace_back(row, row, m);
            continue;
        }
        for (int i = 0; i < p.L; ++i) {
            const Index col = row ^ (Index{1} << i);
            if (mu == Axis::x) {
                t.emplace_back(row, col, 1.0);
            } else {
                // sigma_y in (up, down) order: <up|sy|down> = -i, <down|sy|up> = +i
                const bool row_up = ((s >> i) & 1U) != 0;
                t.emplace_back(row, col, row_up ? Complex(0.0, -1.0) : Complex(0.0, 1.0));
            }
        }
    }
    return HermitianOperator(from_triplets(D, t));
}

HermitianOperator boson_number(const ModelParams& p) {
    return HermitianOperator(embed_boson_operator(ops::number(p.q), p));
}

HermitianOperator zz_bonds(const ModelParams& p) {
    const auto D = static_cast<Index>(composite_dim(p));
    const auto ns = static_cast<std::uint64_t>(spin_dim(p.L));
    Triplets t;
    for (Index row = 0; row < D; ++row) {
        const std::uint64_t s = static_cast<std::uint64_t>(row) % ns;
        double v = 0.0;
        for (int b = 0; b < bond_count(p); ++b) v += sz(s, b) * sz(s, (b + 1) % p.L);
        if (v != 0.0) t.emplace_back(row, row, v);
    }
    return HermitianOperator(from_triplets(D, t));
}

HermitianOperator build_displaced(const ModelParams& p) {
    if (p.J != 0.0) throw ConfigError("the displaced-frame Hamiltonian is exact only at J = 0");
    const auto D = static_cast<Index>(composite_dim(p));
    const double shift = p.lambda / (std::sqrt(static_cast<double>(p.L)) * p.omega_c);

    const SparseMatrix a = embed_boson_operator(ops::annihilation(p.q), p);
    const SparseMatrix sx = collective_spin(Axis::x, p).matrix();
    SparseMatrix id(D, D);
    id.setIdentity();

    const SparseMatrix b = a + sx * Complex(shift);
    const SparseMatrix bdag = b.adjoint();
    const SparseMatrix sx2 = sx * sx;
    SparseMatrix H = SparseMatrix(bdag * b) * Complex(p.omega_c) -
                     sx2 * Complex(p.lambda * p.lambda / (static_cast<double>(p.L) * p.omega_c)) +
                     sx * Complex(p.h);
    H.prune(Complex(0.0), 0.0);
    return HermitianOperator(std::move(H));
}

std::string OperatorCache::key(const std::string& kind, const ModelParams& p) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s|L=%d|q=%d|J=%.17g|h=%.17g|w=%.17g|lam=%.17g|pbc=%d", kind.c_str(), p.L, p.q, p.J,
                  p.h, p.omega_c, p.lambda, p.periodic ? 1 : 0);
    return buf;
}

std::shared_ptr<const HermitianOperator> OperatorCache::get(const std::string& kind, const ModelParams& p,
                                                           const Builder& build) {
    const std::string k = key(kind, p);
    {
        std::lock_guard lock(mu_);
        if (auto it = cache_.find(k); it != cache_.end()) return it->second;
    }
    auto op = std::make_shared<const HermitianOperator>(build());
    std::lock_guard lock(mu_);
    return cache_.emplace(k, std::move(op)).first->second;
}

std::size_t OperatorCache::size() const {
    std::lock_guard lock(mu_);
    return cache_.size();
}

void OperatorCache::clear() {
    std::lock_guard lock(mu_);
    cache_.clear();
}

} // namespace ancilla
