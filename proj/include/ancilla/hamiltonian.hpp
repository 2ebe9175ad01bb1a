// hamiltonian.hpp — Ising chain, Dicke coupling, collective spins and the
// displaced-frame J = 0 Hamiltonian

#pragma once

#include "ancilla/hilbert.hpp"
#include "ancilla/operator.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace ancilla {

// -J sum_i sz_i sz_{i+1} + h sum_i sx_i, identity on the boson.
// With periodic boundaries the bond (L-1, 0) is included, so at L = 2 the
// single bond appears twice.
HermitianOperator build_ising(const ModelParams& p);

// omega_c a^dag a + (lambda / sqrt(L)) (a^dag + a) sum_i sx_i.
// Ladder operators are truncated: a^dag annihilates level q-1.
HermitianOperator build_dicke(const ModelParams& p);

// build_ising + build_dicke.
HermitianOperator build_full(const ModelParams& p);

// S_mu = sum_i sigma^mu_i, identity on the ancilla. Pass spin_only(p) to get
// the operator on the 2^L spin space.
HermitianOperator collective_spin(Axis mu, const ModelParams& p);

HermitianOperator boson_number(const ModelParams& p);

// sum over bonds of sz_i sz_{i+1} (same bond set as build_ising).
HermitianOperator zz_bonds(const ModelParams& p);
int bond_count(const ModelParams& p);

// omega_c b^dag b - lambda^2/(L omega_c) S_x^2 + h S_x with
// b = a + lambda/(sqrt(L) omega_c) S_x, assembled from the truncated a and
// S_x. Only valid at J = 0; used as a test reference.
HermitianOperator build_displaced(const ModelParams& p);

// Thread-safe memo of operators keyed by (kind, parameter point).
class OperatorCache {
public:
    using Builder = std::function<HermitianOperator()>;

    std::shared_ptr<const HermitianOperator> get(const std::string& kind, const ModelParams& p, const Builder& build);
    std::size_t size() const;
    void clear();

    static std::string key(const std::string& kind, const ModelParams& p);

private:
    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<const HermitianOperator>> cache_;
};

} // namespace ancilla
