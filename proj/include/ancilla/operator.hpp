// operator.hpp — sparse Hermitian operator with a checked constructor

#pragma once

#include "ancilla/types.hpp"

namespace ancilla {

// max |M - M^dagger| / max |M|; zero for the zero matrix.
double hermiticity_defect(const SparseMatrix& m);

class HermitianOperator {
public:
    static constexpr double kHermiticityTol = 1e-13;

    HermitianOperator() = default;

    // Throws NumericalError if m is not square or not Hermitian within
    // kHermiticityTol (relative to its largest element).
    explicit HermitianOperator(SparseMatrix m);

    Index dim() const { return m_.rows(); }
    const SparseMatrix& matrix() const { return m_; }

    Vector apply(const Vector& v) const { return m_ * v; }
    double expectation(const Vector& v) const;

    // Largest absolute row sum; an upper bound on the spectral radius.
    double norm_bound() const;

    HermitianOperator operator+(const HermitianOperator& o) const;
    HermitianOperator operator*(double s) const;

private:
    SparseMatrix m_;
};

} // namespace ancilla
