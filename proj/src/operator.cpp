// operator.cpp

#include "ancilla/operator.hpp"

#include <algorithm>
#include <cmath>

namespace ancilla {

double hermiticity_defect(const SparseMatrix& m) {
    const SparseMatrix diff = SparseMatrix(m - SparseMatrix(m.adjoint()));
    double scale = 0.0;
    for (Index k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for (Index k = 0; k < diff.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst / scale;
}

HermitianOperator::HermitianOperator(SparseMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw NumericalError("Hermitian operator must be square");
    const double defect = hermiticity_defect(m_);
    if (defect > kHermiticityTol)
        throw NumericalError("operator is not Hermitian (relative defect " + std::to_string(defect) + ")");
    m_.makeCompressed();
}

double HermitianOperator::expectation(const Vector& v) const {
    return v.dot(m_ * v).real();
}

double HermitianOperator::norm_bound() const {
    double best = 0.0;
    for (Index k = 0; k < m_.outerSize(); ++k) {
        double row = 0.0;
        for (SparseMatrix::InnerIterator it(m_, k); it; ++it) row += std::abs(it.value());
        best = std::max(best, row);
    }
    return best;
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
    return HermitianOperator(SparseMatrix(m_ + o.m_));
}

HermitianOperator HermitianOperator::operator*(double s) const {
    return HermitianOperator(SparseMatrix(m_ * Complex(s)));
}

} // namespace ancilla
