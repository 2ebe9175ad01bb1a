// types.hpp — scalar and matrix aliases, axis tags and error types

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace ancilla {

using Real = double;
using Complex = std::complex<double>;
using Index = Eigen::Index;

using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Row-major so that y = H x streams rows; assembly goes through triplets in a
// fixed order, which makes the stored layout reproducible.
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

// Invalid parameters, malformed configuration, out-of-range indices.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Eigensolver or propagator failures, violated numerical invariants.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Axis { x, y, z };

constexpr char axis_name(Axis a) {
    switch (a) {
    case Axis::x: return 'x';
    case Axis::y: return 'y';
    case Axis::z: return 'z';
    }
    return '?';
}

inline Axis parse_axis(std::string_view s) {
    if (s == "x") return Axis::x;
    if (s == "y") return Axis::y;
    if (s == "z") return Axis::z;
    throw ConfigError("unknown axis '" + std::string(s) + "' (expected x, y or z)");
}

} // namespace ancilla
