#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nehari {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Thrown when a requested object is finer than the sampling grid.
class ResolutionError : public std::invalid_argument {
public:
    explicit ResolutionError(const std::string& what) : std::invalid_argument(what) {}
};

// Bad argument shapes, dimensions or configuration values.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// An iterative method hit its cap. lower/upper bracket the sought value.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double lower, double upper)
        : std::runtime_error(what), lower(lower), upper(upper) {}
    double lower;
    double upper;
};

}  // namespace nehari
