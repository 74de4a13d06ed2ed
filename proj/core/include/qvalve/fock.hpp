// fock.hpp — Truncated two-site Fock space and dense operator algebra

#pragma once

#include <complex>

#include <Eigen/Dense>

#include "qvalve/errors.hpp"

namespace qvalve {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using DensityMatrix = Eigen::MatrixXcd;

enum class Site { Left, Right };

// Truncated Hilbert space of the two-site junction. Basis ordering is
// occupation-number lexicographic with the left site as the slow index:
// |n_L, n_R> sits at index n_L * dim_right + n_R. This ordering is fixed;
// every tensor embedding in the library assumes it.
struct FockSpace {
    int n_max_left;
    int n_max_right;

    FockSpace(int n_max_l, int n_max_r) : n_max_left(n_max_l), n_max_right(n_max_r) {
        if (n_max_l < 1 || n_max_r < 1) {
            throw InvalidTruncationError("FockSpace requires n_max >= 1 on both sites");
        }
    }

    int dim_left() const { return n_max_left + 1; }
    int dim_right() const { return n_max_right + 1; }
    int total_dim() const { return dim_left() * dim_right(); }
    int site_dim(Site s) const { return s == Site::Left ? dim_left() : dim_right(); }
    int index(int n_l, int n_r) const { return n_l * dim_right() + n_r; }
};

// Single-mode annihilation operator on a truncation with levels 0..n_max:
// a[n, n+1] = sqrt(n+1).
Operator annihilation(int n_max);

// Single-mode number operator diag(0..n_max).
Operator number_operator(int n_max);

// Kronecker product, first argument is the slow (outer) factor.
Operator kron(const Operator& a, const Operator& b);

// Embed a single-site operator into the two-site space: op (x) I for the
// left site, I (x) op for the right site.
Operator embed(const Operator& op, Site site, const FockSpace& space);

// trace(op * rho).
Complex expectation(const Operator& op, const DensityMatrix& rho);

inline Operator dagger(const Operator& op) { return op.adjoint(); }

inline double hermiticity_defect(const Operator& op) {
    return (op - op.adjoint()).cwiseAbs().maxCoeff();
}

inline Operator hermitize(const Operator& op) { return 0.5 * (op + op.adjoint()); }

} // namespace qvalve
