// fock.cpp — Fock-space operator constructors

#include "qvalve/fock.hpp"

#include <cmath>

namespace qvalve {

Operator annihilation(int n_max) {
    if (n_max < 1) {
        throw InvalidTruncationError("annihilation: n_max must be >= 1");
    }
    Operator a = Operator::Zero(n_max + 1, n_max + 1);
    for (int n = 0; n < n_max; ++n) {
        a(n, n + 1) = std::sqrt(static_cast<double>(n + 1));
    }
    return a;
}

Operator number_operator(int n_max) {
    if (n_max < 1) {
        throw InvalidTruncationError("number_operator: n_max must be >= 1");
    }
    Operator n = Operator::Zero(n_max + 1, n_max + 1);
    for (int k = 0; k <= n_max; ++k) {
        n(k, k) = static_cast<double>(k);
    }
    return n;
}

Operator kron(const Operator& a, const Operator& b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Operator embed(const Operator& op, Site site, const FockSpace& space) {
    if (op.rows() != op.cols()) {
        throw ShapeError("embed: operator must be square");
    }
    if (op.rows() != space.site_dim(site)) {
        throw ShapeError("embed: operator dimension does not match the site truncation");
    }
    if (site == Site::Left) {
        return kron(op, Operator::Identity(space.dim_right(), space.dim_right()));
    }
    return kron(Operator::Identity(space.dim_left(), space.dim_left()), op);
}

Complex expectation(const Operator& op, const DensityMatrix& rho) {
    if (op.rows() != op.cols() || rho.rows() != rho.cols() || op.rows() != rho.rows()) {
        throw ShapeError("expectation: operator and state dimensions do not match");
    }
    return (op * rho).trace();
}

} // namespace qvalve
