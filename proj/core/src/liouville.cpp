// liouville.cpp — Superoperator assembly and steady-state solvers

#include "qvalve/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <Eigen/SparseQR>

namespace qvalve {

namespace {

using Triplet = Eigen::Triplet<Complex>;

void append_kron(std::vector<Triplet>& out, const SparseMatrixC& a,
                 const SparseMatrixC& b, Complex factor) {
    const Eigen::Index db = b.rows();
    for (int ka = 0; ka < a.outerSize(); ++ka) {
        for (SparseMatrixC::InnerIterator ita(a, ka); ita; ++ita) {
            const Complex va = factor * ita.value();
            for (int kb = 0; kb < b.outerSize(); ++kb) {
                for (SparseMatrixC::InnerIterator itb(b, kb); itb; ++itb) {
                    out.emplace_back(ita.row() * db + itb.row(),
                                     ita.col() * db + itb.col(), va * itb.value());
                }
            }
        }
    }
}

SparseMatrixC sparse_identity(Eigen::Index d) {
    SparseMatrixC id(d, d);
    id.setIdentity();
    return id;
}

double max_abs(const SparseMatrixC& m) {
    double out = 0.0;
    for (int k = 0; k < m.outerSize(); ++k) {
        for (SparseMatrixC::InnerIterator it(m, k); it; ++it) {
            out = std::max(out, std::abs(it.value()));
        }
    }
    return out;
}

// Index of the diagonal with the smallest magnitude; ties toward lowest index.
Eigen::Index constraint_row(const SparseMatrixC& m) {
    const Eigen::Index n = m.rows();
    Eigen::VectorXd diag_abs = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < m.outerSize(); ++k) {
        for (SparseMatrixC::InnerIterator it(m, k); it; ++it) {
            if (it.row() == it.col()) diag_abs(it.row()) = std::abs(it.value());
        }
    }
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
        if (diag_abs(i) < diag_abs(best)) best = i;
    }
    return best;
}

// Copy of the generator with one row replaced by the trace functional.
SparseMatrixC constrained_matrix(const SparseMatrixC& liouv, Eigen::Index state_dim,
                                 Eigen::Index row) {
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(liouv.nonZeros()) + static_cast<std::size_t>(state_dim));
    for (int k = 0; k < liouv.outerSize(); ++k) {
        for (SparseMatrixC::InnerIterator it(liouv, k); it; ++it) {
            if (it.row() != row) trip.emplace_back(it.row(), it.col(), it.value());
        }
    }
    for (Eigen::Index i = 0; i < state_dim; ++i) {
        trip.emplace_back(row, i * (state_dim + 1), Complex(1.0, 0.0));
    }
    SparseMatrixC out(liouv.rows(), liouv.cols());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

int detect_null_dimension(const SparseMatrixC& liouv) {
    const Eigen::Index n = liouv.rows();
    if (n <= 4096) {
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(Eigen::MatrixXcd(liouv));
        lu.setThreshold(1e-9);
        return static_cast<int>(n - lu.rank());
    }
    Eigen::SparseQR<SparseMatrixC, Eigen::COLAMDOrdering<int>> qr;
    SparseMatrixC compressed = liouv;
    compressed.makeCompressed();
    qr.compute(compressed);
    if (qr.info() != Eigen::Success) return -1;
    return static_cast<int>(n - qr.rank());
}

struct LinearSolve {
    Eigen::VectorXcd x;
    SteadyStateBackend backend = SteadyStateBackend::Dense;
    int iterations = 0;
};

LinearSolve solve_constrained_direct(const SparseMatrixC& liouv, const SparseMatrixC& lc,
                                     const Eigen::VectorXcd& b, bool dense,
                                     const SteadyStateOptions& opt) {
    LinearSolve out;
    if (dense) {
        const Eigen::MatrixXcd lc_dense(lc);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(lc_dense);
        out.x = lu.solve(b);
        for (int pass = 0; pass < opt.max_refinements; ++pass) {
            const Eigen::VectorXcd r = b - lc_dense * out.x;
            out.x += lu.solve(r);
        }
        out.backend = SteadyStateBackend::Dense;
    } else {
        Eigen::SparseLU<SparseMatrixC> lu;
        SparseMatrixC lcc = lc;
        lcc.makeCompressed();
        lu.compute(lcc);
        if (lu.info() != Eigen::Success) {
            throw DegenerateSteadyStateError(
                "steady_state: constrained system is singular (multiple stationary states)",
                detect_null_dimension(liouv));
        }
        out.x = lu.solve(b);
        for (int pass = 0; pass < opt.max_refinements; ++pass) {
            const Eigen::VectorXcd r = b - lcc * out.x;
            out.x += lu.solve(r);
        }
        out.backend = SteadyStateBackend::SparseDirect;
    }
    if (!out.x.allFinite()) {
        throw DegenerateSteadyStateError(
            "steady_state: constrained system is singular (multiple stationary states)",
            detect_null_dimension(liouv));
    }
    return out;
}

// BiCGSTAB with an externally owned preconditioner, so a factorization from a
// nearby scan point can be reused. Returns false on breakdown/stagnation.
bool bicgstab(const SparseMatrixC& a, const Eigen::VectorXcd& b,
              const Eigen::IncompleteLUT<Complex>& precond, Eigen::VectorXcd& x,
              int max_iterations, double rel_tol, int& iterations) {
    const double b_norm = b.norm();
    x = Eigen::VectorXcd::Zero(a.rows());
    Eigen::VectorXcd r = b;
    const Eigen::VectorXcd r0 = r;
    Complex rho(1.0, 0.0), alpha(1.0, 0.0), omega(1.0, 0.0);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(a.rows());
    Eigen::VectorXcd p = Eigen::VectorXcd::Zero(a.rows());
    constexpr double breakdown = 1e-300;

    for (iterations = 0; iterations < max_iterations; ++iterations) {
        const Complex rho_next = r0.dot(r);
        if (std::abs(rho_next) < breakdown || std::abs(omega) < breakdown) return false;
        const Complex beta = (rho_next / rho) * (alpha / omega);
        rho = rho_next;
        p = r + beta * (p - omega * v);
        const Eigen::VectorXcd y = precond.solve(p);
        v = a * y;
        const Complex r0v = r0.dot(v);
        if (std::abs(r0v) < breakdown) return false;
        alpha = rho / r0v;
        const Eigen::VectorXcd s = r - alpha * v;
        const Eigen::VectorXcd z = precond.solve(s);
        const Eigen::VectorXcd t = a * z;
        const double tt = t.squaredNorm();
        if (tt < breakdown) return false;
        omega = t.dot(s) / tt;
        x += alpha * y + omega * z;
        r = s - omega * t;
        if (r.norm() <= rel_tol * b_norm) return true;
    }
    return false;
}

struct RawSolution {
    Eigen::VectorXcd x;
    Eigen::Index row = 0;
    SteadyStateBackend backend = SteadyStateBackend::Dense;
    int iterations = 0;
};

SteadyStateResult finalize(const SparseMatrixC& liouv, Eigen::Index state_dim,
                           const RawSolution& raw, const SteadyStateOptions& opt) {
    SteadyStateResult out;
    out.diagnostics.constrained_row = static_cast<int>(raw.row);
    out.diagnostics.backend_used = raw.backend;
    out.diagnostics.iterations = raw.iterations;
    out.diagnostics.residual_max = (liouv * raw.x).cwiseAbs().maxCoeff();
    if (!(out.diagnostics.residual_max < opt.residual_tol)) {
        throw SteadyStateConvergenceError(
            "steady_state: residual above tolerance", out.diagnostics.residual_max);
    }

    DensityMatrix rho = unvectorize(raw.x, state_dim);
    out.diagnostics.trace_defect = std::abs(rho.trace() - Complex(1.0, 0.0));
    out.diagnostics.hermiticity_defect = hermiticity_defect(rho);

    rho = hermitize(rho);
    rho /= rho.trace().real();

    Eigen::SelfAdjointEigenSolver<DensityMatrix> eig(rho, Eigen::EigenvaluesOnly);
    out.diagnostics.min_eigenvalue = eig.eigenvalues().minCoeff();
    if (out.diagnostics.min_eigenvalue < -opt.negativity_tol) {
        throw SteadyStateConvergenceError(
            "steady_state: state has a negative eigenvalue beyond tolerance",
            out.diagnostics.min_eigenvalue);
    }
    out.rho = std::move(rho);
    return out;
}

void check_trace_preserving(const SparseMatrixC& liouv, Eigen::Index state_dim) {
    Eigen::VectorXcd trace_row = Eigen::VectorXcd::Zero(liouv.rows());
    for (Eigen::Index i = 0; i < state_dim; ++i) trace_row(i * (state_dim + 1)) = 1.0;
    const double defect = (liouv.adjoint() * trace_row).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, max_abs(liouv));
    if (defect > 1e-9 * scale) {
        throw ShapeError("steady_state: generator is not trace-preserving");
    }
}

} // namespace

Eigen::VectorXcd vectorize(const DensityMatrix& rho) {
    return Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
}

DensityMatrix unvectorize(const Eigen::VectorXcd& v, Eigen::Index dim) {
    if (v.size() != dim * dim) {
        throw ShapeError("unvectorize: vector length is not dim^2");
    }
    return Eigen::Map<const DensityMatrix>(v.data(), dim, dim);
}

Superoperator liouvillian(const Operator& hamiltonian,
                          const std::vector<Operator>& collapse) {
    const Eigen::Index d = hamiltonian.rows();
    if (hamiltonian.cols() != d) throw ShapeError("liouvillian: H must be square");
    for (const Operator& c : collapse) {
        if (c.rows() != d || c.cols() != d) {
            throw ShapeError("liouvillian: collapse operator dimension mismatch");
        }
    }

    const SparseMatrixC id = sparse_identity(d);
    const SparseMatrixC h = hamiltonian.sparseView();
    const SparseMatrixC h_t = SparseMatrixC(h.transpose());

    std::vector<Triplet> trip;
    const Complex minus_i(0.0, -1.0);
    append_kron(trip, id, h, minus_i);
    append_kron(trip, h_t, id, -minus_i);

    for (const Operator& c_dense : collapse) {
        const SparseMatrixC c = c_dense.sparseView();
        const SparseMatrixC c_conj = c.conjugate();
        const SparseMatrixC cdc = (c_dense.adjoint() * c_dense).sparseView();
        const SparseMatrixC cdc_t = SparseMatrixC(cdc.transpose());
        append_kron(trip, c_conj, c, Complex(1.0, 0.0));
        append_kron(trip, id, cdc, Complex(-0.5, 0.0));
        append_kron(trip, cdc_t, id, Complex(-0.5, 0.0));
    }

    Superoperator out;
    out.state_dim = d;
    out.matrix.resize(d * d, d * d);
    out.matrix.setFromTriplets(trip.begin(), trip.end());
    out.matrix.prune([](Eigen::Index, Eigen::Index, const Complex& v) {
        return v != Complex(0.0, 0.0);
    });
    out.matrix.makeCompressed();
    return out;
}

SteadyStateResult solve_steady_state(const Superoperator& liouv,
                                     const SteadyStateOptions& options) {
    const Eigen::Index d = liouv.state_dim;
    const Eigen::Index n = liouv.dim();
    if (d * d != n) throw ShapeError("steady_state: inconsistent superoperator dims");
    check_trace_preserving(liouv.matrix, d);

    const Eigen::Index row = constraint_row(liouv.matrix);
    const SparseMatrixC lc = constrained_matrix(liouv.matrix, d, row);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n);
    b(row) = 1.0;

    SteadyStateBackend backend = options.backend;
    if (backend == SteadyStateBackend::Auto) {
        backend = n <= 400 ? SteadyStateBackend::Dense : SteadyStateBackend::Iterative;
    }

    RawSolution raw;
    raw.row = row;
    if (backend == SteadyStateBackend::Iterative) {
        SparseMatrixC lcc = lc;
        lcc.makeCompressed();
        Eigen::IncompleteLUT<Complex> precond;
        precond.setFillfactor(10);
        precond.setDroptol(1e-5);
        precond.compute(lcc);
        int iters = 0;
        if (precond.info() == Eigen::Success &&
            bicgstab(lcc, b, precond, raw.x, 400, 1e-13, iters)) {
            raw.backend = SteadyStateBackend::Iterative;
            raw.iterations = iters;
        } else {
            const LinearSolve direct =
                solve_constrained_direct(liouv.matrix, lc, b, false, options);
            raw.x = direct.x;
            raw.backend = direct.backend;
        }
    } else {
        const LinearSolve direct = solve_constrained_direct(
            liouv.matrix, lc, b, backend == SteadyStateBackend::Dense, options);
        raw.x = direct.x;
        raw.backend = direct.backend;
    }

    // A wildly wrong direct solution (norm blow-up) is the practical signature
    // of a singular constrained system under partial pivoting.
    if (raw.x.cwiseAbs().maxCoeff() > 1e8) {
        throw DegenerateSteadyStateError(
            "steady_state: constrained system is singular (multiple stationary states)",
            detect_null_dimension(liouv.matrix));
    }

    return finalize(liouv.matrix, d, raw, options);
}

SteadyStateScanSolver::SteadyStateScanSolver(Superoperator base,
                                             SparseMatrixC frequency_shift,
                                             SteadyStateOptions options)
    : base_(std::move(base)), shift_(std::move(frequency_shift)), options_(options) {
    if (shift_.rows() != base_.dim() || shift_.cols() != base_.dim()) {
        throw ShapeError("SteadyStateScanSolver: shift dimension mismatch");
    }
    precond_.setFillfactor(10);
    precond_.setDroptol(1e-5);
}

SteadyStateResult SteadyStateScanSolver::solve(double omega) {
    const Eigen::Index d = base_.state_dim;
    SparseMatrixC l_omega = base_.matrix + omega * shift_;
    l_omega.makeCompressed();

    const Eigen::Index row = constraint_row(l_omega);
    SparseMatrixC lc = constrained_matrix(l_omega, d, row);
    lc.makeCompressed();
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(l_omega.rows());
    b(row) = 1.0;

    // Deterministic preconditioner anchors: the cell center of a fixed grid in
    // omega first, the exact omega as a fallback. The result at a given omega
    // never depends on the order in which scan points were visited.
    const double cell_anchor =
        (std::floor(omega / rebuild_distance_) + 0.5) * rebuild_distance_;

    RawSolution raw;
    raw.row = row;
    bool solved = false;
    for (const double anchor : {cell_anchor, omega}) {
        if (!precond_omega_ || *precond_omega_ != anchor) {
            SparseMatrixC l_anchor = base_.matrix + anchor * shift_;
            SparseMatrixC lc_anchor = constrained_matrix(l_anchor, d, constraint_row(l_anchor));
            lc_anchor.makeCompressed();
            precond_.compute(lc_anchor);
            precond_omega_ = anchor;
        }
        int iters = 0;
        if (precond_.info() == Eigen::Success &&
            bicgstab(lc, b, precond_, raw.x, 250, 1e-13, iters)) {
            raw.backend = SteadyStateBackend::Iterative;
            raw.iterations = iters;
            solved = true;
            break;
        }
        precond_omega_.reset();
    }
    if (!solved) {
        const LinearSolve direct = solve_constrained_direct(l_omega, lc, b, false, options_);
        raw.x = direct.x;
        raw.backend = direct.backend;
        precond_omega_.reset();
    }

    if (raw.x.cwiseAbs().maxCoeff() > 1e8) {
        throw DegenerateSteadyStateError(
            "steady_state: constrained system is singular (multiple stationary states)",
            detect_null_dimension(l_omega));
    }

    Superoperator tmp;
    tmp.state_dim = d;
    tmp.matrix = std::move(l_omega);
    return finalize(tmp.matrix, d, raw, options_);
}

DensityCheck check_density(const DensityMatrix& rho) {
    DensityCheck out;
    out.hermiticity_defect = hermiticity_defect(rho);
    out.trace_defect = std::abs(rho.trace() - Complex(1.0, 0.0));
    Eigen::SelfAdjointEigenSolver<DensityMatrix> eig(hermitize(rho), Eigen::EigenvaluesOnly);
    out.min_eigenvalue = eig.eigenvalues().minCoeff();
    return out;
}

} // namespace qvalve
