// liouville.hpp — Vectorized Lindblad generator and steady-state solve

#pragma once

#include <optional>
#include <vector>

#include <Eigen/Sparse>

#include "qvalve/fock.hpp"

namespace qvalve {

using SparseMatrixC = Eigen::SparseMatrix<Complex>;

// Column-stacking vectorization. Eigen matrices are column-major, so this is
// a straight memory map: vec(rho)[i + j*d] = rho(i, j).
Eigen::VectorXcd vectorize(const DensityMatrix& rho);
DensityMatrix unvectorize(const Eigen::VectorXcd& v, Eigen::Index dim);

// The generator of drho/dt = -i[H,rho] + sum_c (c rho c+ - 1/2 {c+c, rho})
// acting on column-stacked density matrices:
//   L = -i (I (x) H - H^T (x) I)
//     + sum_c [ conj(c) (x) c - 1/2 I (x) (c+c) - 1/2 (c+c)^T (x) I ].
// Stored sparse; the paper-scale generators have a few dozen entries per row.
struct Superoperator {
    Eigen::Index state_dim = 0;  // d, the density-matrix edge
    SparseMatrixC matrix;        // d^2 x d^2

    Eigen::Index dim() const { return matrix.rows(); }
    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const { return matrix * v; }
    Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix); }
};

Superoperator liouvillian(const Operator& hamiltonian,
                          const std::vector<Operator>& collapse);

enum class SteadyStateBackend { Auto, Dense, SparseDirect, Iterative };

struct SteadyStateOptions {
    SteadyStateBackend backend = SteadyStateBackend::Auto;
    double residual_tol = 1e-10;     // max-norm of L vec(rho)
    double negativity_tol = 1e-8;    // allowed magnitude of negative eigenvalues
    int max_refinements = 2;         // iterative-refinement passes on the solve
};

struct SteadyStateDiagnostics {
    double residual_max = 0.0;       // before hermitization
    double trace_defect = 0.0;       // |tr(rho) - 1| of the raw solution
    double hermiticity_defect = 0.0; // of the raw solution
    double min_eigenvalue = 0.0;     // of the hermitized state
    int constrained_row = 0;         // row replaced by the trace constraint
    SteadyStateBackend backend_used = SteadyStateBackend::Auto;
    int iterations = 0;              // Krylov iterations (iterative backend)
};

struct SteadyStateResult {
    DensityMatrix rho;               // hermitized, trace-normalized
    SteadyStateDiagnostics diagnostics;
};

// Unique stationary state of a trace-preserving generator, from a direct (or
// residual-checked iterative) solve of the trace-constrained linear system.
// The constraint replaces the row with the smallest diagonal magnitude, ties
// broken toward the lowest index.
SteadyStateResult solve_steady_state(const Superoperator& liouv,
                                     const SteadyStateOptions& options = {});

inline DensityMatrix steady_state(const Superoperator& liouv,
                                  const SteadyStateOptions& options = {}) {
    return solve_steady_state(liouv, options).rho;
}

// Reusable solver for families L(omega) = L0 + omega * shift that arise in
// laser-frequency scans. Keeps the incomplete-LU preconditioner from a nearby
// frequency and rebuilds it once the Krylov solve stops converging fast.
// Results are identical to one-shot solves: the residual of the exact
// generator is verified for every returned state.
class SteadyStateScanSolver {
public:
    SteadyStateScanSolver(Superoperator base, SparseMatrixC frequency_shift,
                          SteadyStateOptions options = {});

    SteadyStateResult solve(double omega);

private:
    Superoperator base_;
    SparseMatrixC shift_;
    SteadyStateOptions options_;
    Eigen::IncompleteLUT<Complex> precond_;
    std::optional<double> precond_omega_;
    double rebuild_distance_ = 1.0;
};

// Convenience checks used by tests and trajectory monitoring.
struct DensityCheck {
    double hermiticity_defect = 0.0;
    double trace_defect = 0.0;
    double min_eigenvalue = 0.0;
};
DensityCheck check_density(const DensityMatrix& rho);

} // namespace qvalve
