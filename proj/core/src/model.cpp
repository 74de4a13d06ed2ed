// model.cpp — Hamiltonian assembly and bare-spectrum analysis

#include "qvalve/model.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace qvalve {

void JunctionParams::validate() const {
    if (kerr < 0.0) throw ConfigError("JunctionParams: kerr strength U must be >= 0");
    if (tunnel < 0.0) throw ConfigError("JunctionParams: tunnel coupling J must be >= 0");
    if (gamma <= 0.0) throw ConfigError("JunctionParams: gamma must be > 0");
}

Operator build_hamiltonian(const JunctionParams& params, const FockSpace& space,
                           bool include_drive) {
    params.validate();

    const Operator a_l = embed(annihilation(space.n_max_left), Site::Left, space);
    const Operator a_r = embed(annihilation(space.n_max_right), Site::Right, space);
    const Operator n_l = a_l.adjoint() * a_l;
    const Operator n_r = a_r.adjoint() * a_r;

    Operator h = params.delta_left * n_l + params.delta_right * n_r;

    const Operator& a_kerr = params.kerr_site == Site::Left ? a_l : a_r;
    h += 0.5 * params.kerr * (a_kerr.adjoint() * a_kerr.adjoint() * a_kerr * a_kerr);
    h += params.tunnel * (a_l.adjoint() * a_r + a_l * a_r.adjoint());

    if (include_drive) {
        const Operator& a_p = pumped_site(params.pump) == Site::Left ? a_l : a_r;
        h += params.drive * a_p.adjoint() + std::conj(params.drive) * a_p;
    }
    return h;
}

std::vector<Operator> collapse_operators(const JunctionParams& params,
                                         const FockSpace& space) {
    params.validate();
    const double root_gamma = std::sqrt(params.gamma);
    return {root_gamma * embed(annihilation(space.n_max_left), Site::Left, space),
            root_gamma * embed(annihilation(space.n_max_right), Site::Right, space)};
}

std::vector<BareLevel> bare_eigenanalysis(const JunctionParams& params,
                                          const FockSpace& space, int n_levels) {
    if (n_levels < 1) throw ConfigError("bare_eigenanalysis: n_levels must be >= 1");
    if (n_levels > space.total_dim()) {
        throw ShapeError("bare_eigenanalysis: more levels requested than the space holds");
    }

    const Operator h = build_hamiltonian(params, space, /*include_drive=*/false);
    Eigen::SelfAdjointEigenSolver<Operator> solver(h);
    if (solver.info() != Eigen::Success) {
        throw IntegrationError("bare_eigenanalysis: dense eigensolver failed");
    }

    const Operator n_l = embed(number_operator(space.n_max_left), Site::Left, space);
    constexpr double degeneracy_gap = 1e-10;

    std::vector<BareLevel> levels(static_cast<std::size_t>(n_levels));
    for (int k = 0; k < n_levels; ++k) {
        const Eigen::VectorXcd vec = solver.eigenvectors().col(k);
        BareLevel& lvl = levels[static_cast<std::size_t>(k)];
        lvl.energy = solver.eigenvalues()(k);
        lvl.n_left = std::real(vec.dot(n_l * vec));
        const bool gap_below = k > 0 &&
            std::abs(solver.eigenvalues()(k) - solver.eigenvalues()(k - 1)) < degeneracy_gap;
        const bool gap_above = k + 1 < space.total_dim() &&
            std::abs(solver.eigenvalues()(k + 1) - solver.eigenvalues()(k)) < degeneracy_gap;
        lvl.degenerate = gap_below || gap_above;
    }
    return levels;
}

EigenConvergence eigen_convergence(const JunctionParams& params,
                                   const FockSpace& space, int n_levels) {
    const auto coarse = bare_eigenanalysis(params, space, n_levels);
    const FockSpace finer(space.n_max_left + 2, space.n_max_right + 2);
    const auto fine = bare_eigenanalysis(params, finer, n_levels);

    EigenConvergence out;
    for (std::size_t k = 0; k < coarse.size(); ++k) {
        out.max_energy_shift =
            std::max(out.max_energy_shift, std::abs(coarse[k].energy - fine[k].energy));
        out.max_n_left_shift =
            std::max(out.max_n_left_shift, std::abs(coarse[k].n_left - fine[k].n_left));
    }
    return out;
}

} // namespace qvalve
