// model.hpp — Junction Hamiltonian, collapse operators, bare eigenanalysis

#pragma once

#include <vector>

#include "qvalve/fock.hpp"

namespace qvalve {

// Pump direction labels: LeftToRight drives (or loads) the left site,
// RightToLeft the right one. Drive magnitude is identical for both.
enum class PumpDirection { LeftToRight, RightToLeft };

inline Site pumped_site(PumpDirection p) {
    return p == PumpDirection::LeftToRight ? Site::Left : Site::Right;
}
inline Site far_site(PumpDirection p) {
    return p == PumpDirection::LeftToRight ? Site::Right : Site::Left;
}
inline PumpDirection reversed(PumpDirection p) {
    return p == PumpDirection::LeftToRight ? PumpDirection::RightToLeft
                                           : PumpDirection::LeftToRight;
}

// All rates in units of gamma. gamma itself is 1 in every preset and config
// path; it is kept as a field only so scale-invariance can be exercised.
struct JunctionParams {
    double delta_left = 0.0;   // Delta_L = omega_L - omega_laser
    double delta_right = 0.0;  // Delta_R = omega_R - omega_laser
    double kerr = 0.0;         // U, on the nonlinear site only
    double tunnel = 0.0;       // J
    Complex drive = 0.0;       // F, applied to the pumped site only
    double gamma = 1.0;        // loss rate of each site; 1 fixes the unit system
    PumpDirection pump = PumpDirection::LeftToRight;
    Site kerr_site = Site::Left;  // canonical orientation; Right only mirrors tests

    void validate() const;
};

// Laser-frequency scan parametrization: a global offset omega_g shifts both
// detunings while the inter-resonator detuning delta_rl = Delta_L - Delta_R
// stays fixed: Delta_L = delta_rl/2 + omega_g, Delta_R = -delta_rl/2 + omega_g.
struct ScanOffset {
    double omega_g = 0.0;
    double delta_rl = 0.0;

    double delta_left() const { return 0.5 * delta_rl + omega_g; }
    double delta_right() const { return -0.5 * delta_rl + omega_g; }

    JunctionParams apply(JunctionParams base) const {
        base.delta_left = delta_left();
        base.delta_right = delta_right();
        return base;
    }
};

// Delta_L n_L + Delta_R n_R + (U/2) aL+ aL+ aL aL + J (aL+ aR + aL aR+),
// plus F a_p+ + F* a_p on the pumped site when include_drive is set.
Operator build_hamiltonian(const JunctionParams& params, const FockSpace& space,
                           bool include_drive);

// [sqrt(gamma) a_L, sqrt(gamma) a_R].
std::vector<Operator> collapse_operators(const JunctionParams& params,
                                         const FockSpace& space);

struct BareLevel {
    double energy = 0.0;
    double n_left = 0.0;   // <aL+ aL> in the eigenvector
    bool degenerate = false;  // gap to a neighbouring level below 1e-10
};

// Lowest n_levels eigenpairs of the undriven Hamiltonian, sorted ascending.
// Degenerate levels are flagged; their eigenvectors come out in the
// deterministic order produced by the dense symmetric solver.
std::vector<BareLevel> bare_eigenanalysis(const JunctionParams& params,
                                          const FockSpace& space, int n_levels);

struct EigenConvergence {
    double max_energy_shift = 0.0;
    double max_n_left_shift = 0.0;
};

// Re-runs the eigenanalysis with both truncations raised by two and reports
// the largest shifts over the requested levels. Note that when a detuning is
// negative the bare spectrum fills the truncated site up to its cutoff, so
// the energies never converge while the occupations still do.
EigenConvergence eigen_convergence(const JunctionParams& params,
                                   const FockSpace& space, int n_levels);

} // namespace qvalve
