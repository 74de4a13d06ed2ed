// dynamics.hpp — Master-equation time propagation and integrated currents

#pragma once

#include <vector>

#include "qvalve/liouville.hpp"
#include "qvalve/model.hpp"

namespace qvalve {

// Time series sampled on a uniform output grid. Currents are q_i = gamma <n_i>.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> n_left;
    std::vector<double> n_right;
    std::vector<double> trace;
    std::vector<double> q_left;
    std::vector<double> q_right;
    std::vector<double> g2_left;   // filled only when requested
    std::vector<double> g2_right;
    DensityMatrix final_rho;
    double min_state_eigenvalue = 0.0;  // over all sampled states (when checked)
    long accepted_steps = 0;
    long rejected_steps = 0;
};

struct EvolveOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    int n_samples = 2000;          // uniform output points after t=0
    bool record_g2 = false;
    bool check_positivity = true;  // eigenvalue scan of every sampled state
    double trace_tol = 1e-6;       // hard failure threshold on trace drift
    double gamma = 1.0;            // converts occupations to currents
};

// Adaptive Dormand-Prince 5(4) propagation of the vectorized state. Steps are
// clamped to the output grid, so every sample lies on an integration node.
Trajectory evolve(const DensityMatrix& rho0, const Operator& hamiltonian,
                  const std::vector<Operator>& collapse, double t_end,
                  const EvolveOptions& options = {});

// Same propagation for a prebuilt generator (reused across sweep points).
Trajectory evolve(const DensityMatrix& rho0, const Superoperator& liouv,
                  double t_end, const EvolveOptions& options = {});

// Trapezoidal integral of q_site over the trajectory grid.
double integrated_current(const Trajectory& traj, Site site);

struct TransportResult {
    double q_total_left = 0.0;    // photons emitted from the left site
    double q_total_right = 0.0;   // photons emitted from the right site
    PumpDirection pump = PumpDirection::LeftToRight;
    double horizon = 0.0;          // final integration time, units 1/gamma
    double residual_excitation = 0.0;
    int samples_used = 0;          // output-grid size after stability doubling
};

struct FockTransportOptions {
    double epsilon = 1e-6;        // residual-excitation stop threshold
    double t_cap = 200.0;         // hard time cap, units 1/gamma
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    int n_samples = 2000;         // initial grid; doubled until currents settle
    int max_doublings = 9;
    double current_stability_tol = 1e-6;
    bool check_positivity = true;
};

// Relaxation of an initial |n_init> Fock state loaded in the pumped site with
// the other site in vacuum and the drive off. The truncation n_max = n_init
// per site is exact because the total excitation number never grows.
TransportResult fock_transport(const JunctionParams& params, int n_init,
                               PumpDirection pump,
                               const FockTransportOptions& options = {});

} // namespace qvalve
