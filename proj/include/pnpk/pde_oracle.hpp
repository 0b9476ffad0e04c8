#pragma once

#include <utility>
#include <vector>

#include "pnpk/bvp_oracle.hpp"
#include "pnpk/types.hpp"

namespace pnpk {

enum class Scheme { crank_nicolson, implicit_euler };

struct EvolveConfig {
    int nx = 513;
    double dt = 1e-4;
    Scheme scheme = Scheme::crank_nicolson;
    double t_end = 1.0;
    /// Crank-Nicolson only: the first `startup_steps` steps are each replaced
    /// by two implicit Euler half steps, which damps the grid-scale modes of
    /// rough (delta) data.
    int startup_steps = 2;
};

struct EvolutionResult {
    ScalarField final;
    std::vector<std::pair<double, double>> mass_trace;  // (t, trapezoid integral of u)
    std::vector<std::pair<double, double>> min_trace;   // (t, min u)
    std::vector<ScalarField> snapshots;                 // at the requested times, in order
};

/// Which problem the stepper advances.
enum class Dynamics {
    damped,     // u_t = u_xx - k2 u, boundary pair with the -eps k2 V terms
    undamped,   // v_t = v_xx, homogeneous non-local pair
    neumann,    // w_t = w_xx, zero flux
};

/// Finite differences in x (ghost-node boundary rows, trapezoid weights for
/// the boundary integrals, all at the new time level) and theta-stepping in t.
/// The boundary rows make sum_i w_i u_i exactly conserved when V = 0.
EvolutionResult evolve(const ModelParams& params, const ScalarField& init, const EvolveConfig& config,
                       Dynamics dynamics = Dynamics::damped, const std::vector<double>& snapshot_times = {});

/// Neumann reference problem, no damping.
EvolutionResult neumann_evolve(const ScalarField& init, const EvolveConfig& config);

/// Evolves a unit-mass point source at y to time t (config.t_end is ignored).
ScalarField kernel_estimate(const ModelParams& params, double y, double t, const EvolveConfig& config,
                            DeltaPlacement placement = DeltaPlacement::split);

/// One run, several output times.
std::vector<ScalarField> kernel_estimates(const ModelParams& params, double y, const std::vector<double>& times,
                                          const EvolveConfig& config, Dynamics dynamics = Dynamics::damped,
                                          DeltaPlacement placement = DeltaPlacement::split);

/// Coefficient in front of E in the boundary flux u_x + c E = 0.
enum class FluxConvention {
    lemma,    // c = k2 * eps, the reduced non-local pair with -eps k2 V
    printed,  // c = k2 / eps, as printed with the field equations
};

struct BcResidual {
    double residual0;
    double residual1;
};

/// Reconstructs E from -eps E' = u with int_0^1 E = V, then returns
/// u_x + c E at x = 0 and x = 1. Sixth-order one-sided differences for u_x,
/// Simpson for the integrals.
BcResidual bc_reduction_check(const ModelParams& params, const ScalarField& u,
                              FluxConvention convention = FluxConvention::lemma);

/// Samples f on the uniform grid of n points.
template <class F>
ScalarField sample(std::size_t n, F&& f) {
    ScalarField out{n};
    for (std::size_t i = 0; i < n; ++i) out[i] = f(out.x(i));
    return out;
}

}  // namespace pnpk
