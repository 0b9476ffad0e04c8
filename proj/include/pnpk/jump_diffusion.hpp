#pragma once

#include <cstdint>
#include <vector>

#include "pnpk/types.hpp"

namespace pnpk {

enum class SimStepping {
    event_driven,  // geometric waiting steps between jump events; same law as per_step
    per_step,
};

struct SimConfig {
    std::int64_t particle_count = 100000;
    double dt = 1e-4;
    std::uint64_t seed = 42;
    double jump_rate = 1.0;
    int bins = 100;
    SimStepping stepping = SimStepping::event_driven;

    /// Defaults with jump_rate = params.kappa2.
    static SimConfig for_params(const ModelParams& params);
    /// InvalidArgument unless N >= 1, 0 < dt <= 1e-3, 0 <= rate, rate*dt <= 0.1, bins >= 10.
    void validate() const;
};

struct Histogram {
    int bins = 0;
    std::vector<std::int64_t> counts;
    std::vector<double> normalized;  // density per bin, sum * (1/bins) = 1

    double bin_center(int i) const { return (i + 0.5) / bins; }
};

struct JumpStatistics {
    double mean_jumps = 0.0;    // events per particle
    double frac_to_left = 0.0;  // share of events landing at 0 (0 if there were none)
};

struct SimulationResult {
    Histogram histogram;
    JumpStatistics stats;
};

/// Reflected diffusion with generator d^2/dx^2, jumping to 0 with probability
/// 1 - x and to 1 otherwise at the events of a rate-kappa2 Poisson clock
/// (config.jump_rate). Deterministic in the seed for any PNPK_THREADS.
/// Throws InvalidStart unless 0 < y0 < 1, InvalidArgument if t < 10 dt.
SimulationResult simulate(double y0, double t, const SimConfig& config);

Histogram simulate_ensemble(const ModelParams& params, double y0, double t, const SimConfig& config);
JumpStatistics jump_statistics(const ModelParams& params, double y0, double t, const SimConfig& config);

/// Integral of |density - reference| with the reference's linear interpolant
/// averaged over each bin. GridMismatch if the reference has fewer intervals than bins.
double l1_distance(const Histogram& h, const ScalarField& reference);

/// Mirror image x -> 1 - x of a histogram.
Histogram mirrored(const Histogram& h);

}  // namespace pnpk
