#include "pnpk/jump_diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "pnpk/error.hpp"
#include "pnpk/parallel.hpp"

namespace pnpk {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double fold(double x) {
    x -= 2.0 * std::floor(x / 2.0);
    return x > 1.0 ? 2.0 - x : x;
}

struct Particle {
    std::mt19937_64 rng;
    std::normal_distribution<double> gauss{0.0, 1.0};
    std::uniform_real_distribution<double> unif{0.0, 1.0};
    double x;
    std::int64_t jumps = 0;
    std::int64_t to_left = 0;

    Particle(std::uint64_t seed, std::uint64_t index, double y0)
        : rng(splitmix64(seed ^ splitmix64(index))), x(y0) {}

    double uniform_open() { return 1.0 - unif(rng); }  // (0, 1]

    void diffuse(std::int64_t steps, double dt) {
        if (steps > 0) x = fold(x + std::sqrt(2.0 * dt * double(steps)) * gauss(rng));
    }

    void jump() {
        ++jumps;
        if (unif(rng) < 1.0 - x) {
            x = 0.0;
            ++to_left;
        } else {
            x = 1.0;
        }
    }
};

void run_event_driven(Particle& p, std::int64_t steps, const SimConfig& c) {
    const double log_stay = -c.jump_rate * c.dt;  // log(1 - event probability)
    std::int64_t remaining = steps;
    std::int64_t pending = 0;  // diffusion steps owed, including the current event step
    while (true) {
        std::int64_t gap = std::numeric_limits<std::int64_t>::max();
        if (log_stay < 0.0) {
            const double g = std::floor(std::log(p.uniform_open()) / log_stay);
            if (g < double(remaining)) gap = std::int64_t(g);
        }
        if (gap >= remaining) {
            p.diffuse(pending + remaining, c.dt);
            return;
        }
        p.diffuse(pending + gap, c.dt);
        remaining -= gap;
        p.jump();
        pending = 1;
        remaining -= 1;
    }
}

void run_per_step(Particle& p, std::int64_t steps, const SimConfig& c) {
    const double prob = -std::expm1(-c.jump_rate * c.dt);
    for (std::int64_t s = 0; s < steps; ++s) {
        if (p.unif(p.rng) < prob) p.jump();
        p.diffuse(1, c.dt);
    }
}

}  // namespace

SimConfig SimConfig::for_params(const ModelParams& params) {
    SimConfig c;
    c.jump_rate = params.kappa2;
    return c;
}

void SimConfig::validate() const {
    if (particle_count < 1) throw Error(ErrorCode::InvalidArgument, "particle_count must be >= 1");
    if (!(dt > 0) || dt > 1e-3) throw Error(ErrorCode::InvalidArgument, "dt must be in (0, 1e-3]");
    if (!(jump_rate >= 0) || !std::isfinite(jump_rate))
        throw Error(ErrorCode::InvalidArgument, "jump_rate must be >= 0");
    if (jump_rate * dt > 0.1) throw Error(ErrorCode::InvalidArgument, "jump_rate * dt must be <= 0.1");
    if (bins < 10) throw Error(ErrorCode::InvalidArgument, "bins must be >= 10");
}

SimulationResult simulate(double y0, double t, const SimConfig& config) {
    config.validate();
    if (!(y0 > 0.0 && y0 < 1.0)) throw Error(ErrorCode::InvalidStart, "y0 must lie in (0, 1)");
    if (!(t >= 10.0 * config.dt)) throw Error(ErrorCode::InvalidArgument, "t must be >= 10 dt");
    const auto steps = std::int64_t(std::llround(t / config.dt));
    const auto n = std::size_t(config.particle_count);
    const auto bins = std::size_t(config.bins);

    // one slot per fixed chunk; merged in chunk order
    const std::size_t chunk = 4096;
    const std::size_t chunks = (n + chunk - 1) / chunk;
    std::vector<std::vector<std::int64_t>> counts(chunks, std::vector<std::int64_t>(bins, 0));
    std::vector<std::int64_t> jumps(chunks, 0), left(chunks, 0);

    parallel_for(chunks, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const std::size_t end = std::min(n, (k + 1) * chunk);
            for (std::size_t i = k * chunk; i < end; ++i) {
                Particle p(config.seed, i, y0);
                if (config.stepping == SimStepping::event_driven) {
                    run_event_driven(p, steps, config);
                } else {
                    run_per_step(p, steps, config);
                }
                const auto bin = std::min(bins - 1, std::size_t(p.x * double(bins)));
                ++counts[k][bin];
                jumps[k] += p.jumps;
                left[k] += p.to_left;
            }
        }
    });

    SimulationResult out;
    Histogram& h = out.histogram;
    h.bins = config.bins;
    h.counts.assign(bins, 0);
    std::int64_t total_jumps = 0, total_left = 0;
    for (std::size_t k = 0; k < chunks; ++k) {
        for (std::size_t j = 0; j < bins; ++j) h.counts[j] += counts[k][j];
        total_jumps += jumps[k];
        total_left += left[k];
    }
    h.normalized.resize(bins);
    for (std::size_t j = 0; j < bins; ++j) h.normalized[j] = double(h.counts[j]) * double(bins) / double(n);
    out.stats.mean_jumps = double(total_jumps) / double(n);
    out.stats.frac_to_left = total_jumps > 0 ? double(total_left) / double(total_jumps) : 0.0;
    return out;
}

Histogram simulate_ensemble(const ModelParams& params, double y0, double t, const SimConfig& config) {
    if (!(params.kappa2 >= 0)) throw Error(ErrorCode::InvalidArgument, "kappa2 must be >= 0");
    SimConfig c = config;
    c.jump_rate = params.kappa2;
    return simulate(y0, t, c).histogram;
}

JumpStatistics jump_statistics(const ModelParams& params, double y0, double t, const SimConfig& config) {
    if (!(params.kappa2 >= 0)) throw Error(ErrorCode::InvalidArgument, "kappa2 must be >= 0");
    SimConfig c = config;
    c.jump_rate = params.kappa2;
    return simulate(y0, t, c).stats;
}

double l1_distance(const Histogram& h, const ScalarField& reference) {
    const std::size_t n = reference.grid_size();
    if (h.bins < 1 || h.normalized.size() != std::size_t(h.bins))
        throw Error(ErrorCode::GridMismatch, "histogram is malformed");
    if (n < 2 || n - 1 < std::size_t(h.bins))
        throw Error(ErrorCode::GridMismatch, "reference grid has fewer intervals than histogram bins");
    const double hx = reference.spacing();
    const double width = 1.0 / h.bins;

    // integral of the linear interpolant from 0 to x
    std::vector<double> cum(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) cum[i] = cum[i - 1] + 0.5 * hx * (reference[i - 1] + reference[i]);
    auto primitive = [&](double x) {
        const auto i = std::min(n - 2, std::size_t(x / hx));
        const double s = x - double(i) * hx;
        const double slope = (reference[i + 1] - reference[i]) / hx;
        return cum[i] + s * reference[i] + 0.5 * slope * s * s;
    };

    double l1 = 0.0;
    for (int j = 0; j < h.bins; ++j) {
        const double avg = (primitive((j + 1) * width) - primitive(j * width)) / width;
        l1 += width * std::abs(h.normalized[std::size_t(j)] - avg);
    }
    return l1;
}

Histogram mirrored(const Histogram& h) {
    Histogram m = h;
    std::reverse(m.counts.begin(), m.counts.end());
    std::reverse(m.normalized.begin(), m.normalized.end());
    return m;
}

}  // namespace pnpk
