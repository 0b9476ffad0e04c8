#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "pnpk/error.hpp"
#include "pnpk/heat_kernel.hpp"
#include "pnpk/jump_diffusion.hpp"

using namespace pnpk;

namespace {
SimConfig sim(std::int64_t n, double dt, double rate, int bins = 100, std::uint64_t seed = 42) {
    SimConfig c;
    c.particle_count = n;
    c.dt = dt;
    c.jump_rate = rate;
    c.bins = bins;
    c.seed = seed;
    return c;
}

Histogram from_density(std::vector<double> density) {
    Histogram h;
    h.bins = int(density.size());
    h.normalized = std::move(density);
    h.counts.assign(h.normalized.size(), 0);
    return h;
}

ScalarField reference(double k2, double y, double t) {
    const ModelParams p{k2, 1, 0};
    const KernelConfig cfg = make_kernel_config(p);
    return kernel_field(p, y, t, 1001, find_eigenvalues(p, cfg.mode_count), cfg);
}

struct ThreadsGuard {
    ~ThreadsGuard() { unsetenv("PNPK_THREADS"); }
};
}  // namespace

TEST_CASE("l1_distance") {
    SUBCASE("uniform histogram against the constant 1") {
        CHECK(l1_distance(from_density(std::vector<double>(20, 1.0)), ScalarField(101, 1.0)) < 1e-15);
    }
    SUBCASE("histogram against a reference with the same bin averages") {
        ScalarField f(11);
        for (std::size_t i = 0; i < 11; ++i) f[i] = 2.0 * f.x(i);
        std::vector<double> d;
        for (int j = 0; j < 10; ++j) d.push_back(0.2 * j + 0.1);
        CHECK(l1_distance(from_density(d), f) < 1e-15);
    }
    SUBCASE("bin-wise absolute differences") {
        const Histogram h = from_density({0.5, 1.5, 1.0, 0.2, 1.8, 1.0, 1.0, 0.6, 1.4, 1.0});
        CHECK(l1_distance(h, ScalarField(201, 1.0)) == doctest::Approx(0.1 * (0.5 + 0.5 + 0.8 + 0.8 + 0.4 + 0.4)));
        CHECK(l1_distance(h, ScalarField(11, 0.0)) == doctest::Approx(1.0));
    }
    SUBCASE("shifted uniform block against the constant") {
        // density 2 on [0.25, 0.75) against 1: mass moved out of half the interval
        std::vector<double> d(20, 0.0);
        for (int j = 5; j < 15; ++j) d[j] = 2.0;
        CHECK(l1_distance(from_density(d), ScalarField(201, 1.0)) == doctest::Approx(1.0));
        // shifting a unit-height block by s moves 2s of mass into the L1 norm
        std::vector<double> e(20, 1.0);
        e[0] = 0.0;
        e[19] = 2.0;
        CHECK(l1_distance(from_density(e), ScalarField(201, 1.0)) == doctest::Approx(2 * 0.05));
    }
    SUBCASE("exact bin averages of a linear reference") {
        const Histogram h = from_density(std::vector<double>(10, 1.0));
        ScalarField f(11);
        for (std::size_t i = 0; i < 11; ++i) f[i] = 2.0 * f.x(i);  // bin averages 0.1, 0.3, ...
        double expect = 0;
        for (int j = 0; j < 10; ++j) expect += 0.1 * std::abs(1.0 - (0.2 * j + 0.1));
        CHECK(l1_distance(h, f) == doctest::Approx(expect).epsilon(1e-14));
    }
    SUBCASE("grid mismatch") {
        CHECK_THROWS_AS(l1_distance(from_density(std::vector<double>(100, 1.0)), ScalarField(51, 1.0)), Error);
        Histogram bad = from_density(std::vector<double>(10, 1.0));
        bad.bins = 12;
        CHECK_THROWS_AS(l1_distance(bad, ScalarField(101, 1.0)), Error);
    }
}

TEST_CASE("histogram bookkeeping") {
    const auto r = simulate(0.3, 0.05, sim(20000, 1e-4, 4.0));
    const auto& h = r.histogram;
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::int64_t{0}) == 20000);
    CHECK(std::accumulate(h.normalized.begin(), h.normalized.end(), 0.0) / h.bins == doctest::Approx(1.0));
    CHECK(h.bin_center(0) == doctest::Approx(0.005));
    const Histogram m = mirrored(h);
    CHECK(m.counts.front() == h.counts.back());
    CHECK(mirrored(m).counts == h.counts);
}

TEST_CASE("determinism") {
    ThreadsGuard guard;
    const SimConfig c = sim(30000, 1e-4, 4.0, 50, 7);
    setenv("PNPK_THREADS", "1", 1);
    const auto a = simulate(0.3, 0.1, c);
    setenv("PNPK_THREADS", "3", 1);
    const auto b = simulate(0.3, 0.1, c);
    setenv("PNPK_THREADS", "8", 1);
    const auto d = simulate(0.3, 0.1, c);
    CHECK(a.histogram.counts == b.histogram.counts);
    CHECK(a.histogram.counts == d.histogram.counts);
    CHECK(a.stats.mean_jumps == b.stats.mean_jumps);
    SimConfig other = c;
    other.seed = 8;
    CHECK(simulate(0.3, 0.1, other).histogram.counts != a.histogram.counts);
}

TEST_CASE("Poisson clock and jump targets") {
    SUBCASE("mean jumps per unit time") {
        const auto s = jump_statistics(ModelParams{4, 1, 0}, 0.3, 0.1, sim(1000000, 1e-5, 0));
        CHECK(s.mean_jumps / 0.4 >= 0.99);
        CHECK(s.mean_jumps / 0.4 <= 1.01);
    }
    SUBCASE("midpoint start splits jumps evenly at short times") {
        const auto s = jump_statistics(ModelParams{25, 1, 0}, 0.5, 0.01, sim(200000, 1e-4, 0));
        CHECK(s.frac_to_left >= 0.48);
        CHECK(s.frac_to_left <= 0.52);
    }
    SUBCASE("no clock, no jumps") {
        const auto s = jump_statistics(ModelParams{0, 1, 0}, 0.5, 0.01, sim(1000, 1e-4, 0));
        CHECK(s.mean_jumps == 0.0);
        CHECK(s.frac_to_left == 0.0);
    }
}

TEST_CASE("per-step and event-driven schemes agree in law") {
    SimConfig c = sim(100000, 1e-4, 4.0, 20);
    const auto ref = reference(4, 0.3, 0.1);
    const double event = l1_distance(simulate(0.3, 0.1, c).histogram, ref);
    c.stepping = SimStepping::per_step;
    const double step = l1_distance(simulate(0.3, 0.1, c).histogram, ref);
    // 20 bins at N = 1e5: sampling noise is about 0.005
    CHECK(event < 0.015);
    CHECK(step < 0.015);
}

TEST_CASE("density against the spectral kernel at N = 1e6") {
    const auto ref = reference(4, 0.3, 0.1);
    const auto h = simulate_ensemble(ModelParams{4, 1, 0}, 0.3, 0.1, sim(1000000, 1e-5, 0));
    CHECK(l1_distance(h, ref) < 0.02);
}

TEST_CASE("error falls like N^-1/2") {
    const auto ref = reference(4, 0.3, 0.1);
    std::vector<double> l1;
    for (std::int64_t n : {10000, 100000, 1000000}) {
        l1.push_back(l1_distance(simulate_ensemble(ModelParams{4, 1, 0}, 0.3, 0.1, sim(n, 1e-4, 0)), ref));
    }
    for (int i = 0; i < 2; ++i) {
        const double ratio = l1[i] / l1[i + 1];
        CHECK(ratio > std::sqrt(10.0) * 0.5);
        CHECK(ratio < std::sqrt(10.0) * 1.5);
    }
}

TEST_CASE("halving dt barely moves the error") {
    const auto ref = reference(4, 0.3, 0.1);
    const double a = l1_distance(simulate_ensemble(ModelParams{4, 1, 0}, 0.3, 0.1, sim(1000000, 1e-4, 0)), ref);
    const double b = l1_distance(simulate_ensemble(ModelParams{4, 1, 0}, 0.3, 0.1, sim(1000000, 5e-5, 0)), ref);
    CHECK(std::abs(a - b) < 0.005);
}

TEST_CASE("without jumps the density is the Neumann kernel") {
    const KernelConfig cfg = make_kernel_config(ModelParams{1, 1, 0});
    const auto ref = neumann_kernel_field(0.3, 0.1, 1001, cfg);
    const auto h = simulate_ensemble(ModelParams{0, 1, 0}, 0.3, 0.1, sim(1000000, 1e-5, 0));
    CHECK(l1_distance(h, ref) < 0.02);
}

TEST_CASE("midpoint start is mirror symmetric") {
    // 50 bins: at 100 bins the mirror difference of two independent halves sits near 0.012
    const auto h = simulate_ensemble(ModelParams{4, 1, 0}, 0.5, 0.1, sim(1000000, 1e-5, 0, 50));
    const Histogram m = mirrored(h);
    double l1 = 0;
    for (int j = 0; j < h.bins; ++j) l1 += std::abs(h.normalized[j] - m.normalized[j]) / h.bins;
    CHECK(l1 < 0.01);
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(simulate(0.0, 0.1, sim(10, 1e-4, 1)), Error);
    CHECK_THROWS_AS(simulate(1.0, 0.1, sim(10, 1e-4, 1)), Error);
    CHECK_THROWS_AS(simulate(0.5, 1e-4, sim(10, 1e-4, 1)), Error);
    CHECK_THROWS_AS(simulate(0.5, 0.1, sim(0, 1e-4, 1)), Error);
    CHECK_THROWS_AS(simulate(0.5, 0.1, sim(10, 1e-2, 1)), Error);
    CHECK_THROWS_AS(simulate(0.5, 0.1, sim(10, 1e-4, 1, 5)), Error);
    CHECK_THROWS_AS(simulate(0.5, 0.1, sim(10, 1e-3, 200)), Error);
    CHECK_THROWS_AS(simulate_ensemble(ModelParams{-1, 1, 0}, 0.5, 0.1, sim(10, 1e-4, 0)), Error);
    try {
        simulate(1.5, 0.1, sim(10, 1e-4, 1));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidStart);
    }
}
