#include "pnpk/pde_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pnpk/bordered.hpp"
#include "pnpk/error.hpp"
#include "pnpk/quadrature.hpp"

namespace pnpk {

namespace {

struct Operator {
    BorderedSystem<double> a;
    std::vector<double> source;  // constant forcing from the voltage terms
};

Operator build_operator(const ModelParams& params, std::size_t n, Dynamics dyn) {
    const double h = 1.0 / double(n - 1);
    const double ih2 = 1.0 / (h * h);
    const double damping = dyn == Dynamics::damped ? params.kappa2 : 0.0;
    Operator op{BorderedSystem<double>(n), std::vector<double>(n, 0.0)};
    auto& a = op.a;
    for (std::size_t i = 0; i < n; ++i) {
        a.lower[i] = ih2;
        a.upper[i] = ih2;
        a.diag[i] = -2.0 * ih2 - damping;
    }
    a.lower[0] = 0.0;
    a.upper[0] = 2.0 * ih2;
    a.lower[n - 1] = 2.0 * ih2;
    a.upper[n - 1] = 0.0;
    if (dyn != Dynamics::neumann) {
        const auto w = trapezoid_weights(n);
        const double k2 = params.kappa2;
        for (std::size_t j = 0; j < n; ++j) {
            const double xj = double(j) * h;
            a.first_extra[j] = 2.0 / h * k2 * w[j] * (1.0 - xj);
            a.last_extra[j] = 2.0 / h * k2 * w[j] * xj;
        }
    }
    if (dyn == Dynamics::damped && params.voltage != 0.0) {
        const double g = 2.0 / h * params.epsilon * params.kappa2 * params.voltage;
        op.source[0] = g;
        op.source[n - 1] = -g;
    }
    return op;
}

// I - theta dt A
BorderedSystem<double> implicit_matrix(const BorderedSystem<double>& a, double theta_dt) {
    const std::size_t n = a.size();
    BorderedSystem<double> m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.lower[i] = -theta_dt * a.lower[i];
        m.upper[i] = -theta_dt * a.upper[i];
        m.diag[i] = 1.0 - theta_dt * a.diag[i];
        m.first_extra[i] = -theta_dt * a.first_extra[i];
        m.last_extra[i] = -theta_dt * a.last_extra[i];
    }
    return m;
}

class Stepper {
public:
    Stepper(const Operator& op, double dt, double theta) : op_(op), dt_(dt), theta_(theta) {
        try {
            solver_.emplace_back(implicit_matrix(op.a, theta * dt));
        } catch (const Error& e) {
            throw Error(ErrorCode::SolverSingular, std::string("step matrix: ") + e.what());
        }
    }

    void step(std::vector<double>& u) const {
        std::vector<double> rhs = u;
        if (theta_ < 1.0) {
            const auto au = op_.a.apply(u);
            for (std::size_t i = 0; i < u.size(); ++i) rhs[i] += (1.0 - theta_) * dt_ * au[i];
        }
        for (std::size_t i = 0; i < u.size(); ++i) rhs[i] += dt_ * op_.source[i];
        u = solver_.front().solve(rhs);
    }

private:
    const Operator& op_;
    double dt_, theta_;
    std::vector<BorderedSolver<double>> solver_;
};

double mass_of(const std::vector<double>& u) { return trapezoid(u); }

}  // namespace

EvolutionResult evolve(const ModelParams& params, const ScalarField& init, const EvolveConfig& config,
                       Dynamics dynamics, const std::vector<double>& snapshot_times) {
    if (dynamics != Dynamics::neumann) params.validate();
    if (config.nx < 64) throw Error(ErrorCode::InvalidArgument, "nx must be >= 64");
    if (!(config.dt > 0) || !(config.t_end > 0) || config.dt > config.t_end * (1 + 1e-12)) {
        throw Error(ErrorCode::InvalidArgument, "need 0 < dt <= t_end");
    }
    if (int(init.grid_size()) != config.nx) {
        throw Error(ErrorCode::InvalidArgument, "init has " + std::to_string(init.grid_size()) +
                                                    " samples, config.nx = " + std::to_string(config.nx));
    }
    init.validate();
    const auto n = std::size_t(config.nx);
    const long steps = std::max(1L, long(std::ceil(config.t_end / config.dt - 1e-9)));
    const double dt = config.t_end / double(steps);

    std::vector<long> snap_steps;
    for (double ts : snapshot_times) {
        const long k = long(std::llround(ts / dt));
        if (k < 0 || k > steps || std::abs(double(k) * dt - ts) > 1e-9 * std::max(1.0, ts)) {
            throw Error(ErrorCode::InvalidArgument, "snapshot time " + std::to_string(ts) + " is not on the step grid");
        }
        snap_steps.push_back(k);
    }

    const Operator op = build_operator(params, n, dynamics);
    const bool cn = config.scheme == Scheme::crank_nicolson;
    const Stepper main(op, dt, cn ? 0.5 : 1.0);
    std::vector<Stepper> startup;
    if (cn && config.startup_steps > 0) startup.emplace_back(op, dt / 2, 1.0);

    EvolutionResult res;
    res.snapshots.resize(snap_steps.size());
    std::vector<double> u = init.values;
    auto record = [&](long k) {
        const double t = double(k) * dt;
        res.mass_trace.emplace_back(t, mass_of(u));
        res.min_trace.emplace_back(t, *std::min_element(u.begin(), u.end()));
        for (std::size_t s = 0; s < snap_steps.size(); ++s) {
            if (snap_steps[s] == k) res.snapshots[s] = ScalarField(u);
        }
    };
    record(0);
    for (long k = 1; k <= steps; ++k) {
        if (!startup.empty() && k <= config.startup_steps) {
            startup.front().step(u);
            startup.front().step(u);
        } else {
            main.step(u);
        }
        for (double v : u) {
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::NonFiniteState, "non-finite value at step " + std::to_string(k));
            }
        }
        record(k);
    }
    res.final = ScalarField(std::move(u));
    return res;
}

EvolutionResult neumann_evolve(const ScalarField& init, const EvolveConfig& config) {
    return evolve(ModelParams{}, init, config, Dynamics::neumann);
}

std::vector<ScalarField> kernel_estimates(const ModelParams& params, double y, const std::vector<double>& times,
                                          const EvolveConfig& config, Dynamics dynamics, DeltaPlacement placement) {
    if (!(y > 0.0 && y < 1.0)) throw Error(ErrorCode::InvalidArgument, "y must lie in (0,1)");
    if (times.empty()) throw Error(ErrorCode::InvalidArgument, "no output times");
    const double t_end = *std::max_element(times.begin(), times.end());
    for (double t : times) {
        if (!(t >= 10 * config.dt * (1 - 1e-12))) throw Error(ErrorCode::TimeTooSmall, "kernel_estimate needs t >= 10 dt");
    }
    EvolveConfig cfg = config;
    cfg.t_end = t_end;
    ScalarField init(discrete_delta(std::size_t(config.nx), y, placement));
    return evolve(params, init, cfg, dynamics, times).snapshots;
}

ScalarField kernel_estimate(const ModelParams& params, double y, double t, const EvolveConfig& config,
                            DeltaPlacement placement) {
    return kernel_estimates(params, y, {t}, config, Dynamics::damped, placement).front();
}

namespace {

std::vector<double> simpson_weights(std::size_t n) {
    // composite Simpson, with a 3/8 panel at the right end when n - 1 is odd
    const double h = 1.0 / double(n - 1);
    std::vector<double> w(n, 0.0);
    const std::size_t intervals = n - 1;
    const std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
    for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
        w[i] += h / 3;
        w[i + 1] += 4 * h / 3;
        w[i + 2] += h / 3;
    }
    if (simpson_end != intervals) {
        const std::size_t i = simpson_end;
        w[i] += 3 * h / 8;
        w[i + 1] += 9 * h / 8;
        w[i + 2] += 9 * h / 8;
        w[i + 3] += 3 * h / 8;
    }
    return w;
}

}  // namespace

BcResidual bc_reduction_check(const ModelParams& params, const ScalarField& u, FluxConvention convention) {
    params.validate();
    const std::size_t n = u.grid_size();
    if (n < 8) throw Error(ErrorCode::InvalidArgument, "bc_reduction_check needs at least 8 samples");
    const double h = u.spacing();
    const auto w = simpson_weights(n);
    double m0 = 0.0, m1 = 0.0;  // int u, int (1-s) u
    for (std::size_t j = 0; j < n; ++j) {
        m0 += w[j] * u[j];
        m1 += w[j] * (1.0 - u.x(j)) * u[j];
    }
    const double eps = params.epsilon;
    const double e0 = params.voltage + m1 / eps;
    const double e1 = e0 - m0 / eps;
    static constexpr double c[] = {-49.0 / 20, 6.0, -15.0 / 2, 20.0 / 3, -15.0 / 4, 6.0 / 5, -1.0 / 6};
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t k = 0; k < 7; ++k) {
        d0 += c[k] * u[k];
        d1 -= c[k] * u[n - 1 - k];
    }
    d0 /= h;
    d1 /= h;
    const double flux = convention == FluxConvention::lemma ? params.kappa2 * eps : params.kappa2 / eps;
    return {d0 + flux * e0, d1 + flux * e1};
}

}  // namespace pnpk
