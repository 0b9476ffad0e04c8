#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "pnpk/error.hpp"
#include "pnpk/heat_kernel.hpp"
#include "pnpk/jump_diffusion.hpp"
#include "pnpk/pde_oracle.hpp"
#include "pnpk/quadrature.hpp"
#include "pnpk/spectrum.hpp"
#include "pnpk/table.hpp"
#include "pnpk/validation.hpp"

namespace pnpk {

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument:
        case ErrorCode::InvalidStart:
        case ErrorCode::GridMismatch:
        case ErrorCode::IndexOutOfRange:
        case ErrorCode::WrongHalfPlane: return 2;
        default: return 3;
    }
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open " + path + " for writing");
    f << text;
}

void emit(const Table& t, const std::string& format, const std::string& path, std::ostream& out) {
    write_text(format == "json" ? t.to_json().dump(2) + "\n" : t.to_csv(), path, out);
}

struct Common {
    std::string format = "csv";
    std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", c.out, "output path (default stdout)");
}

int cmd_eig(double k2, int count, const Common& c, std::ostream& out) {
    const ModelParams p{k2, 1.0, 0.0};
    p.validate();
    if (count < 1) throw Error(ErrorCode::InvalidArgument, "--count must be >= 1");
    const Spectrum sp = find_eigenvalues(p, count);
    Table t;
    t.header = {"family", "index", "eigenvalue", "residual", "bracket_lo", "bracket_hi"};
    t.rows.push_back({std::string("ground"), 0.0, sp.ground, 0.0, sp.ground, sp.ground});
    for (const auto& m : sp.cosine_family) {
        t.rows.push_back({std::string("cosine"), double(m.k), m.mu, 0.0, m.mu, m.mu});
    }
    for (const auto& r : sp.transcendental_family) {
        t.rows.push_back({std::string("transcendental"), double(r.m), r.lambda, r.residual, r.bracket_lo, r.bracket_hi});
    }
    t.meta = {{"command", "eig"}, {"kappa2", k2}, {"degenerate", sp.degenerate_flag}};
    emit(t, c.format, c.out, out);
    return 0;
}

struct KernelArgs {
    double k2 = 0, y = 0, t = 0;
    int grid = 501;
    std::optional<int> modes;
    std::string method = "series";
    double dt = 1e-4;
    bool fallback = false;
};

int cmd_kernel(const KernelArgs& a, const Common& c, std::ostream& out) {
    const ModelParams p{a.k2, 1.0, 0.0};
    p.validate();
    if (a.grid < 2) throw Error(ErrorCode::InvalidArgument, "--grid must be >= 2");
    if (!(a.y >= 0.0 && a.y <= 1.0)) throw Error(ErrorCode::InvalidArgument, "--y must lie in [0, 1]");
    KernelConfig cfg = make_kernel_config(p);
    if (a.modes) {
        if (*a.modes < 1) throw Error(ErrorCode::InvalidArgument, "--modes must be >= 1");
        cfg.mode_count = *a.modes;
    }
    std::string method = a.method;
    if (a.fallback && method != "fd" && a.t < cfg.min_time) method = "fd";

    ScalarField field;
    nlohmann::json meta{{"command", "kernel"}, {"kappa2", a.k2}, {"y", a.y}, {"t", a.t}, {"method", method}};
    if (method == "fd") {
        EvolveConfig ec;
        ec.nx = a.grid;
        ec.dt = a.dt;
        field = kernel_estimate(p, a.y, a.t, ec);
        meta["modes"] = nullptr;
        meta["nx"] = a.grid;
        meta["dt"] = a.dt;
    } else {
        const Spectrum sp = find_eigenvalues(p, cfg.mode_count);
        if (method == "series") {
            field = kernel_field(p, a.y, a.t, a.grid, sp, cfg);
        } else {
            const auto bc = BromwichConfig::for_params(p);
            field = bromwich_kernel_field(p, a.y, a.t, a.grid, sp, bc);
            meta["node_count"] = bc.node_count;
            meta["half_height"] = bc.half_height;
        }
        meta["modes"] = cfg.mode_count;
    }
    meta["calibration_hash"] = cfg.calibration.hash();
    meta["mass"] = trapezoid(field.values);

    Table t;
    t.header = {"x", "K"};
    for (std::size_t i = 0; i < field.grid_size(); ++i) t.rows.push_back({field.x(i), field[i]});
    t.meta = meta;
    emit(t, c.format, c.out, out);
    return 0;
}

ScalarField read_init_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot read init file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    Table t;
    try {
        t = Table::from_csv(ss.str());
    } catch (const Error& e) {
        throw InputError(std::string("malformed init file: ") + e.what());
    }
    if (t.header != std::vector<std::string>{"x", "u"}) throw InputError("init file header must be x,u");
    const std::size_t n = t.rows.size();
    if (n < 2) throw InputError("init file needs at least 2 rows");
    ScalarField u{n};
    for (std::size_t i = 0; i < n; ++i) {
        const auto* x = std::get_if<double>(&t.rows[i][0]);
        const auto* v = std::get_if<double>(&t.rows[i][1]);
        if (!x || !v || !std::isfinite(*v)) throw InputError("non-numeric value in init file row " + std::to_string(i + 1));
        if (std::abs(*x - u.x(i)) > 1e-9) throw InputError("init file grid is not uniform on [0,1]");
        u[i] = *v;
    }
    return u;
}

struct EvolveArgs {
    double k2 = 0, voltage = 0, epsilon = 1;
    std::string init = "uniform";
    double t_end = 0, dt = 1e-4;
    int nx = 513;
    std::string scheme = "cn";
};

int cmd_evolve(const EvolveArgs& a, const Common& c, std::ostream& out) {
    const ModelParams p{a.k2, a.epsilon, a.voltage};
    p.validate();
    EvolveConfig ec;
    ec.nx = a.nx;
    ec.dt = a.dt;
    ec.t_end = a.t_end;
    ec.scheme = a.scheme == "ie" ? Scheme::implicit_euler : Scheme::crank_nicolson;
    if (!(a.t_end > 0)) throw Error(ErrorCode::InvalidArgument, "--t-end must be > 0");

    ScalarField final_field;
    nlohmann::json meta{{"command", "evolve"}, {"kappa2", a.k2}, {"epsilon", a.epsilon}, {"voltage", a.voltage},
                        {"init", a.init},      {"t_end", a.t_end}, {"dt", a.dt}};
    if (a.init.rfind("delta:", 0) == 0) {
        double y = 0.0;
        try {
            std::size_t used = 0;
            y = std::stod(a.init.substr(6), &used);
            if (used != a.init.size() - 6) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw InputError("--init delta:<y> needs a number");
        }
        // the same path as `kernel --method fd`
        if (a.voltage != 0.0 || a.epsilon != 1.0) {
            throw InputError("delta init is the kernel problem: use the default voltage and epsilon");
        }
        const auto r = kernel_estimate(p, y, a.t_end, ec);
        final_field = r;
        meta["mass_drift"] = std::abs(trapezoid(r.values) - 1.0);
        double mn = r[0];
        for (double v : r.values) mn = std::min(mn, v);
        meta["min_value"] = mn;
    } else {
        ScalarField init;
        if (a.init == "uniform") {
            init = ScalarField(std::size_t(a.nx), 1.0);
        } else if (a.init.rfind("file:", 0) == 0) {
            init = read_init_file(a.init.substr(5));
            ec.nx = int(init.grid_size());
        } else {
            throw InputError("--init must be uniform, delta:<y> or file:<path>");
        }
        const auto r = evolve(p, init, ec);
        final_field = r.final;
        const double m0 = r.mass_trace.front().second;
        double drift = 0.0, mn = r.min_trace.front().second;
        for (const auto& [t, m] : r.mass_trace) drift = std::max(drift, std::abs(m - m0));
        for (const auto& [t, m] : r.min_trace) mn = std::min(mn, m);
        meta["mass_drift"] = m0 != 0.0 ? drift / std::abs(m0) : drift;
        meta["min_value"] = mn;
    }
    meta["nx"] = final_field.grid_size();

    Table t;
    t.header = {"x", "u"};
    for (std::size_t i = 0; i < final_field.grid_size(); ++i) t.rows.push_back({final_field.x(i), final_field[i]});
    t.meta = meta;
    emit(t, c.format, c.out, out);
    return 0;
}

struct SimulateArgs {
    double k2 = 0, y0 = 0, t = 0;
    std::int64_t particles = 100000;
    double dt = 1e-4;
    std::uint64_t seed = 42;
    int bins = 100;
    std::string stepping = "event";
};

int cmd_simulate(const SimulateArgs& a, const Common& c, std::ostream& out) {
    if (!(a.k2 >= 0) || !std::isfinite(a.k2)) throw Error(ErrorCode::InvalidArgument, "--kappa2 must be >= 0");
    SimConfig sc;
    sc.particle_count = a.particles;
    sc.dt = a.dt;
    sc.seed = a.seed;
    sc.bins = a.bins;
    sc.jump_rate = a.k2;
    sc.stepping = a.stepping == "step" ? SimStepping::per_step : SimStepping::event_driven;
    const auto r = simulate(a.y0, a.t, sc);

    nlohmann::json meta{{"command", "simulate"}, {"kappa2", a.k2}, {"y0", a.y0},       {"t", a.t},
                        {"particles", a.particles}, {"dt", a.dt}, {"seed", a.seed},    {"bins", a.bins},
                        {"mean_jumps", r.stats.mean_jumps}, {"frac_to_left", r.stats.frac_to_left}};
    const int ref_grid = std::max(1001, a.bins + 1);
    // the Neumann factors do not depend on kappa2
    const KernelConfig ncfg = make_kernel_config(ModelParams{1.0, 1.0, 0.0});
    if (a.t >= ncfg.min_time) {
        meta["l1_neumann"] = l1_distance(r.histogram, neumann_kernel_field(a.y0, a.t, ref_grid, ncfg));
        if (a.k2 > 0) {
            const ModelParams p{a.k2, 1.0, 0.0};
            const auto cfg = make_kernel_config(p);
            const auto sp = find_eigenvalues(p, cfg.mode_count);
            meta["l1_series"] = l1_distance(r.histogram, kernel_field(p, a.y0, a.t, ref_grid, sp, cfg));
        } else {
            meta["l1_series"] = meta["l1_neumann"];
        }
    } else {
        meta["l1_series"] = nullptr;
        meta["l1_neumann"] = nullptr;
    }

    Table t;
    t.header = {"bin_center", "density"};
    for (int i = 0; i < r.histogram.bins; ++i) {
        t.rows.push_back({r.histogram.bin_center(i), r.histogram.normalized[std::size_t(i)]});
    }
    t.meta = meta;
    emit(t, c.format, c.out, out);
    return 0;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InputError("--kappa2 expects a comma-separated list of numbers, got " + s);
        }
    }
    if (out.empty()) throw InputError("--kappa2 list is empty");
    return out;
}

int cmd_validate(const std::string& list, const std::string& level, const std::string& path, std::ostream& out) {
    const auto k2s = parse_list(list);
    for (double k2 : k2s) ModelParams{k2, 1.0, 0.0}.validate();
    const auto rep = run_validation(k2s, level == "full" ? Level::full : Level::quick, &out);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open " + path + " for writing");
    f << rep.to_json().dump(2) << "\n";

    std::size_t width = 0;
    for (const auto& c : rep.checks) width = std::max(width, c.name.size());
    int failed = 0;
    for (const auto& c : rep.checks) {
        out << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(int(width) + 2) << c.name
            << std::setprecision(3) << std::scientific << c.achieved << " (tol " << c.tolerance << ")\n";
        out.unsetf(std::ios::floatfield);
        failed += !c.passed;
    }
    out << rep.checks.size() - std::size_t(failed) << "/" << rep.checks.size() << " checks passed; ledger "
        << rep.discrepancy_ledger.size() << " entries; report " << path << "\n";
    return failed == 0 ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral heat kernel of the linearized PNP channel problem, with its oracles"};
    app.require_subcommand(1);

    Common eig_c, ker_c, evo_c, sim_c;
    double eig_k2 = 0;
    int eig_count = 10;
    auto* eig = app.add_subcommand("eig", "eigenvalue families");
    eig->add_option("--kappa2", eig_k2)->required();
    eig->add_option("--count", eig_count, "members per family");
    add_common(eig, eig_c);

    KernelArgs ka;
    auto* ker = app.add_subcommand("kernel", "heat kernel K(x, y, t) on a grid");
    ker->add_option("--kappa2", ka.k2)->required();
    ker->add_option("--y", ka.y)->required();
    ker->add_option("--t", ka.t)->required();
    ker->add_option("--grid", ka.grid);
    ker->add_option("--modes", ka.modes, "terms per series (default: from min_time)");
    ker->add_option("--method", ka.method)->check(CLI::IsMember({"series", "bromwich", "fd"}));
    ker->add_option("--dt", ka.dt, "time step of the fd method");
    ker->add_flag("--fallback", ka.fallback, "use fd when t is below the series floor");
    add_common(ker, ker_c);

    EvolveArgs ea;
    auto* evo = app.add_subcommand("evolve", "finite-difference evolution");
    evo->add_option("--kappa2", ea.k2)->required();
    evo->add_option("--voltage", ea.voltage);
    evo->add_option("--epsilon", ea.epsilon);
    evo->add_option("--init", ea.init, "uniform | delta:<y> | file:<path> (CSV x,u; its grid sets nx)");
    evo->add_option("--t-end", ea.t_end)->required();
    evo->add_option("--dt", ea.dt);
    evo->add_option("--nx", ea.nx);
    evo->add_option("--scheme", ea.scheme)->check(CLI::IsMember({"cn", "ie"}));
    add_common(evo, evo_c);

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo jump diffusion");
    sim->add_option("--kappa2", sa.k2)->required();
    sim->add_option("--y0", sa.y0)->required();
    sim->add_option("--t", sa.t)->required();
    sim->add_option("--particles", sa.particles);
    sim->add_option("--dt", sa.dt);
    sim->add_option("--seed", sa.seed);
    sim->add_option("--bins", sa.bins);
    sim->add_option("--stepping", sa.stepping)->check(CLI::IsMember({"event", "step"}));
    add_common(sim, sim_c);

    std::string val_list = "1,4,12,25", val_level = "quick", val_out = "validation_report.json";
    auto* val = app.add_subcommand("validate", "run every cross-check and write the report");
    val->add_option("--kappa2", val_list, "comma-separated list");
    val->add_option("--level", val_level)->check(CLI::IsMember({"quick", "full"}));
    val->add_option("--out", val_out, "report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (*eig) return cmd_eig(eig_k2, eig_count, eig_c, out);
        if (*ker) return cmd_kernel(ka, ker_c, out);
        if (*evo) return cmd_evolve(ea, evo_c, out);
        if (*sim) return cmd_simulate(sa, sim_c, out);
        if (*val) return cmd_validate(val_list, val_level, val_out, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e.code());
    }
    return 2;
}

}  // namespace pnpk
