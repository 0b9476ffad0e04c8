#include "pnpk/calibration.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "pnpk/bvp_oracle.hpp"
#include "pnpk/error.hpp"
#include "pnpk/quadrature.hpp"

namespace pnpk {

FdKernelReference fd_reference(const EvolveConfig& config) {
    return [config](const ModelParams& p, double y, const std::vector<double>& times, Dynamics dyn) {
        return kernel_estimates(p, y, times, config, dyn);
    };
}

FamilyFactor snap(double fitted, const std::vector<std::pair<std::string, double>>& candidates, double rel_tol) {
    const std::pair<std::string, double>* best = nullptr;
    double best_dist = 0.0;
    for (const auto& c : candidates) {
        const double d = std::abs(fitted / c.second - 1.0);
        if (!best || d < best_dist) {
            best = &c;
            best_dist = d;
        }
    }
    if (!best || !(best_dist <= rel_tol)) {
        throw Error(ErrorCode::CalibrationAmbiguous, "fitted factor " + std::to_string(fitted) +
                                                         " is not within 5% of any candidate");
    }
    return {best->second, best->first, fitted};
}

KernelCalibration calibrate(const ModelParams& params, const Spectrum& sp, const KernelConfig& config,
                            const FdKernelReference& fd) {
    params.validate();
    const double y_cal = 0.3;
    const std::vector<double> times{0.1, 0.2, 0.5};
    const auto snaps = fd(params, y_cal, times, Dynamics::damped);
    const std::size_t n = snaps.front().grid_size();

    KernelConfig unit = config;
    unit.calibration = frozen_kernel_calibration(params);
    const KernelSlice slice(sp, unit, y_cal);

    Eigen::MatrixXd a(Eigen::Index(n * times.size()), 3);
    Eigen::VectorXd b(a.rows());
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = Eigen::Index(k * n + i);
            const auto bases = slice.bases(snaps[k].x(i), times[k]);
            for (int c = 0; c < 3; ++c) a(row, c) = bases[std::size_t(c)];
            b(row) = snaps[k][i];
        }
    }
    const Eigen::Vector3d f = a.colPivHouseholderQr().solve(b);

    KernelCalibration cal;
    cal.measured = true;
    cal.candidates = calibration_candidates(params);
    cal.fit_residual = std::sqrt((a * f - b).squaredNorm() / double(b.size()));
    cal.stationary = snap(f(0), cal.candidates);
    cal.transcendental = snap(f(1), cal.candidates);
    cal.cosine = snap(f(2), cal.candidates);

    // Neumann family: K_N - 1 against sum cos(k pi x) cos(k pi y) e^{-k^2 pi^2 t}
    const auto nsnaps = fd(params, y_cal, times, Dynamics::neumann);
    KernelConfig ncfg = config;
    ncfg.calibration.neumann.value = 1.0;
    double num = 0.0, den = 0.0;
    std::vector<double> resid;
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const double basis = neumann_kernel(nsnaps[k].x(i), y_cal, times[k], ncfg) - 1.0;
            num += basis * (nsnaps[k][i] - 1.0);
            den += basis * basis;
        }
    }
    const double fn = num / den;
    double ss = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const double basis = neumann_kernel(nsnaps[k].x(i), y_cal, times[k], ncfg) - 1.0;
            ss += std::pow(nsnaps[k][i] - 1.0 - fn * basis, 2);
        }
    }
    cal.neumann_fit_residual = std::sqrt(ss / double(n * times.size()));
    cal.neumann = snap(fn, cal.candidates);

    // checks with the snapped factors
    KernelConfig snapped = config;
    snapped.calibration = cal;
    for (double t : {config.min_time, 0.1, 1.0}) {
        for (int iy = 1; iy <= 9; ++iy) {
            const auto field = kernel_field(params, iy / 10.0, t, 2001, sp, snapped);
            cal.mass_defect = std::max(cal.mass_defect, std::abs(trapezoid(field.values) - 1.0));
        }
    }
    const auto early = fd(params, y_cal, {config.min_time}, Dynamics::damped).front();
    const auto series = kernel_field(params, y_cal, config.min_time, int(early.grid_size()), sp, snapped);
    double diff = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < early.grid_size(); ++i) {
        diff = std::max(diff, std::abs(series[i] - early[i]));
        peak = std::max(peak, std::abs(early[i]));
    }
    cal.delta_defect = diff / peak;
    return cal;
}

namespace {

std::vector<std::pair<std::string, double>> signed_simple_candidates() {
    return {{"1/2", 0.5}, {"-1/2", -0.5}, {"1", 1.0}, {"-1", -1.0},
            {"2", 2.0},   {"-2", -2.0},   {"4", 4.0}, {"-4", -4.0}};
}

// least squares for real coefficients of complex basis columns
Eigen::VectorXd complex_lsq(const std::vector<std::vector<cplx>>& cols, const std::vector<cplx>& rhs) {
    const auto m = Eigen::Index(rhs.size());
    Eigen::MatrixXd a(2 * m, Eigen::Index(cols.size()));
    Eigen::VectorXd b(2 * m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            a(2 * i, Eigen::Index(c)) = cols[c][std::size_t(i)].real();
            a(2 * i + 1, Eigen::Index(c)) = cols[c][std::size_t(i)].imag();
        }
        b(2 * i) = rhs[std::size_t(i)].real();
        b(2 * i + 1) = rhs[std::size_t(i)].imag();
    }
    return a.colPivHouseholderQr().solve(b);
}

}  // namespace

ResolventMeasurement measure_resolvent_calibration(double kappa2, int grid_size) {
    const ModelParams p{kappa2, 1.0, 0.0};
    const std::vector<cplx> probes{cplx(-2.5, 0.0), cplx(1.5, 2.0), cplx(-6.0, 1.0)};
    const std::vector<double> sources{0.2, 0.35};
    const auto n = std::size_t(grid_size);
    const auto w = trapezoid_weights(n);
    ResolventMeasurement out{};

    std::vector<cplx> rn_rhs, rn_b0, rn_b1;
    std::vector<cplx> mom_rhs, mom_half, mom_a0, mom_a1;
    std::vector<cplx> corr_rhs, corr_even, corr_odd;
    for (cplx l : probes) {
        for (double y : sources) {
            const auto rn = resolvent_bvp_oracle(l, y, p, grid_size, BoundaryKind::neumann);
            const auto rr = resolvent_bvp_oracle(l, y, p, grid_size, BoundaryKind::nonlocal);
            const cplx a0 = a_series(l, y, 1e-14, AStart::zero);
            const cplx a1 = a_series(l, y, 1e-14, AStart::one);
            cplx m1 = 0.0, m2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double x = rn.x(j);
                m1 += w[j] * (1.0 - x) * rn.values[j];
                m2 += w[j] * x * rn.values[j];
                if (j % 32 != 0) continue;
                rn_rhs.push_back(rn.values[j]);
                rn_b0.push_back(1.0 / l);
                rn_b1.push_back(neumann_resolvent(l, x, y, 1e-13, 0.0, 1.0));
                corr_rhs.push_back(rr.values[j] - neumann_resolvent(l, x, y));
                corr_even.push_back(printed_even_term(l, x, kappa2));
                corr_odd.push_back(printed_odd_term(l, x, a0, kappa2));
            }
            // m1 = s (1/(2l) - c A), m2 = s (1/(2l) + c A), unknowns s and s c
            mom_rhs.push_back(m1);
            mom_half.push_back(0.5 / l);
            mom_a0.push_back(-a0);
            mom_a1.push_back(-a1);
            mom_rhs.push_back(m2);
            mom_half.push_back(0.5 / l);
            mom_a0.push_back(a0);
            mom_a1.push_back(a1);
        }
    }
    const auto rn_fit = complex_lsq({rn_b0, rn_b1}, rn_rhs);
    out.neumann_constant_fit = rn_fit(0);
    out.neumann_cosine_fit = rn_fit(1);

    auto moment_residual = [&](const std::vector<cplx>& acol, Eigen::VectorXd& fit) {
        fit = complex_lsq({mom_half, acol}, mom_rhs);
        double worst = 0.0;
        for (std::size_t i = 0; i < mom_rhs.size(); ++i) {
            worst = std::max(worst, std::abs(fit(0) * mom_half[i] + fit(1) * acol[i] - mom_rhs[i]));
        }
        return worst;
    };
    Eigen::VectorXd fit0, fit1;
    out.start0_moment_residual = moment_residual(mom_a0, fit0);
    out.start1_moment_residual = moment_residual(mom_a1, fit1);
    const bool zero_start = out.start0_moment_residual <= out.start1_moment_residual;
    const Eigen::VectorXd& mf = zero_start ? fit0 : fit1;
    out.moment_sign_fit = mf(0);
    out.moment_a_scale_fit = mf(1) / mf(0);

    const auto corr_fit = complex_lsq({corr_even, corr_odd}, corr_rhs);
    out.even_factor_fit = corr_fit(0);
    out.odd_factor_fit = corr_fit(1);

    const auto cands = signed_simple_candidates();
    out.snapped.neumann_constant = snap(out.neumann_constant_fit, cands).value;
    out.snapped.neumann_cosine = snap(out.neumann_cosine_fit, cands).value;
    out.snapped.moment_sign = snap(out.moment_sign_fit, cands).value;
    out.snapped.moment_a_scale = snap(out.moment_a_scale_fit, cands).value;
    out.snapped.a_start = zero_start ? AStart::zero : AStart::one;
    out.snapped.even_factor = snap(out.even_factor_fit, cands).value;
    out.snapped.odd_factor = snap(out.odd_factor_fit, cands).value;
    return out;
}

}  // namespace pnpk
