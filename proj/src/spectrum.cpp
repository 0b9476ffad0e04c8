#include "pnpk/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pnpk/entire.hpp"
#include "pnpk/error.hpp"
#include "pnpk/series.hpp"

namespace pnpk {

namespace {

constexpr double pi = std::numbers::pi;

// G in z coordinates, (z^2 + k2) cos(z/2) - 2 k2 sin(z/2)/z, and its z-derivative
double gz(double z, double k2) {
    return (z * z + k2) * std::cos(z / 2) - 2 * k2 * std::sin(z / 2) / z;
}

double gz_prime(double z, double k2) {
    const double c = std::cos(z / 2), s = std::sin(z / 2);
    return 2 * z * c - 0.5 * (z * z + k2) * s - 2 * k2 * (c / (2 * z) - s / (z * z));
}

std::string interval_text(double lo, double hi) {
    return "(" + std::to_string(lo) + ", " + std::to_string(hi) + ")";
}

TranscendentalRoot low_root(const ModelParams& p) {
    const double k2 = p.kappa2;
    TranscendentalRoot r{1, 0.0, 0.0, -k2, pi * pi};
    if (std::abs(k2 - 12.0) < kDegenerateWindow) {
        r.residual = secular_residual(0.0, p);
        return r;
    }
    auto g = [&](double l) { return g_tilde(l, p).real(); };
    double lo = -k2, hi = pi * pi;
    double glo = g(lo), ghi = g(hi);
    if (!(glo > 0 && ghi < 0)) {
        throw Error(ErrorCode::BracketFailure, "no sign change of G~ on " + interval_text(lo, hi));
    }
    while (hi - lo > 1e-13 * std::max(1.0, std::abs(lo + hi) / 2)) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) {
            lo = hi = mid;
            break;
        }
        (gm > 0 ? lo : hi) = mid;
    }
    double l = 0.5 * (lo + hi);
    for (int it = 0; it < 2; ++it) {
        const double step = g(l) / g_tilde_prime(l, p).real();
        if (std::isfinite(step) && l - step > r.bracket_lo && l - step < r.bracket_hi) l -= step;
    }
    r.lambda = l;
    r.residual = secular_residual(l, p);
    return r;
}

// member m >= 2: the only root with z in ((2m-3) pi, (2m-1) pi)
TranscendentalRoot bracketed_root(const ModelParams& p, int m) {
    const double k2 = p.kappa2;
    const int j = m - 1;
    double lo = (2 * j - 1) * pi, hi = (2 * j + 1) * pi;
    TranscendentalRoot r{m, 0.0, 0.0, lo * lo, hi * hi};
    // cos(z/2) vanishes at both ends, so the signs there come from -2 k2 sin(z/2)/z
    const double slo = (j % 2 == 1) ? -1.0 : 1.0;  // sign of G at lo
    const double shi = -slo;
    if (!(k2 > 0)) throw Error(ErrorCode::BracketFailure, "no sign change on " + interval_text(lo, hi));
    const double z_lo = lo, z_hi = hi;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = gz(mid, k2);
        if (!std::isfinite(gm)) {
            throw Error(ErrorCode::BracketFailure, "non-finite G on " + interval_text(z_lo, z_hi));
        }
        if (gm == 0.0) {
            lo = hi = mid;
            break;
        }
        ((gm > 0) == (slo > 0) ? lo : hi) = mid;
    }
    (void)shi;
    double z = 0.5 * (lo + hi);
    for (int it = 0; it < 2; ++it) {
        const double step = gz(z, k2) / gz_prime(z, k2);
        if (std::isfinite(step) && z - step > z_lo && z - step < z_hi) z -= step;
    }
    r.lambda = z * z;
    r.residual = secular_residual(r.lambda, p);
    return r;
}

void check_index(const Spectrum& sp, Family family, int index) {
    bool ok = false;
    switch (family) {
        case Family::ground: ok = index == 0; break;
        case Family::cosine: ok = index >= 1 && index <= int(sp.cosine_family.size()); break;
        case Family::transcendental: ok = index >= 1 && index <= int(sp.transcendental_family.size()); break;
    }
    if (!ok) {
        throw Error(ErrorCode::IndexOutOfRange,
                    std::string(to_string(family)) + " index " + std::to_string(index));
    }
}

}  // namespace

const char* to_string(Family f) {
    switch (f) {
        case Family::ground: return "ground";
        case Family::cosine: return "cosine";
        case Family::transcendental: return "transcendental";
    }
    return "?";
}

cplx det(cplx lambda, const ModelParams& params) {
    if (lambda == cplx(0.0)) throw Error(ErrorCode::PoleAtZero, "Det has kappa2/lambda terms");
    const double k2 = params.kappa2;
    const EntireTrig t = entire_trig(lambda);
    const cplx z = std::sqrt(lambda);
    // 2 k2 z^-1 (1 - cos z)(1 + k2/lambda) - sin z (k2/z + z)^2
    return 2.0 * k2 * z * t.hc * (1.0 + k2 / lambda) - z * t.s * (lambda + k2) * (lambda + k2) / lambda;
}

cplx det_factored(cplx lambda, const ModelParams& params) {
    const double k2 = params.kappa2;
    const cplx z = std::sqrt(lambda);
    return std::sin(z) * (1.0 + k2 / lambda) * (2.0 * k2 / z * std::tan(z / 2.0) - k2 - lambda);
}

cplx det_regularized(cplx lambda, const ModelParams& params) {
    const double k2 = params.kappa2;
    // 2 hc - s = -2 lambda sh rh, so the cancellation at small lambda is done analytically
    const TrigBundle b = trig_bundle(lambda);
    return (lambda + k2) * lambda * (-2.0 * k2 * b.sh * b.rh - b.s);
}

cplx g_tilde(cplx lambda, const ModelParams& params) {
    const TrigBundle b = trig_bundle(lambda);
    return b.ch + params.kappa2 * b.rh;
}

cplx g_tilde_prime(cplx lambda, const ModelParams& params) {
    const TrigBundle b = trig_bundle(lambda);
    return -b.sh / 4.0 + params.kappa2 * b.rh_prime;
}

double secular_residual(double lambda, const ModelParams& params) {
    const double k2 = params.kappa2;
    if (std::abs(lambda + k2) < 1e-300) return std::abs(g_tilde(lambda, params));
    // G = lambda G~, and G / (lambda + k2) = cos(z/2) - 2 k2 sh / (lambda + k2)
    const TrigBundle b = trig_bundle(lambda);
    return std::abs(b.ch - 2.0 * k2 * b.sh / (lambda + k2));
}

double secular_residual_raw(double lambda, const ModelParams& params) {
    const double z = std::sqrt(lambda);
    return std::abs(2.0 * std::tan(z / 2) - z * (lambda + params.kappa2) / params.kappa2);
}

cplx det_prime(double lambda, const ModelParams& params) {
    if (secular_residual(lambda, params) > 1e-8) {
        throw Error(ErrorCode::NotASimpleRoot, "lambda = " + std::to_string(lambda) + " is not a root");
    }
    const TrigBundle b = trig_bundle(lambda);
    const cplx d = -2.0 * std::sqrt(cplx(lambda)) * b.sh * (lambda + params.kappa2) *
                   g_tilde_prime(lambda, params);
    if (std::abs(d) < 1e-12) {
        throw Error(ErrorCode::NotASimpleRoot, "degenerate root at lambda = " + std::to_string(lambda));
    }
    return d;
}

cplx det_prime_richardson(double lambda, const ModelParams& params, double h) {
    h *= std::max(1.0, std::sqrt(std::abs(lambda)));
    auto central = [&](double hh) {
        return (det(cplx(lambda + hh), params) - det(cplx(lambda - hh), params)) / (2 * hh);
    };
    cplx d0 = central(h), d1 = central(h / 2), d2 = central(h / 4);
    cplx r1 = (4.0 * d1 - d0) / 3.0, r2 = (4.0 * d2 - d1) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

Spectrum find_eigenvalues(const ModelParams& params, int count_per_family) {
    params.validate();
    if (count_per_family < 1) throw Error(ErrorCode::InvalidArgument, "count_per_family must be >= 1");
    Spectrum sp;
    sp.params = params;
    sp.ground = -params.kappa2;
    sp.degenerate_flag = std::abs(params.kappa2 - 12.0) < kDegenerateWindow;
    for (int k = 1; k <= count_per_family; ++k) sp.cosine_family.push_back({k, std::pow(2 * k * pi, 2)});
    sp.transcendental_family.push_back(low_root(params));
    for (int m = 2; m <= count_per_family; ++m) sp.transcendental_family.push_back(bracketed_root(params, m));
    return sp;
}

double eigenvalue(const Spectrum& sp, Family family, int index) {
    check_index(sp, family, index);
    switch (family) {
        case Family::ground: return sp.ground;
        case Family::cosine: return sp.cosine_family[index - 1].mu;
        case Family::transcendental: return sp.transcendental_family[index - 1].lambda;
    }
    return 0.0;
}

double forward_eigenfunction(const Spectrum& sp, Family family, int index, double x, int order) {
    check_index(sp, family, index);
    if (order < 0 || order > 2) throw Error(ErrorCode::InvalidArgument, "derivative order must be 0, 1 or 2");
    const double w = x - 0.5;
    switch (family) {
        case Family::ground: {
            const double kap = std::sqrt(sp.params.kappa2);
            const double v[] = {std::cosh(kap * w), kap * std::sinh(kap * w), kap * kap * std::cosh(kap * w)};
            return v[order];
        }
        case Family::cosine: {
            const double a = 2 * index * pi;
            const double v[] = {std::cos(a * x), -a * std::sin(a * x), -a * a * std::cos(a * x)};
            return v[order];
        }
        case Family::transcendental: {
            const double l = sp.transcendental_family[index - 1].lambda;
            if (l == 0.0) {
                const double v[] = {w, 1.0, 0.0};
                return v[order];
            }
            if (l > 0) {
                const double z = std::sqrt(l);
                const double v[] = {std::sin(z * w), z * std::cos(z * w), -l * std::sin(z * w)};
                return v[order];
            }
            const double a = std::sqrt(-l);
            const double v[] = {std::sinh(a * w), a * std::cosh(a * w), -l * std::sinh(a * w)};
            return v[order];
        }
    }
    return 0.0;
}

double cosine_dual_offset(int k, double kappa2) {
    return -kappa2 / (4.0 * k * k * pi * pi + kappa2);
}

double printed_cosine_dual_offset(int k, double kappa2) {
    return 1.0 / (k * pi * (4.0 * k * k * pi * pi + kappa2));
}

double dual_eigenfunction(const Spectrum& sp, Family family, int index, double y) {
    check_index(sp, family, index);
    switch (family) {
        case Family::ground: return 1.0;
        case Family::cosine: return std::cos(2 * index * pi * y) + cosine_dual_offset(index, sp.params.kappa2);
        case Family::transcendental: {
            const double l = sp.transcendental_family[index - 1].lambda;
            return kappa2_a_at_root(l, y, sp.params.kappa2) / sp.params.kappa2;
        }
    }
    return 0.0;
}

double steady_state(const ModelParams& p, double x) {
    const double kap = std::sqrt(p.kappa2);
    return -p.epsilon * p.kappa2 * p.voltage * std::sinh(kap * (x - 0.5)) / (2 * std::sinh(kap / 2));
}

double steady_state_derivative(const ModelParams& p, double x) {
    const double kap = std::sqrt(p.kappa2);
    return -p.epsilon * p.kappa2 * p.voltage * kap * std::cosh(kap * (x - 0.5)) / (2 * std::sinh(kap / 2));
}

double printed_steady_state(const ModelParams& p, double x) {
    const double kap = std::sqrt(p.kappa2);
    return kap * p.voltage * std::sinh(kap * (x - 0.5)) / std::cosh(kap / 2);
}

}  // namespace pnpk
