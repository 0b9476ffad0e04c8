#include "pnpk/resolvent.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pnpk/entire.hpp"
#include "pnpk/error.hpp"
#include "pnpk/spectrum.hpp"

namespace pnpk {

namespace {

constexpr double pi = std::numbers::pi;

// sum_{k>=1} cos(k t)/k^2 and cos(k t)/k^4 for 0 <= t <= 2 pi
double clausen2(double t) { return pi * pi / 6 - pi * t / 2 + t * t / 4; }
double clausen4(double t) {
    const double t2 = t * t;
    return std::pow(pi, 4) / 90 - pi * pi * t2 / 12 + pi * t2 * t / 12 - t2 * t2 / 48;
}

std::string lambda_text(cplx l) {
    return std::to_string(l.real()) + (l.imag() < 0 ? "" : "+") + std::to_string(l.imag()) + "i";
}

bool near(cplx lambda, double pole) {
    return std::abs(lambda - pole) < kPoleGuard * std::max(1.0, std::abs(pole));
}

// Nearest k >= 1 with k^2 pi^2 within the guard, 0 if none.
int near_square_pole(cplx lambda) {
    const double re = lambda.real();
    if (re <= 0) return 0;
    const int k = int(std::lround(std::sqrt(re) / pi));
    for (int c = std::max(1, k - 1); c <= k + 1; ++c) {
        if (near(lambda, c * c * pi * pi)) return c;
    }
    return 0;
}

struct Entries {
    cplx a11, a12, a21, a22;
};

Entries boundary_matrix(const TrigBundle& b, cplx lambda, double k2) {
    return {1.0 + k2 * b.q, k2 * b.hc, b.c + k2 * b.p, k2 * b.hc - (lambda + k2) * b.s};
}

}  // namespace

void check_resolvent_guard(cplx lambda, double kappa2) {
    if (lambda == cplx(0.0)) throw Error(ErrorCode::PoleAtZero, "resolvent at lambda = 0");
    if (std::abs(lambda) < kPoleGuard * pi * pi) {
        throw Error(ErrorCode::NearSeriesPole, "lambda = " + lambda_text(lambda) + " is next to 0");
    }
    if (near(lambda, -kappa2)) {
        throw Error(ErrorCode::SingularSystem, "lambda = " + lambda_text(lambda) + " is next to -kappa2");
    }
    if (const int k = near_square_pole(lambda)) {
        throw Error(k % 2 == 0 ? ErrorCode::SingularSystem : ErrorCode::NearSeriesPole,
                    "lambda = " + lambda_text(lambda) + " is next to (" + std::to_string(k) + " pi)^2");
    }
    const ModelParams p{kappa2, 1.0, 0.0};
    const cplx g = g_tilde(lambda, p), gp = g_tilde_prime(lambda, p);
    if (std::abs(g) < kPoleGuard * std::max(1.0, std::abs(lambda)) * std::abs(gp)) {
        throw Error(ErrorCode::SingularSystem, "lambda = " + lambda_text(lambda) + " is next to a root of Det");
    }
}

cplx neumann_resolvent(cplx lambda, double x, double y, double tol, double c0, double c1) {
    if (std::abs(lambda) < kPoleGuard * pi * pi || near_square_pole(lambda)) {
        throw Error(ErrorCode::NearSeriesPole, "Neumann resolvent at lambda = " + lambda_text(lambda));
    }
    const double td = pi * std::abs(x - y), ts = pi * (x + y);
    // 1/(l - a) = -1/a - l/a^2 + l^2/(a^2 (l - a)), a = k^2 pi^2
    const double s2 = 0.5 * (clausen2(td) + clausen2(ts)) / (pi * pi);
    const double s4 = 0.5 * (clausen4(td) + clausen4(ts)) / std::pow(pi, 4);
    const double alam = std::abs(lambda);
    cplx rest = 0.0;
    for (int k = 1;; ++k) {
        const double a = k * k * pi * pi;
        rest += std::cos(k * pi * x) * std::cos(k * pi * y) / (a * a * (lambda - a));
        if (a >= 2 * alam && 2.0 * alam * alam / (5.0 * std::pow(pi, 6) * std::pow(double(k), 5)) < tol) break;
    }
    const cplx sum = -s2 - lambda * s4 + lambda * lambda * rest;
    return c0 / lambda + c1 * sum;
}

cplx neumann_resolvent_closed(cplx lambda, double x, double y) {
    const double lo = std::min(x, y), hi = std::max(x, y);
    const TrigBundle b = trig_bundle(lambda);
    return -cos_w(lambda, lo) * cos_w(lambda, 1.0 - hi) / (lambda * b.s);
}

cplx printed_even_term(cplx lambda, double x, double kappa2) {
    const TrigBundle b = trig_bundle(lambda);
    // z sin(z/2) = lambda sh
    return -kappa2 * cos_w(lambda, x - 0.5) / (2.0 * lambda * b.sh * (lambda + kappa2));
}

cplx printed_odd_term(cplx lambda, double x, cplx a, double kappa2) {
    // k2 sin(z/2) A (z + k2/z) sin(z(1-2x)/2) / (z D2), D2 = -2 sh (lambda + k2) G~,
    // which reduces to k2 A sinc_w(x - 1/2) / (2 G~)
    const ModelParams p{kappa2, 1.0, 0.0};
    return kappa2 * a * sinc_w(lambda, x - 0.5) / (2.0 * g_tilde(lambda, p));
}

ABCoefficients ab_coefficients(cplx lambda, double y, double kappa2, double tol) {
    check_resolvent_guard(lambda, kappa2);
    const auto& cal = kResolventCalibration;
    const cplx A = a_series(lambda, y, tol * 1e-1, cal.a_start);
    const cplx m1 = cal.moment_sign * (0.5 / lambda - cal.moment_a_scale * A);
    const cplx m2 = cal.moment_sign * (0.5 / lambda + cal.moment_a_scale * A);
    const TrigBundle b = trig_bundle(lambda);
    const Entries e = boundary_matrix(b, lambda, kappa2);
    const cplx r1 = -kappa2 * m1, r2 = kappa2 * m2;
    const cplx d = e.a11 * e.a22 - e.a12 * e.a21;
    if (std::abs(d) < 1e-12 * (std::abs(e.a11 * e.a22) + std::abs(e.a12 * e.a21))) {
        throw Error(ErrorCode::SingularSystem, "boundary system singular at lambda = " + lambda_text(lambda));
    }
    ABCoefficients out;
    out.az = (r1 * e.a22 - e.a12 * r2) / d;
    out.b = (e.a11 * r2 - e.a21 * r1) / d;
    out.a = out.az / std::sqrt(lambda);
    const double scale = std::max({std::abs(r1), std::abs(r2), 1e-300});
    out.residual = std::max(std::abs(e.a11 * out.az + e.a12 * out.b - r1),
                            std::abs(e.a21 * out.az + e.a22 * out.b - r2)) / scale;
    if (!(out.residual < std::max(tol, 1e-10))) {
        throw Error(ErrorCode::SingularSystem, "back-substitution residual " + std::to_string(out.residual));
    }
    return out;
}

ABCoefficients printed_ab_coefficients(cplx lambda, cplx A, double k2) {
    const cplx z = std::sqrt(lambda);
    const cplx sz = std::sin(z), cz = std::cos(z);
    const cplx w = z + k2 / z;
    const cplx D = det(lambda, ModelParams{k2, 1.0, 0.0});
    ABCoefficients out;
    out.a = k2 / D * (0.5 / lambda * (sz * w - 2.0 * k2 * (1.0 - cz) / lambda) - A * sz * w);
    out.b = k2 / D * (0.5 / lambda * (w * (1.0 + cz) - 2.0 * k2 * sz / lambda) + A * w * (1.0 - cz));
    out.az = out.a * z;
    return out;
}

cplx resolvent(cplx lambda, double x, double y, double kappa2, double tol) {
    check_resolvent_guard(lambda, kappa2);
    const auto& cal = kResolventCalibration;
    const cplx A = a_series(lambda, y, tol * 1e-1, cal.a_start);
    return neumann_resolvent(lambda, x, y, tol) + cal.even_factor * printed_even_term(lambda, x, kappa2) +
           cal.odd_factor * printed_odd_term(lambda, x, A, kappa2);
}

cplx resolvent_from_ab(cplx lambda, double x, double y, double kappa2, double tol) {
    const ABCoefficients ab = ab_coefficients(lambda, y, kappa2, tol);
    return neumann_resolvent(lambda, x, y, tol) + ab.az * sinc_w(lambda, x) + ab.b * cos_w(lambda, x);
}

cplx resolvent_closed(cplx lambda, double x, double y, double kappa2) {
    const auto& cal = kResolventCalibration;
    const cplx A = a_closed_form(lambda, y);
    return neumann_resolvent_closed(lambda, x, y) + cal.even_factor * printed_even_term(lambda, x, kappa2) +
           cal.odd_factor * printed_odd_term(lambda, x, A, kappa2);
}

}  // namespace pnpk
