#pragma once

#include "pnpk/series.hpp"
#include "pnpk/types.hpp"

namespace pnpk {

/// Constants multiplying each printed family in the resolvent expressions.
/// The frozen values were measured against the BVP oracle (see
/// measure_resolvent_calibration) and are re-measured by the validation suite.
struct ResolventCalibration {
    // R_N = neumann_constant / lambda + neumann_cosine * sum_k cos(k pi x) cos(k pi y) / (lambda - k^2 pi^2)
    double neumann_constant = -1.0;
    double neumann_cosine = -2.0;
    // int (1-s) R_N = moment_sign (1/(2 lambda) - moment_a_scale A),
    // int s R_N     = moment_sign (1/(2 lambda) + moment_a_scale A)
    double moment_sign = -1.0;
    double moment_a_scale = 2.0;
    AStart a_start = AStart::zero;
    // R - R_N = even_factor * E + odd_factor * O with E, O the two printed
    // correction terms (cos(z (x - 1/2)) term and sin(z (1 - 2x)/2) term)
    double even_factor = -1.0;
    double odd_factor = -4.0;
};

inline constexpr ResolventCalibration kResolventCalibration{};

/// Printed constants, kept for the discrepancy report.
struct PrintedResolventConstants {
    static constexpr double neumann_constant = 1.0;
    static constexpr double neumann_cosine = 0.5;
    static constexpr double moment_sign = 1.0;
    static constexpr double moment_a_scale = 1.0;
    static constexpr AStart a_start = AStart::one;
};

/// Neumann resolvent from its eigenfunction series (Kummer-accelerated),
/// solving R'' + lambda R + delta(x - y) = 0 with R'(0) = R'(1) = 0.
/// Throws NearSeriesPole within the guard of 0 or k^2 pi^2.
cplx neumann_resolvent(cplx lambda, double x, double y, double tol = 1e-13,
                       double c0 = kResolventCalibration.neumann_constant,
                       double c1 = kResolventCalibration.neumann_cosine);

/// -cos(z x<) cos(z (1 - x>)) / (lambda s(lambda)).
cplx neumann_resolvent_closed(cplx lambda, double x, double y);

/// The two printed correction terms of R - R_N, evaluated branch-free:
///   even: -k2 cos(z (x - 1/2)) / (2 z sin(z/2) (lambda + k2))
///   odd:  k2 sin(z/2) A (z + k2/z) sin(z (1 - 2x)/2) / Det
/// `a` is the value of A(lambda, y) to use.
cplx printed_even_term(cplx lambda, double x, double kappa2);
cplx printed_odd_term(cplx lambda, double x, cplx a, double kappa2);

struct ABCoefficients {
    cplx a;         // coefficient of sin(z x), principal z
    cplx b;         // coefficient of cos(z x)
    cplx az;        // a * z, the branch-free combination
    double residual = 0.0;  // max back-substitution residual of the 2x2 system
};

/// Solves the two boundary equations for R = R_N + a sin(z x) + b cos(z x).
/// Throws SingularSystem near a root of Det, NearSeriesPole near a pole of A
/// or R_N, PoleAtZero at lambda = 0.
ABCoefficients ab_coefficients(cplx lambda, double y, double kappa2, double tol = 1e-13);

/// Closed-form pair exactly as printed, for a given value of A.
ABCoefficients printed_ab_coefficients(cplx lambda, cplx a_value, double kappa2);

/// Full resolvent R = R_N + calibrated correction terms.
cplx resolvent(cplx lambda, double x, double y, double kappa2, double tol = 1e-13);

/// R_N + a sin(z x) + b cos(z x) from ab_coefficients.
cplx resolvent_from_ab(cplx lambda, double x, double y, double kappa2, double tol = 1e-13);

/// Closed form using a_closed_form and neumann_resolvent_closed, with no
/// series summation. Used by the contour quadrature.
cplx resolvent_closed(cplx lambda, double x, double y, double kappa2);

/// Throws if lambda is within the guard of a resolvent pole.
void check_resolvent_guard(cplx lambda, double kappa2);

}  // namespace pnpk
