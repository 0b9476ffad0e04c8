#pragma once

#include <vector>

#include "pnpk/types.hpp"

namespace pnpk {

/// Width of the window around kappa2 = 12 inside which the low transcendental
/// root is set to exactly 0.
inline constexpr double kDegenerateWindow = 1e-8;

struct CosineMode {
    int k;
    double mu;  // (2 k pi)^2
};

struct TranscendentalRoot {
    int m;
    double lambda;
    double residual;    // |G(lambda)| / |lambda + kappa2|, see secular_residual
    double bracket_lo;  // lambda interval that was bisected
    double bracket_hi;
};

/// Eigenvalues of d^2/dx^2 under the non-local conditions
///   v'(0) = -kappa2 * int (1-s) v ds,   v'(1) = kappa2 * int s v ds.
///
/// The transcendental family is ordered by value. Its first member is the low
/// root, in (0, pi^2) for kappa2 < 12, equal to 0 at kappa2 = 12 and in
/// (-kappa2, 0) above. Member m >= 2 lies in ((2m-3)^2 pi^2, (2m-1)^2 pi^2).
struct Spectrum {
    ModelParams params;
    double ground = 0.0;
    std::vector<CosineMode> cosine_family;
    std::vector<TranscendentalRoot> transcendental_family;
    bool degenerate_flag = false;
};

enum class Family { ground, cosine, transcendental };

const char* to_string(Family f);

/// Det as the sum of its two printed terms. Throws PoleAtZero at lambda = 0.
cplx det(cplx lambda, const ModelParams& params);

/// Factored form sin z (1 + k2/lambda)(2 k2 tan(z/2)/z - k2 - lambda); a
/// self-check for det() wherever tan(z/2) is finite.
cplx det_factored(cplx lambda, const ModelParams& params);

/// sqrt(lambda) * Det(lambda) = (lambda + k2)(2 k2 hc - (lambda + k2) s). Entire.
/// Near 0 it behaves like k2 (k2/12 - 1) lambda.
cplx det_regularized(cplx lambda, const ModelParams& params);

/// G~(lambda) = cos(z/2) + k2 (cos(z/2) - 2 sin(z/2)/z) / lambda, entire.
/// Det = -2 sin(z/2) (lambda + k2) G~, so the transcendental roots are its zeros.
cplx g_tilde(cplx lambda, const ModelParams& params);
cplx g_tilde_prime(cplx lambda, const ModelParams& params);

/// dDet/dlambda at a transcendental root, closed form -2 z sh (lambda + k2) G~'.
/// Imaginary for a negative root (Det carries a factor sqrt(lambda)).
/// Throws NotASimpleRoot if lambda is not a root or the root is degenerate.
cplx det_prime(double lambda, const ModelParams& params);

/// Central difference of det() with two levels of Richardson extrapolation.
cplx det_prime_richardson(double lambda, const ModelParams& params, double h = 1e-2);

/// Scaled residual |cos(z/2) - 2 k2 sin(z/2)/(z (lambda + k2))| of the root
/// equation. The raw form 2 tan(z/2) - z (lambda + k2)/k2 sits next to a pole
/// of tan at every root and is not computable to 1e-10 for large roots.
double secular_residual(double lambda, const ModelParams& params);
double secular_residual_raw(double lambda, const ModelParams& params);

Spectrum find_eigenvalues(const ModelParams& params, int count_per_family);

/// Forward eigenfunction and its x-derivatives (order 0, 1, 2). The
/// transcendental member is sin(sqrt(l) (x - 1/2)); for l < 0 the real form
/// sinh(sqrt(-l) (x - 1/2)) is returned, for l = 0 it is x - 1/2.
double forward_eigenfunction(const Spectrum& sp, Family family, int index, double x, int order = 0);

double eigenvalue(const Spectrum& sp, Family family, int index);

/// Dual eigenfunctions: 1, cos(2 k pi y) + cosine_dual_offset(k), A(l_m, y).
double dual_eigenfunction(const Spectrum& sp, Family family, int index, double y);

/// Constant making cos(2 k pi y) + offset orthogonal to cosh(kappa (y - 1/2)):
/// offset = -kappa2 / (4 k^2 pi^2 + kappa2).
double cosine_dual_offset(int k, double kappa2);
/// The constant 1/(k pi (4 k^2 pi^2 + kappa2)) printed with the duality claim.
double printed_cosine_dual_offset(int k, double kappa2);

/// Steady state of the damped problem with voltage, for the boundary pair
///   u'(0) = -k2 int (1-s) u - eps k2 V,   u'(1) = k2 int s u - eps k2 V:
///   -eps k2 V sinh(kappa (x - 1/2)) / (2 sinh(kappa/2)).
double steady_state(const ModelParams& params, double x);
double steady_state_derivative(const ModelParams& params, double x);

/// kappa V sinh(kappa (x - 1/2)) / cosh(kappa/2), as printed with the model.
/// Satisfies neither sign convention of the boundary pair; kept for the
/// discrepancy report.
double printed_steady_state(const ModelParams& params, double x);

}  // namespace pnpk
