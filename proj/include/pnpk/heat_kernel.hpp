#pragma once

#include <array>
#include <string>
#include <vector>

#include "pnpk/spectrum.hpp"
#include "pnpk/types.hpp"

namespace pnpk {

/// One scalar per additive family of the kernel expansion.
struct FamilyFactor {
    double value = 1.0;  // snapped factor in use
    std::string label;   // candidate name, e.g. "4" or "1/cosh(kappa/2)"
    double fitted = 0.0; // least-squares value before snapping (0 if frozen)
};

/// Family scale factors. The bases they multiply are
///   stationary:     kappa cosh(kappa/2) cosh(kappa (x-1/2)) / (2 sinh(kappa/2))
///   transcendental: sum_m k2 A(l_m, y) sin(z (x-1/2)) / (2 z G~'(l_m)) e^{-(l_m + k2) t}
///                   (the residue of the odd correction term of R - R_N)
///   cosine:         sum_k cos(2k pi x) (cos(2k pi y) + offset_k) e^{-(4k^2 pi^2 + k2) t}
///   neumann:        sum_k cos(k pi x) cos(k pi y) e^{-k^2 pi^2 t}   (added to 1)
struct KernelCalibration {
    FamilyFactor stationary, transcendental, cosine, neumann;
    double fit_residual = 0.0;          // rms of the three-family fit
    double neumann_fit_residual = 0.0;  // rms of the Neumann fit
    double mass_defect = 0.0;           // max |int K dx - 1| after snapping
    double delta_defect = 0.0;          // sup |K - K_fd| / sup K at min_time
    bool measured = false;
    std::vector<std::pair<std::string, double>> candidates;

    /// Short hex digest of the snapped factors.
    std::string hash() const;
};

/// The snapped constants (what calibrate() returns for every tested kappa2).
KernelCalibration frozen_kernel_calibration(const ModelParams& params);

/// Candidate set for snapping: +-1/2, +-1, +-2, +-4 and 1/cosh(kappa/2).
std::vector<std::pair<std::string, double>> calibration_candidates(const ModelParams& params);

struct KernelConfig {
    int mode_count = 1;
    double series_tol = 1e-12;
    double min_time = 1e-2;
    KernelCalibration calibration;
};

/// ceil(sqrt(ln(10/tol) / (4 pi^2 min_time))) + 2.
int required_mode_count(double min_time, double series_tol);

KernelConfig make_kernel_config(const ModelParams& params, double min_time = 1e-2, double series_tol = 1e-12);

/// Kernel with the source point fixed; y-dependent coefficients are computed
/// once and shared across x and t.
class KernelSlice {
public:
    KernelSlice(const Spectrum& sp, const KernelConfig& config, double y);

    double value(double x, double t) const;

    /// Unscaled family bases at (x, t): stationary, transcendental, cosine.
    std::array<double, 3> bases(double x, double t) const;

private:
    double kappa_;
    double k2_;
    double stationary_;            // factor times base amplitude
    std::vector<double> lambda_;   // transcendental roots
    std::vector<double> root_;     // sqrt|lambda|
    std::vector<double> tcoef_;    // unscaled transcendental coefficients
    std::vector<double> ccoef_;    // unscaled cosine coefficients
    double ft_, fc_, fs_;
    double min_time_;
};

double kernel(const ModelParams& params, double x, double y, double t, const Spectrum& sp, const KernelConfig& config);

ScalarField kernel_field(const ModelParams& params, double y, double t, int grid_size, const Spectrum& sp,
                         const KernelConfig& config);

double neumann_kernel(double x, double y, double t, const KernelConfig& config);
ScalarField neumann_kernel_field(double y, double t, int grid_size, const KernelConfig& config);

struct BromwichConfig {
    double contour_abscissa = -2.0;
    double half_height = 400.0;
    int node_count = 4096;
    bool subtract_images = true;  // see bromwich_kernel

    /// Contour at Re lambda = -kappa2 - 1.
    static BromwichConfig for_params(const ModelParams& params);
};

/// e^{-k2 t} (1/2pi) int_{-T}^{T} e^{-lambda t} R(lambda) d eta, lambda = gamma + i eta,
/// by the trapezoid rule. With subtract_images the three free-space image
/// terms e^{-w d}/(2w), w = sqrt(-lambda), are removed from R before the
/// quadrature and their exact inverses e^{-d^2/4t}/sqrt(4 pi t) added back,
/// together with the boundary layers driven by the non-local fluxes.
double bromwich_kernel(const ModelParams& params, double x, double y, double t, const Spectrum& sp,
                       const BromwichConfig& bconfig);

/// bromwich_kernel over the grid, with the closed-form resolvent at each node.
ScalarField bromwich_kernel_field(const ModelParams& params, double y, double t, int grid_size, const Spectrum& sp,
                                  const BromwichConfig& bconfig);

/// Same machinery on the Neumann resolvent (no damping), contour Re lambda < 0.
double bromwich_neumann_kernel(double x, double y, double t, const BromwichConfig& bconfig);

/// |int_0^T e^{(lambda + k2) t} K dt - R(lambda, x, y)|, adaptive Gauss-Kronrod.
/// Needs x != y: below t0 = d^2/120 (d the smallest image distance) the
/// integrand is under 1e-13 and is dropped. Throws WrongHalfPlane unless
/// Re lambda < -kappa2.
double laplace_check(const ModelParams& params, cplx lambda, double x, double y, const Spectrum& sp,
                     const KernelConfig& config);

double chapman_kolmogorov_residual(const ModelParams& params, double x, double y, double t, double s,
                                   const Spectrum& sp, const KernelConfig& config, int quad_size);

}  // namespace pnpk
