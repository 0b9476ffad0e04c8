#pragma once

#include <functional>
#include <vector>

#include "pnpk/heat_kernel.hpp"
#include "pnpk/pde_oracle.hpp"
#include "pnpk/resolvent.hpp"

namespace pnpk {

/// FD kernel estimates at the given times for a source at y.
using FdKernelReference =
    std::function<std::vector<ScalarField>(const ModelParams&, double y, const std::vector<double>& times, Dynamics)>;

/// kernel_estimates with the given stepping configuration.
FdKernelReference fd_reference(const EvolveConfig& config);

/// Snaps a fitted value to the nearest candidate (relative distance).
/// Throws CalibrationAmbiguous if none is within `rel_tol`.
FamilyFactor snap(double fitted, const std::vector<std::pair<std::string, double>>& candidates,
                  double rel_tol = 0.05);

/// One scale factor per kernel family by least squares against FD kernels at
/// t in {0.1, 0.2, 0.5} (source at y = 0.3), snapped to the candidate set,
/// then checked for unit mass and for agreement with FD at config.min_time.
KernelCalibration calibrate(const ModelParams& params, const Spectrum& sp, const KernelConfig& config,
                            const FdKernelReference& fd);

/// Resolvent constants measured against the BVP oracle, before and after snapping.
struct ResolventMeasurement {
    double neumann_constant_fit, neumann_cosine_fit;
    double moment_sign_fit, moment_a_scale_fit;
    double even_factor_fit, odd_factor_fit;
    double start0_moment_residual, start1_moment_residual;
    ResolventCalibration snapped;
};

ResolventMeasurement measure_resolvent_calibration(double kappa2, int grid_size = 1025);

}  // namespace pnpk
