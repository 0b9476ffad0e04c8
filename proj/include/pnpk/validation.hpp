#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pnpk/calibration.hpp"
#include "pnpk/types.hpp"

namespace pnpk {

enum class CheckKind {
    target,    // |achieved - target| <= tolerance
    residual,  // achieved <= tolerance
    floor,     // achieved >= tolerance
};

struct Check {
    std::string name;
    double target = 0.0;
    double achieved = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string notes;
    CheckKind kind = CheckKind::residual;
};

Check residual_check(std::string name, double achieved, double tolerance, std::string notes = {});
Check target_check(std::string name, double target, double achieved, double tolerance, std::string notes = {});
Check floor_check(std::string name, double achieved, double bound, std::string notes = {});

enum class Level { quick, full };

struct CalibrationRecord {
    double kappa2 = 0.0;
    KernelCalibration kernel;
    ResolventMeasurement resolvent;
    double odd_mode_residue = 0.0;       // residue of R_N at pi^2 over cos(pi x) cos(pi y)
    double odd_mode_leftover = 0.0;      // same for the full resolvent
    double printed_offset_overlap = 0.0; // <ground, cosine dual k=1> with the printed offset
    double forced_offset_overlap = 0.0;
};

struct ValidationReport {
    std::string timestamp;
    std::vector<ModelParams> params;
    std::vector<Check> checks;
    std::vector<CalibrationRecord> calibration;
    std::vector<std::string> discrepancy_ledger;

    bool all_passed() const;
    nlohmann::json to_json() const;
};

std::string utc_timestamp();

// One suite per acceptance criterion; each returns its checks.
std::vector<Check> eigenvalue_checks(const std::vector<double>& kappa2s, int count = 20);
/// With `extrapolate` the oracle is Richardson-combined with its refinement
/// (fourth order); otherwise the plain grid-1025 oracle is used.
std::vector<Check> resolvent_checks(const std::vector<double>& kappa2s, Level level, bool extrapolate = false);
std::vector<Check> fd_kernel_checks(const std::vector<double>& kappa2s, Level level);
std::vector<Check> kernel_property_checks(const std::vector<double>& kappa2s, Level level);
std::vector<Check> inversion_checks(const std::vector<double>& kappa2s, Level level);
std::vector<Check> duality_checks(const std::vector<double>& kappa2s);
std::vector<Check> conservation_checks(const std::vector<double>& kappa2s, Level level);
std::vector<Check> stochastic_checks(Level level);

/// Probe values of lambda used against the BVP oracle.
std::vector<cplx> resolvent_probes(double kappa2);

/// Fits every calibration constant for one kappa2 against the oracles.
CalibrationRecord calibration_record(double kappa2, Level level);
std::vector<std::string> discrepancy_ledger(const std::vector<CalibrationRecord>& records);
/// Snapped constants equal the frozen ones; ledger covers the known printed deviations.
std::vector<Check> calibration_checks(const std::vector<CalibrationRecord>& records,
                                      const std::vector<std::string>& ledger);

/// All suites over the given kappa2 values. Progress lines go to `log` if set.
ValidationReport run_validation(const std::vector<double>& kappa2s, Level level, std::ostream* log = nullptr);

}  // namespace pnpk
