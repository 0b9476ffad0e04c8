#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace pnpk {

using cplx = std::complex<double>;

/// Channel inputs. kappa2 is the inverse squared Debye length on the unit interval.
struct ModelParams {
    double kappa2 = 1.0;
    double epsilon = 1.0;
    double voltage = 0.0;

    /// Throws InvalidArgument unless kappa2 > 0 and epsilon > 0.
    void validate() const;
};

/// Samples on the uniform grid x_i = i/(n-1).
struct ScalarField {
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(std::size_t n, double fill = 0.0) : values(n, fill) {}
    explicit ScalarField(std::vector<double> v) : values(std::move(v)) {}

    std::size_t grid_size() const { return values.size(); }
    double x(std::size_t i) const { return double(i) / double(values.size() - 1); }
    double spacing() const { return 1.0 / double(values.size() - 1); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    /// Throws InvalidArgument if n < 2 or any value is not finite.
    void validate() const;
};

/// Same layout as ScalarField, complex valued (resolvent samples).
struct ComplexField {
    std::vector<cplx> values;

    std::size_t grid_size() const { return values.size(); }
    double x(std::size_t i) const { return double(i) / double(values.size() - 1); }
};

}  // namespace pnpk
