#include "pnpk/bvp_oracle.hpp"

#include <cmath>

#include "pnpk/bordered.hpp"
#include "pnpk/error.hpp"
#include "pnpk/quadrature.hpp"

namespace pnpk {

std::vector<double> discrete_delta(std::size_t n, double y, DeltaPlacement placement) {
    if (!(y >= 0.0 && y <= 1.0)) throw Error(ErrorCode::InvalidArgument, "source point outside [0,1]");
    const auto w = trapezoid_weights(n);
    std::vector<double> f(n, 0.0);
    const double pos = y * double(n - 1);
    if (placement == DeltaPlacement::nearest) {
        const auto j = std::size_t(std::lround(pos));
        f[j] = 1.0 / w[j];
        return f;
    }
    std::size_t j = std::min(std::size_t(std::floor(pos)), n - 2);
    const double theta = pos - double(j);
    f[j] += (1.0 - theta) / w[j];
    f[j + 1] += theta / w[j + 1];
    return f;
}

namespace {

BorderedSystem<cplx> assemble(cplx lambda, const ModelParams& params, std::size_t n, BoundaryKind kind) {
    const double h = 1.0 / double(n - 1);
    const double ih2 = 1.0 / (h * h);
    BorderedSystem<cplx> sys(n);
    for (std::size_t i = 0; i < n; ++i) {
        sys.lower[i] = ih2;
        sys.upper[i] = ih2;
        sys.diag[i] = lambda - 2.0 * ih2;
    }
    // ghost node eliminated through the boundary derivative
    sys.upper[0] = 2.0 * ih2;
    sys.lower[n - 1] = 2.0 * ih2;
    sys.lower[0] = 0.0;
    sys.upper[n - 1] = 0.0;
    if (kind == BoundaryKind::nonlocal) {
        const auto w = trapezoid_weights(n);
        const double k2 = params.kappa2;
        for (std::size_t j = 0; j < n; ++j) {
            const double xj = double(j) * h;
            sys.first_extra[j] = 2.0 / h * k2 * w[j] * (1.0 - xj);
            sys.last_extra[j] = 2.0 / h * k2 * w[j] * xj;
        }
    }
    return sys;
}

}  // namespace

ComplexField resolvent_bvp_oracle(cplx lambda, double y, const ModelParams& params, int grid_size,
                                  BoundaryKind kind, DeltaPlacement placement) {
    if (grid_size < 64) throw Error(ErrorCode::InvalidArgument, "grid_size must be >= 64");
    const auto n = std::size_t(grid_size);
    const double h = 1.0 / double(n - 1);
    const auto sys = assemble(lambda, params, n, kind);
    const auto f = discrete_delta(n, y, placement);
    std::vector<cplx> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -f[i];
    // an imaginary Robin shift keeps the tridiagonal part off the real axis
    const cplx shift(0.0, 2.0 * (1.0 + std::sqrt(std::abs(lambda))) / h);
    ComplexField out;
    try {
        out.values = BorderedSolver<cplx>(sys, shift).solve(rhs);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularDiscreteSystem) throw;
        out.values = BorderedSolver<cplx>(sys, -2.0 * shift).solve(rhs);
    }
    return out;
}

BoundaryRowResidual bvp_boundary_rows(const ComplexField& r, cplx lambda, double y, const ModelParams& params,
                                      BoundaryKind kind, DeltaPlacement placement) {
    const std::size_t n = r.grid_size();
    const auto sys = assemble(lambda, params, n, kind);
    const auto f = discrete_delta(n, y, placement);
    const auto applied = sys.apply(r.values);
    const double scale = 2.0 * double(n - 1) * double(n - 1);
    return {std::abs(applied[0] + f[0]) / scale, std::abs(applied[n - 1] + f[n - 1]) / scale};
}

}  // namespace pnpk
