#pragma once

#include "pnpk/types.hpp"

namespace pnpk {

enum class BoundaryKind { nonlocal, neumann };

/// How a point source at y is put on the grid. `split` shares unit mass
/// between the two neighbouring nodes so that mass and first moment are
/// exact; `nearest` puts it all on the nearest node (first order in h unless
/// y is a node, where both coincide).
enum class DeltaPlacement { split, nearest };

/// Nodal source f with sum_j w_j f_j = 1 under trapezoid weights.
std::vector<double> discrete_delta(std::size_t n, double y, DeltaPlacement placement);

/// Finite-difference solution of R'' + lambda R = -delta(x - y) on the
/// uniform grid, with ghost-node boundary rows
///   R'(0) = -k2 int (1-s) R,  R'(1) = k2 int s R   (nonlocal), or
///   R'(0) = R'(1) = 0                                (neumann),
/// integrals by the trapezoid rule. Second order in 1/(grid_size - 1).
/// Throws SingularDiscreteSystem when lambda is numerically an eigenvalue.
ComplexField resolvent_bvp_oracle(cplx lambda, double y, const ModelParams& params, int grid_size,
                                  BoundaryKind kind = BoundaryKind::nonlocal,
                                  DeltaPlacement placement = DeltaPlacement::split);

/// Residuals of the two discrete boundary rows for a computed field.
struct BoundaryRowResidual {
    double first;
    double last;
};
BoundaryRowResidual bvp_boundary_rows(const ComplexField& r, cplx lambda, double y, const ModelParams& params,
                                      BoundaryKind kind = BoundaryKind::nonlocal,
                                      DeltaPlacement placement = DeltaPlacement::split);

}  // namespace pnpk
