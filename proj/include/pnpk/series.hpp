#pragma once

#include "pnpk/types.hpp"

namespace pnpk {

/// Relative distance to a series pole below which series evaluation refuses.
inline constexpr double kPoleGuard = 1e-6;

/// First index m of the odd-mode series
///   A(lambda, y) = (1/pi^2) sum_m 2 cos((2m+1) pi y) / ((2m+1)^2 (pi^2 (2m+1)^2 - lambda)).
/// Start 0 is the one consistent with the Neumann moment identities; start 1
/// is the printed variant and stays available for the comparison.
enum class AStart { zero = 0, one = 1 };
inline constexpr AStart kAStart = AStart::zero;

/// Partial sum with the tail bounded below tol by the m^-4 decay.
/// Throws NearSeriesPole within kPoleGuard of pi^2 (2m+1)^2.
cplx a_series(cplx lambda, double y, double tol = 1e-14, AStart start = kAStart);

/// Start-0 closed form -[(1 - 2y) + 2 sin(z (y - 1/2)) / (z cos(z/2))] / (4 lambda).
/// Needs lambda != 0 and cos(z/2) != 0.
cplx a_closed_form(cplx lambda, double y);

/// kappa2 * A(lambda, y) (start 0) at a root of G~, using the root relation to
/// remove the cos(z/2) division; stable when the root is close to a pole of A.
double kappa2_a_at_root(double lambda, double y, double kappa2);

/// True when lambda is within the guard of a pole pi^2 (2m+1)^2, m >= start.
bool near_a_pole(cplx lambda, AStart start = kAStart);

}  // namespace pnpk
