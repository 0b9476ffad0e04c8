#pragma once

// Entire functions of lambda built from z = sqrt(lambda). Every function here is
// even in z, so no branch choice leaks into the result. Small |lambda| goes
// through power series, large |lambda| through trig identities.

#include "pnpk/types.hpp"

namespace pnpk {

struct EntireTrig {
    cplx c;   // cos z
    cplx s;   // sin z / z
    cplx hc;  // (1 - cos z) / lambda
};

EntireTrig entire_trig(cplx lambda);

/// Everything the determinant, resolvent and kernel need at one lambda.
struct TrigBundle {
    cplx z;   // principal sqrt(lambda), only used where the result is even in z
    cplx c, s, hc;
    cplx ch;  // cos(z/2)
    cplx sh;  // sin(z/2) / z
    cplx q;   // (1 - s) / lambda
    cplx p;   // (c - s) / lambda
    cplx rh;  // (ch - 2 sh) / lambda
    cplx rh_prime;  // d rh / d lambda
};

TrigBundle trig_bundle(cplx lambda);

/// cos(z w) and sin(z w)/z, entire in lambda for fixed w.
cplx cos_w(cplx lambda, double w);
cplx sinc_w(cplx lambda, double w);

/// d/dw of sinc_w, i.e. cos(z w).
inline cplx sinc_w_dw(cplx lambda, double w) { return cos_w(lambda, w); }

}  // namespace pnpk
