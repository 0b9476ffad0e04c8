#include "pnpk/entire.hpp"

#include <cmath>

namespace pnpk {

namespace {

constexpr double kSeriesRadius = 4.0;
constexpr int kSeriesTerms = 40;

// sum_k a_k x^k with a_k = sign^k / (2k + shift)!, shift in {0, 1, 2}
cplx alt_factorial_series(cplx x, int shift, double scale = 1.0) {
    cplx term = scale;
    for (int j = 1; j <= shift; ++j) term /= double(j);
    cplx sum = term;
    for (int k = 1; k < kSeriesTerms; ++k) {
        const double a = 2.0 * k + shift - 1.0;
        term *= -x / (a * (a + 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace

EntireTrig entire_trig(cplx lambda) {
    const TrigBundle b = trig_bundle(lambda);
    return {b.c, b.s, b.hc};
}

TrigBundle trig_bundle(cplx lambda) {
    TrigBundle b;
    b.z = std::sqrt(lambda);
    if (std::abs(lambda) <= kSeriesRadius) {
        const cplx l4 = lambda / 4.0;
        b.c = alt_factorial_series(lambda, 0);
        b.s = alt_factorial_series(lambda, 1);
        b.hc = alt_factorial_series(lambda, 2);
        b.ch = alt_factorial_series(l4, 0);
        b.sh = alt_factorial_series(l4, 1, 0.5);
        // q = sum_j (-1)^j lambda^j / (2j+3)!
        cplx t = 1.0 / 6.0, sq = t;
        // p = sum_j (-1)^(j+1) (2j+2) lambda^j / (2j+3)!
        // rh = sum_j (-1/4)^(j+1) (2j+2) lambda^j / (2j+3)!
        cplx inv_fact = 1.0 / 6.0;  // 1/(2j+3)!
        cplx pw = 1.0, pw4 = 1.0;   // lambda^j, (-lambda/4)^j
        cplx sp = 0.0, srh = 0.0, srhp = 0.0;
        cplx pw4_prev = 0.0;        // (-lambda/4)^(j-1), for the derivative
        for (int j = 0; j < kSeriesTerms; ++j) {
            if (j > 0) {
                inv_fact /= double((2 * j + 2) * (2 * j + 3));
                t *= -lambda / double((2 * j + 2) * (2 * j + 3));
                sq += t;
                pw4_prev = pw4;
                pw *= lambda;
                pw4 *= -l4;
            }
            const double sign = (j % 2 == 0) ? -1.0 : 1.0;
            sp += sign * double(2 * j + 2) * pw * inv_fact;
            srh += -0.25 * double(2 * j + 2) * pw4 * inv_fact;
            if (j > 0) srhp += -0.25 * double(2 * j + 2) * double(j) * (-0.25) * pw4_prev * inv_fact;
        }
        b.q = sq;
        b.p = sp;
        b.rh = srh;
        b.rh_prime = srhp;
        return b;
    }
    const cplx z = b.z;
    b.c = std::cos(z);
    b.s = std::sin(z) / z;
    b.hc = (1.0 - b.c) / lambda;
    b.ch = std::cos(z / 2.0);
    b.sh = std::sin(z / 2.0) / z;
    b.q = (1.0 - b.s) / lambda;
    b.p = (b.c - b.s) / lambda;
    b.rh = (b.ch - 2.0 * b.sh) / lambda;
    b.rh_prime = -(b.sh + 6.0 * b.rh) / (4.0 * lambda);
    return b;
}

cplx cos_w(cplx lambda, double w) {
    const cplx x = lambda * (w * w);
    if (std::abs(x) <= kSeriesRadius) return alt_factorial_series(x, 0);
    return std::cos(std::sqrt(lambda) * w);
}

cplx sinc_w(cplx lambda, double w) {
    const cplx x = lambda * (w * w);
    if (std::abs(x) <= kSeriesRadius) return w * alt_factorial_series(x, 1);
    const cplx z = std::sqrt(lambda);
    return std::sin(z * w) / z;
}

}  // namespace pnpk
