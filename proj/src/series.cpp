#include "pnpk/series.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pnpk/entire.hpp"
#include "pnpk/error.hpp"

namespace pnpk {

namespace {
constexpr double pi = std::numbers::pi;
}

bool near_a_pole(cplx lambda, AStart start) {
    // nearest odd n >= 2*start+1 to sqrt(Re lambda)/pi
    const double re = lambda.real();
    const int n0 = 2 * int(start) + 1;
    double guess = re > 0 ? std::sqrt(re) / pi : 0.0;
    int n = int(std::floor(guess));
    if (n % 2 == 0) n -= 1;
    for (int cand = std::max(n0, n - 2); cand <= std::max(n0, n + 4); cand += 2) {
        const double pole = pi * pi * cand * cand;
        if (std::abs(lambda - pole) < kPoleGuard * pole) return true;
    }
    return false;
}

cplx a_series(cplx lambda, double y, double tol, AStart start) {
    if (near_a_pole(lambda, start)) {
        throw Error(ErrorCode::NearSeriesPole,
                    "A(lambda, y) at lambda = " + std::to_string(lambda.real()) + "+" +
                        std::to_string(lambda.imag()) + "i");
    }
    const double alam = std::abs(lambda);
    // thousands of terms land on an O(1) sum, so compensate the rounding
    cplx sum = 0.0, carry = 0.0;
    for (int m = int(start);; ++m) {
        const double n = 2.0 * m + 1.0;
        const double n2pi2 = n * n * pi * pi;
        const cplx term = 2.0 * std::cos(n * pi * y) / (n * n * (n2pi2 - lambda)) - carry;
        const cplx next = sum + term;
        carry = (next - sum) - term;
        sum = next;
        // once n^2 pi^2 >= 2|lambda| every later term is below 4/(pi^2 n^4 pi^2),
        // and the odd-n tail past n is below 2/(3 pi^4 n^3)
        if (n2pi2 >= 2.0 * alam && 2.0 / (3.0 * std::pow(pi, 4) * n * n * n) < tol) break;
    }
    return sum / (pi * pi);
}

cplx a_closed_form(cplx lambda, double y) {
    const cplx ch = std::cos(std::sqrt(lambda) / 2.0);
    return -((1.0 - 2.0 * y) + 2.0 * sinc_w(lambda, y - 0.5) / ch) / (4.0 * lambda);
}

double kappa2_a_at_root(double lambda, double y, double kappa2) {
    if (!near_a_pole(lambda)) return kappa2 * a_series(lambda, y).real();
    // near a pole of A, lambda >= pi^2 so the 1/lambda below is harmless
    const TrigBundle b = trig_bundle(lambda);
    const double sw = sinc_w(lambda, y - 0.5).real();
    return -(kappa2 * (1.0 - 2.0 * y) + (lambda + kappa2) * sw / b.sh.real()) / (4.0 * lambda);
}

}  // namespace pnpk
