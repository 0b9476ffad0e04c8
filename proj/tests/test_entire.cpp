#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pnpk/entire.hpp"

using namespace pnpk;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;

// mpmath, 40 digits
constexpr double kCosh1 = 1.5430806348152437785;
constexpr double kSinh1 = 1.1752011936438014569;
}  // namespace

TEST_CASE("entire_trig at lambda = 0 takes the series limits") {
    const EntireTrig t = entire_trig(0.0);
    CHECK(t.c == cplx(1.0));
    CHECK(t.s == cplx(1.0));
    CHECK(t.hc == cplx(0.5));
}

TEST_CASE("entire_trig at pi^2") {
    const EntireTrig t = entire_trig(pi * pi);
    CHECK(std::abs(t.c + 1.0) < 1e-15);
    CHECK(std::abs(t.s) < 1e-15);
    CHECK(std::abs(t.hc - 2.0 / (pi * pi)) < 1e-15);
}

TEST_CASE("entire_trig at -1 reduces to hyperbolic functions") {
    const EntireTrig t = entire_trig(-1.0);
    CHECK(std::abs(t.c - kCosh1) < 1e-15);
    CHECK(std::abs(t.s - kSinh1) < 1e-15);
    CHECK(std::abs(t.hc - (kCosh1 - 1.0)) < 1e-15);
    CHECK(t.c.imag() == 0.0);
}

TEST_CASE("series and trig branches meet continuously") {
    // the switch sits at |lambda| = 4; compare just inside and outside against
    // the trig forms evaluated directly
    for (double r : {3.999, 4.001}) {
        for (double arg : {0.0, 0.7, 2.0, pi}) {
            const cplx l = std::polar(r, arg);
            const cplx z = std::sqrt(l);
            const TrigBundle b = trig_bundle(l);
            CHECK(std::abs(b.c - std::cos(z)) < 1e-14);
            CHECK(std::abs(b.s - std::sin(z) / z) < 1e-14);
            CHECK(std::abs(b.hc - (1.0 - std::cos(z)) / l) < 1e-13);
            CHECK(std::abs(b.ch - std::cos(z / 2.0)) < 1e-14);
            CHECK(std::abs(b.sh - std::sin(z / 2.0) / z) < 1e-14);
            CHECK(std::abs(b.q - (1.0 - std::sin(z) / z) / l) < 1e-13);
            CHECK(std::abs(b.p - (std::cos(z) - std::sin(z) / z) / l) < 1e-13);
            CHECK(std::abs(b.rh - (std::cos(z / 2.0) - 2.0 * std::sin(z / 2.0) / z) / l) < 1e-13);
        }
    }
}

TEST_CASE("rh_prime matches a central difference") {
    for (cplx l : {cplx(0.3, 0.1), cplx(-2.0, 0.0), cplx(15.0, -3.0), cplx(-40.0, 8.0)}) {
        const double h = 1e-5 * std::max(1.0, std::abs(l));
        const cplx fd = (trig_bundle(l + h).rh - trig_bundle(l - h).rh) / (2.0 * h);
        CHECK(std::abs(trig_bundle(l).rh_prime - fd) < 1e-7 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("no branch cut on the negative axis") {
    const cplx above(-9.0, 1e-14), below(-9.0, -1e-14);
    const TrigBundle a = trig_bundle(above), b = trig_bundle(below);
    CHECK(std::abs(a.c - b.c) < 1e-12);
    CHECK(std::abs(a.s - b.s) < 1e-12);
    CHECK(std::abs(a.rh - b.rh) < 1e-12);
    CHECK(std::abs(sinc_w(above, 0.3) - sinc_w(below, 0.3)) < 1e-12);
}

TEST_CASE("cos_w and sinc_w") {
    CHECK(std::abs(sinc_w(0.0, 0.4) - 0.4) < 1e-16);
    CHECK(cos_w(0.0, 0.4) == cplx(1.0));
    const cplx l(-4.0, 0.0);
    CHECK(std::abs(cos_w(l, 0.25) - std::cosh(0.5)) < 1e-15);
    CHECK(std::abs(sinc_w(l, 0.25) - std::sinh(0.5) / 2.0) < 1e-15);
    CHECK(std::abs(sinc_w(l, -0.25) + sinc_w(l, 0.25)) < 1e-16);
}
