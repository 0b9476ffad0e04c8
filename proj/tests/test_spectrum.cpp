#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pnpk/error.hpp"
#include "pnpk/quadrature.hpp"
#include "pnpk/series.hpp"
#include "pnpk/spectrum.hpp"

using namespace pnpk;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;

ModelParams with_k2(double k2) { return ModelParams{k2, 1.0, 0.0}; }

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no pnpk::Error thrown");
    return ErrorCode::InvalidArgument;
}

double trapz(int n, auto&& f) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = f(double(i) / (n - 1));
    return trapezoid(v);
}
}  // namespace

TEST_CASE("det against the mpmath sum form") {
    const cplx d1 = det(1.0, with_k2(1));
    CHECK(std::abs(d1 - (-1.5270931627041448962)) < 1e-14);
    const cplx d2 = det(cplx(3, 2), with_k2(1));
    CHECK(std::abs(d2 - cplx(-4.2926396244244891719, -1.3405521625240632993)) < 1e-13);
    // a negative argument picks up the sqrt(lambda) factor
    const cplx d3 = det(-2.0, with_k2(4));
    CHECK(std::abs(d3 - cplx(0, -2.794679014534527065)) < 1e-14);
}

TEST_CASE("det zeros at (2k pi)^2 and at -kappa2") {
    for (double k2 : {0.5, 1.0, 4.0, 12.0, 25.0}) {
        for (int k = 1; k <= 10; ++k) CHECK(std::abs(det(std::pow(2 * k * pi, 2), with_k2(k2))) < 1e-9);
        CHECK(std::abs(det(-k2, with_k2(k2))) < 1e-9);
    }
}

TEST_CASE("det at zero is a pole") {
    CHECK(code_of([] { det(0.0, with_k2(1)); }) == ErrorCode::PoleAtZero);
}

TEST_CASE("sum form and factored form agree") {
    for (cplx l : {cplx(1.0), cplx(3, 2), cplx(-7, 0.5), cplx(50, -10), cplx(200, 3)}) {
        for (double k2 : {1.0, 4.0, 25.0}) {
            const cplx a = det(l, with_k2(k2)), b = det_factored(l, with_k2(k2));
            CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
        }
    }
}

TEST_CASE("det_regularized") {
    SUBCASE("limit at 0 follows k2 (k2/12 - 1) lambda") {
        // value / lambda as lambda -> 0, mpmath
        const cplx l = 1e-9;
        CHECK(std::abs(det_regularized(l, with_k2(1)) / l - (-0.91666666666666666667)) < 1e-8);
    }
    SUBCASE("leading coefficient vanishes at k2 = 12") {
        const cplx l = 1e-4;
        CHECK(std::abs(det_regularized(l, with_k2(12)) / l) < 1e-3);
        CHECK(std::abs(det_regularized(0.0, with_k2(12))) == 0.0);
    }
    SUBCASE("zero at (2 pi)^2 survives") { CHECK(std::abs(det_regularized(4 * pi * pi, with_k2(3))) < 1e-10); }
    SUBCASE("mpmath value at -3") {
        CHECK(std::abs(det_regularized(-3.0, with_k2(1)) - (-8.8751161745012429779)) < 1e-13);
    }
    SUBCASE("equals sqrt(lambda) det away from 0") {
        const cplx l(2, 5);
        CHECK(std::abs(det_regularized(l, with_k2(4)) - std::sqrt(l) * det(l, with_k2(4))) < 1e-12);
    }
}

TEST_CASE("find_eigenvalues anchors") {
    SUBCASE("mpmath roots") {
        CHECK(find_eigenvalues(with_k2(0.5), 1).transcendental_family[0].lambda ==
              Approx(9.4640494581724891085).epsilon(1e-13));
        CHECK(find_eigenvalues(with_k2(1), 1).transcendental_family[0].lambda ==
              Approx(9.0579582948074116473).epsilon(1e-13));
        CHECK(find_eigenvalues(with_k2(4), 1).transcendental_family[0].lambda ==
              Approx(6.6104932496776425278).epsilon(1e-13));
        CHECK(find_eigenvalues(with_k2(25), 1).transcendental_family[0].lambda ==
              Approx(-10.960963332849279248).epsilon(1e-13));
        CHECK(find_eigenvalues(with_k2(1), 2).transcendental_family[1].lambda ==
              Approx(88.737268248736107051).epsilon(1e-13));
    }
    SUBCASE("kappa2 = 12 has the zero root and the flag") {
        const Spectrum sp = find_eigenvalues(with_k2(12), 3);
        CHECK(std::abs(sp.transcendental_family[0].lambda) < 1e-8);
        CHECK(sp.degenerate_flag);
        CHECK_FALSE(find_eigenvalues(with_k2(11.9), 1).degenerate_flag);
    }
    SUBCASE("ground and cosine families") {
        const Spectrum sp = find_eigenvalues(with_k2(4), 4);
        CHECK(sp.ground == -4.0);
        REQUIRE(sp.cosine_family.size() == 4);
        for (int k = 1; k <= 4; ++k) CHECK(sp.cosine_family[k - 1].mu == Approx(std::pow(2 * k * pi, 2)));
    }
    SUBCASE("first twenty roots: residual and interval") {
        for (double k2 : {0.5, 1.0, 4.0, 12.0, 25.0}) {
            const Spectrum sp = find_eigenvalues(with_k2(k2), 20);
            for (const auto& r : sp.transcendental_family) {
                CHECK(r.residual < 1e-10);
                if (r.m == 1) {
                    CHECK(r.lambda > -k2);
                    CHECK(r.lambda < pi * pi);
                } else {
                    CHECK(r.lambda > std::pow((2 * r.m - 3) * pi, 2));
                    CHECK(r.lambda < std::pow((2 * r.m - 1) * pi, 2));
                }
                CHECK(r.bracket_lo <= r.lambda);
                CHECK(r.lambda <= r.bracket_hi);
            }
        }
    }
    SUBCASE("sign scan at step 1e-4 finds the same first root for kappa2 = 1") {
        const ModelParams p = with_k2(1);
        double prev = g_tilde(pi * pi, p).real(), found = 0;
        for (double l = pi * pi + 1e-4; l < 9 * pi * pi; l += 1e-4) {
            const double g = g_tilde(l, p).real();
            if ((g > 0) != (prev > 0)) {
                found = l;
                break;
            }
            prev = g;
        }
        // the low root sits below pi^2; the scan bracket (pi^2, 9 pi^2) holds the second
        CHECK(std::abs(found - find_eigenvalues(p, 2).transcendental_family[1].lambda) < 1e-4);
    }
    SUBCASE("count must be positive") {
        CHECK(code_of([] { find_eigenvalues(with_k2(1), 0); }) == ErrorCode::InvalidArgument);
    }
}

TEST_CASE("no negative root besides -kappa2 and the low root") {
    for (double k2 : {1.0, 4.0}) {
        const ModelParams p = with_k2(k2);
        double prev = g_tilde(-100 * k2, p).real();
        int changes = 0;
        for (double l = -100 * k2; l < -1e-9; l += 1e-3 * k2) {
            const double g = g_tilde(l, p).real();
            if ((g > 0) != (prev > 0)) ++changes;
            prev = g;
        }
        CHECK(changes == 0);
    }
}

TEST_CASE("det_prime") {
    SUBCASE("mpmath value at the first root for kappa2 = 4") {
        const double l1 = find_eigenvalues(with_k2(4), 1).transcendental_family[0].lambda;
        CHECK(std::abs(det_prime(l1, with_k2(4)) - 1.7494701760050780571) < 1e-12);
    }
    SUBCASE("closed form vs Richardson difference") {
        for (double k2 : {1.0, 4.0}) {
            const Spectrum sp = find_eigenvalues(with_k2(k2), 4);
            for (const auto& r : sp.transcendental_family) {
                const cplx a = det_prime(r.lambda, with_k2(k2));
                const cplx b = det_prime_richardson(r.lambda, with_k2(k2));
                CHECK(std::abs(a) > 0.0);
                CHECK(std::abs(a - b) <= 1e-8 * std::abs(a));
            }
        }
    }
    SUBCASE("negative root gives an imaginary value") {
        const double l1 = find_eigenvalues(with_k2(25), 1).transcendental_family[0].lambda;
        const cplx d = det_prime(l1, with_k2(25));
        CHECK(std::abs(d.real()) < 1e-12 * std::abs(d));
    }
    SUBCASE("errors") {
        CHECK(code_of([] { det_prime(5.0, with_k2(1)); }) == ErrorCode::NotASimpleRoot);
        CHECK(code_of([] { det_prime(0.0, with_k2(12)); }) == ErrorCode::NotASimpleRoot);
    }
}

TEST_CASE("secular residual forms agree on low roots") {
    const Spectrum sp = find_eigenvalues(with_k2(1), 3);
    for (const auto& r : sp.transcendental_family) CHECK(secular_residual_raw(r.lambda, with_k2(1)) < 1e-8);
}

TEST_CASE("forward eigenfunctions") {
    const Spectrum sp4 = find_eigenvalues(with_k2(4), 10);
    CHECK(forward_eigenfunction(sp4, Family::ground, 0, 0.5) == Approx(1.0));
    CHECK(forward_eigenfunction(sp4, Family::cosine, 1, 0.5) == Approx(-1.0));
    const Spectrum sp12 = find_eigenvalues(with_k2(12), 2);
    CHECK(forward_eigenfunction(sp12, Family::transcendental, 1, 0.75) == Approx(0.25));
    CHECK(code_of([&] { forward_eigenfunction(sp4, Family::cosine, 11, 0.1); }) == ErrorCode::IndexOutOfRange);
    CHECK(code_of([&] { forward_eigenfunction(sp4, Family::ground, 1, 0.1); }) == ErrorCode::IndexOutOfRange);

    SUBCASE("eigen equation and non-local boundary pair") {
        for (double k2 : {1.0, 4.0, 12.0, 25.0}) {
            const Spectrum sp = find_eigenvalues(with_k2(k2), 10);
            auto check = [&](Family f, int idx) {
                const double nu = eigenvalue(sp, f, idx);
                double sup = 0, scale = 0;
                for (int i = 0; i < 1000; ++i) {
                    const double x = i / 999.0;
                    const double v = forward_eigenfunction(sp, f, idx, x);
                    sup = std::max(sup, std::abs(forward_eigenfunction(sp, f, idx, x, 2) + nu * v));
                    scale = std::max(scale, std::abs(v));
                }
                CHECK(sup < 1e-8 * std::max(1.0, std::abs(nu)) * scale);
                const double i0 = trapz(2001, [&](double s) { return (1 - s) * forward_eigenfunction(sp, f, idx, s); });
                const double i1 = trapz(2001, [&](double s) { return s * forward_eigenfunction(sp, f, idx, s); });
                const double d0 = forward_eigenfunction(sp, f, idx, 0.0, 1);
                const double d1 = forward_eigenfunction(sp, f, idx, 1.0, 1);
                // trapezoid error on an eigenfunction with frequency sqrt(nu)
                const double tol = 1e-6 * (1 + std::abs(nu)) * scale * (1 + k2);
                CHECK(std::abs(d0 + k2 * i0) < tol);
                CHECK(std::abs(d1 - k2 * i1) < tol);
            };
            check(Family::ground, 0);
            for (int k = 1; k <= 10; ++k) {
                check(Family::cosine, k);
                check(Family::transcendental, k);
            }
        }
    }
}

TEST_CASE("dual eigenfunctions") {
    const Spectrum sp = find_eigenvalues(with_k2(4), 5);
    for (double y : {0.0, 0.3, 0.9}) CHECK(dual_eigenfunction(sp, Family::ground, 0, y) == 1.0);
    for (int k = 1; k <= 5; ++k) CHECK(std::abs(dual_eigenfunction(sp, Family::transcendental, k, 0.5)) < 1e-15);
    CHECK(cosine_dual_offset(1, 4.0) == Approx(-4.0 / (4 * pi * pi + 4)));
    CHECK(printed_cosine_dual_offset(2, 4.0) == Approx(1.0 / (2 * pi * (16 * pi * pi + 4))));
    CHECK(dual_eigenfunction(sp, Family::cosine, 2, 0.1) == Approx(std::cos(0.4 * pi) + cosine_dual_offset(2, 4.0)));
}

TEST_CASE("steady state") {
    const ModelParams p{4.0, 0.5, 1.0};
    CHECK(steady_state(p, 0.5) == 0.0);
    CHECK(printed_steady_state(p, 0.5) == 0.0);
    CHECK(std::abs(trapz(2001, [&](double x) { return steady_state(p, x); })) < 1e-14);
    // corrected form satisfies u'' = k2 u and the inhomogeneous boundary pair
    const double k2 = p.kappa2, ev = p.epsilon * k2 * p.voltage;
    const double i0 = trapz(4001, [&](double s) { return (1 - s) * steady_state(p, s); });
    const double i1 = trapz(4001, [&](double s) { return s * steady_state(p, s); });
    CHECK(std::abs(steady_state_derivative(p, 0.0) - (-k2 * i0 - ev)) < 1e-6);
    CHECK(std::abs(steady_state_derivative(p, 1.0) - (k2 * i1 - ev)) < 1e-6);
    // the printed profile misses both conventions by O(1)
    auto pd = [&](double x) { return (printed_steady_state(p, x + 1e-6) - printed_steady_state(p, x - 1e-6)) / 2e-6; };
    const double j0 = trapz(4001, [&](double s) { return (1 - s) * printed_steady_state(p, s); });
    CHECK(std::abs(pd(0.0) - (-k2 * j0 - ev)) > 1e-2);
    CHECK(std::abs(pd(0.0) - (-k2 * j0 + ev)) > 1e-2);
}
