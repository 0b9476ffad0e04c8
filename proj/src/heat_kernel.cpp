#include "pnpk/heat_kernel.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pnpk/error.hpp"
#include "pnpk/parallel.hpp"
#include "pnpk/quadrature.hpp"
#include "pnpk/resolvent.hpp"
#include "pnpk/series.hpp"

namespace pnpk {

namespace {

constexpr double pi = std::numbers::pi;

void require_time(double t, const KernelConfig& config) {
    if (!(t >= config.min_time)) {
        throw Error(ErrorCode::TimeTooSmall,
                    "t = " + std::to_string(t) + " is below min_time = " + std::to_string(config.min_time));
    }
}

int neumann_mode_count(const KernelConfig& c) {
    return int(std::ceil(std::sqrt(std::log(10.0 / c.series_tol) / (pi * pi * c.min_time)))) + 2;
}

// sinc in the real variable, entire in lambda
double real_sinc(double lambda, double root, double w) {
    if (lambda > 0) return std::sin(root * w) / root;
    if (lambda < 0) return std::sinh(root * w) / root;
    return w;
}

}  // namespace

std::string KernelCalibration::hash() const {
    // FNV-1a over the printed factors
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.17g|%.17g|%.17g|%.17g", stationary.value, transcendental.value,
                  cosine.value, neumann.value);
    std::uint64_t h = 1469598103934665603ull;
    for (const char* p = buf; *p; ++p) {
        h ^= std::uint64_t(static_cast<unsigned char>(*p));
        h *= 1099511628211ull;
    }
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::pair<std::string, double>> calibration_candidates(const ModelParams& params) {
    std::vector<std::pair<std::string, double>> c;
    for (double v : {0.5, 1.0, 2.0, 4.0}) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%g", v);
        c.emplace_back(buf, v);
        c.emplace_back(std::string("-") + buf, -v);
    }
    c.emplace_back("1/cosh(kappa/2)", 1.0 / std::cosh(std::sqrt(params.kappa2) / 2));
    return c;
}

KernelCalibration frozen_kernel_calibration(const ModelParams& params) {
    KernelCalibration c;
    c.stationary = {1.0 / std::cosh(std::sqrt(params.kappa2) / 2), "1/cosh(kappa/2)", 0.0};
    c.transcendental = {4.0, "4", 0.0};
    c.cosine = {2.0, "2", 0.0};
    c.neumann = {2.0, "2", 0.0};
    c.candidates = calibration_candidates(params);
    return c;
}

int required_mode_count(double min_time, double series_tol) {
    if (!(min_time > 0) || !(series_tol > 0 && series_tol < 1)) {
        throw Error(ErrorCode::InvalidArgument, "min_time > 0 and 0 < series_tol < 1 required");
    }
    return int(std::ceil(std::sqrt(std::log(10.0 / series_tol) / (4 * pi * pi * min_time)))) + 2;
}

KernelConfig make_kernel_config(const ModelParams& params, double min_time, double series_tol) {
    KernelConfig c;
    c.min_time = min_time;
    c.series_tol = series_tol;
    c.mode_count = required_mode_count(min_time, series_tol);
    c.calibration = frozen_kernel_calibration(params);
    return c;
}

KernelSlice::KernelSlice(const Spectrum& sp, const KernelConfig& config, double y)
    : kappa_(std::sqrt(sp.params.kappa2)), k2_(sp.params.kappa2), min_time_(config.min_time) {
    const int M = config.mode_count;
    if (int(sp.transcendental_family.size()) < M || int(sp.cosine_family.size()) < M) {
        throw Error(ErrorCode::InvalidArgument, "spectrum holds fewer members than mode_count");
    }
    if (!(y >= 0.0 && y <= 1.0)) throw Error(ErrorCode::InvalidArgument, "y outside [0,1]");
    fs_ = config.calibration.stationary.value;
    ft_ = config.calibration.transcendental.value;
    fc_ = config.calibration.cosine.value;
    stationary_ = kappa_ * std::cosh(kappa_ / 2) / (2 * std::sinh(kappa_ / 2));
    const ModelParams& p = sp.params;
    for (int m = 0; m < M; ++m) {
        const double l = sp.transcendental_family[m].lambda;
        lambda_.push_back(l);
        root_.push_back(std::sqrt(std::abs(l)));
        const double gp = g_tilde_prime(l, p).real();
        tcoef_.push_back(kappa2_a_at_root(l, y, k2_) / (2 * gp));
    }
    for (int k = 1; k <= M; ++k) {
        ccoef_.push_back(std::cos(2 * k * pi * y) + cosine_dual_offset(k, k2_));
    }
}

std::array<double, 3> KernelSlice::bases(double x, double t) const {
    const double w = x - 0.5;
    const double s = stationary_ * std::cosh(kappa_ * w);
    double tr = 0.0, co = 0.0;
    for (std::size_t m = 0; m < lambda_.size(); ++m) {
        tr += tcoef_[m] * real_sinc(lambda_[m], root_[m], w) * std::exp(-(lambda_[m] + k2_) * t);
    }
    for (std::size_t k = 0; k < ccoef_.size(); ++k) {
        const double a = 2.0 * double(k + 1) * pi;
        co += std::cos(a * x) * ccoef_[k] * std::exp(-(a * a + k2_) * t);
    }
    return {s, tr, co};
}

double KernelSlice::value(double x, double t) const {
    if (!(t >= min_time_)) {
        throw Error(ErrorCode::TimeTooSmall, "t = " + std::to_string(t) + " is below min_time");
    }
    const auto b = bases(x, t);
    return fs_ * b[0] + ft_ * b[1] + fc_ * b[2];
}

double kernel(const ModelParams& params, double x, double y, double t, const Spectrum& sp, const KernelConfig& config) {
    params.validate();
    require_time(t, config);
    return KernelSlice(sp, config, y).value(x, t);
}

ScalarField kernel_field(const ModelParams& params, double y, double t, int grid_size, const Spectrum& sp,
                         const KernelConfig& config) {
    params.validate();
    require_time(t, config);
    if (grid_size < 2) throw Error(ErrorCode::InvalidArgument, "grid_size must be >= 2");
    const KernelSlice slice(sp, config, y);
    ScalarField out{std::size_t(grid_size)};
    parallel_for(out.grid_size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out[i] = slice.value(out.x(i), t);
    });
    return out;
}

double neumann_kernel(double x, double y, double t, const KernelConfig& config) {
    require_time(t, config);
    const int K = neumann_mode_count(config);
    double sum = 0.0;
    for (int k = 1; k <= K; ++k) {
        sum += std::cos(k * pi * x) * std::cos(k * pi * y) * std::exp(-k * k * pi * pi * t);
    }
    return 1.0 + config.calibration.neumann.value * sum;
}

ScalarField neumann_kernel_field(double y, double t, int grid_size, const KernelConfig& config) {
    ScalarField out{std::size_t(grid_size)};
    for (std::size_t i = 0; i < out.grid_size(); ++i) out[i] = neumann_kernel(out.x(i), y, t, config);
    return out;
}

BromwichConfig BromwichConfig::for_params(const ModelParams& params) {
    BromwichConfig c;
    c.contour_abscissa = -params.kappa2 - 1.0;
    return c;
}

namespace {

// sum over the three nearest images of e^{-w d} / (2 w) and of their inverse transforms
cplx image_resolvent(cplx lambda, double x, double y) {
    const cplx w = std::sqrt(-lambda);
    cplx acc = 0.0;
    for (double d : {std::abs(x - y), x + y, 2.0 - x - y}) acc += std::exp(-w * d) / (2.0 * w);
    return acc;
}

double image_kernel(double x, double y, double t) {
    double acc = 0.0;
    for (double d : {std::abs(x - y), x + y, 2.0 - x - y}) acc += std::exp(-d * d / (4 * t)) / std::sqrt(4 * pi * t);
    return acc;
}

template <class R>
double contour_integral(double t, double x, double y, const BromwichConfig& bc, R&& resolvent_at,
                        bool parallel = true) {
    if (bc.node_count < 64 || !(bc.half_height > 0)) {
        throw Error(ErrorCode::InvalidArgument, "node_count >= 64 and half_height > 0 required");
    }
    const int n = bc.node_count;
    const double h = 2.0 * bc.half_height / double(n - 1);
    std::vector<double> parts(std::size_t(n), 0.0);
    auto body = [&](std::size_t b, std::size_t e) {
        for (std::size_t j = b; j < e; ++j) {
            const double eta = -bc.half_height + double(j) * h;
            const cplx lambda(bc.contour_abscissa, eta);
            cplx r = resolvent_at(lambda);
            if (bc.subtract_images) r -= image_resolvent(lambda, x, y);
            const double wgt = (j == 0 || j + 1 == std::size_t(n)) ? 0.5 : 1.0;
            parts[j] = wgt * (std::exp(-lambda * t) * r).real();
        }
    };
    if (parallel) {
        parallel_for(std::size_t(n), body);
    } else {
        body(0, std::size_t(n));
    }
    double acc = 0.0;
    for (double v : parts) acc += v;
    double out = acc * h / (2 * pi);
    if (bc.subtract_images) out += image_kernel(x, y, t);
    return out;
}

void check_contour(const std::vector<double>& poles, const BromwichConfig& bc) {
    const int n = bc.node_count;
    const double h = 2.0 * bc.half_height / double(n - 1);
    // nodes closest to the real axis
    const double eta = std::abs(-bc.half_height + std::round(bc.half_height / h) * h);
    for (double p : poles) {
        if (std::abs(cplx(bc.contour_abscissa - p, eta)) < kPoleGuard * std::max(1.0, std::abs(p))) {
            throw Error(ErrorCode::ContourThroughPole, "contour node next to pole " + std::to_string(p));
        }
    }
}

}  // namespace

namespace {

// closed: cos/sinc closed form of the resolvent (cheap, used for whole fields)
double bromwich_point(const ModelParams& params, double x, double y, double t, const Spectrum& sp,
                      const BromwichConfig& bc, bool closed, bool parallel) {
    params.validate();
    if (!(t >= 1e-2)) throw Error(ErrorCode::TimeTooSmall, "contour inversion needs t >= 1e-2");
    std::vector<double> poles{-params.kappa2, 0.0};
    for (const auto& r : sp.transcendental_family) poles.push_back(r.lambda);
    check_contour(poles, bc);
    if (!(bc.contour_abscissa < -params.kappa2)) {
        throw Error(ErrorCode::InvalidArgument, "contour must lie in Re lambda < -kappa2");
    }
    const double k2 = params.kappa2;
    auto eval = [&](cplx l) { return closed ? resolvent_closed(l, x, y, k2) : resolvent(l, x, y, k2, 1e-12); };
    if (!bc.subtract_images) {
        return std::exp(-k2 * t) * contour_integral(t, x, y, bc, [&](cplx l) { return eval(l); }, parallel);
    }
    // The non-local fluxes are about -k2 (1-y)/w^2 at 0 and k2 y/w^2 at 1 for
    // large w = sqrt(-lambda). The boundary layers they drive,
    // k2 (1-y) e^{-w x} (1/w^3 + k2/w^5) and the mirror one at x = 1, decay
    // too slowly along the contour, so they are removed and inverted exactly:
    // e^{-a w}/w^{n+2} <-> (4t)^{n/2} i^n erfc(a / (2 sqrt t)), n = 1, 3.
    auto layer = [&](cplx l) {
        const cplx w = std::sqrt(-l);
        const cplx w3 = w * w * w;
        const cplx shape = (1.0 - y) * std::exp(-w * x) + y * std::exp(-w * (1.0 - x));
        return k2 * shape * (1.0 / w3 + k2 / (w3 * w * w));
    };
    auto layer_inverse = [&](double a) {
        const double z = a / (2 * std::sqrt(t));
        const double i0 = std::erfc(z);
        const double i1 = std::exp(-z * z) / std::sqrt(pi) - z * i0;
        const double i2 = (i0 - 2 * z * i1) / 4;
        const double i3 = (i1 - 2 * z * i2) / 6;
        return std::sqrt(4 * t) * i1 + k2 * std::pow(4 * t, 1.5) * i3;
    };
    const double v = contour_integral(t, x, y, bc, [&](cplx l) { return eval(l) - layer(l); }, parallel);
    return std::exp(-k2 * t) * (v + k2 * ((1.0 - y) * layer_inverse(x) + y * layer_inverse(1.0 - x)));
}

}  // namespace

double bromwich_kernel(const ModelParams& params, double x, double y, double t, const Spectrum& sp,
                       const BromwichConfig& bc) {
    return bromwich_point(params, x, y, t, sp, bc, false, true);
}

ScalarField bromwich_kernel_field(const ModelParams& params, double y, double t, int grid_size, const Spectrum& sp,
                                  const BromwichConfig& bc) {
    if (grid_size < 2) throw Error(ErrorCode::InvalidArgument, "grid_size must be >= 2");
    ScalarField out{std::size_t(grid_size)};
    bromwich_point(params, 0.5, y, t, sp, bc, true, false);  // argument checks before fanning out
    parallel_for(out.grid_size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out[i] = bromwich_point(params, out.x(i), y, t, sp, bc, true, false);
    });
    return out;
}

double bromwich_neumann_kernel(double x, double y, double t, const BromwichConfig& bc) {
    if (!(t >= 1e-2)) throw Error(ErrorCode::TimeTooSmall, "contour inversion needs t >= 1e-2");
    check_contour({0.0}, bc);
    if (!(bc.contour_abscissa < 0)) throw Error(ErrorCode::InvalidArgument, "contour must lie in Re lambda < 0");
    return contour_integral(t, x, y, bc, [&](cplx l) { return neumann_resolvent(l, x, y, 1e-12); });
}

double laplace_check(const ModelParams& params, cplx lambda, double x, double y, const Spectrum& sp,
                     const KernelConfig& config) {
    params.validate();
    const double k2 = params.kappa2;
    const double decay = lambda.real() + k2;
    if (!(decay < 0)) throw Error(ErrorCode::WrongHalfPlane, "Re lambda must be < -kappa2");
    const double d = std::min({std::abs(x - y), x + y, 2.0 - x - y});
    if (!(d > 1e-3)) throw Error(ErrorCode::InvalidArgument, "laplace_check needs x and y apart");
    const double t0 = d * d / 120.0;

    KernelConfig cfg = config;
    cfg.min_time = std::min(config.min_time, t0);
    cfg.mode_count = std::max(config.mode_count, required_mode_count(cfg.min_time, cfg.series_tol));
    const Spectrum* spp = &sp;
    Spectrum local;
    if (int(sp.transcendental_family.size()) < cfg.mode_count) {
        local = find_eigenvalues(params, cfg.mode_count);
        spp = &local;
    }
    const KernelSlice slice(*spp, cfg, y);
    const double kap = std::sqrt(k2);
    const double sup = cfg.calibration.stationary.value * kap * std::cosh(kap / 2) * std::cosh(kap / 2) /
                       (2 * std::sinh(kap / 2));
    const double T = std::max(1.0, std::log(sup / (1e-8 * std::abs(decay))) / std::abs(decay));

    using boost::math::quadrature::gauss_kronrod;
    auto f_re = [&](double t) { return (std::exp((lambda + k2) * t) * slice.value(x, t)).real(); };
    auto f_im = [&](double t) { return (std::exp((lambda + k2) * t) * slice.value(x, t)).imag(); };
    double err = 0.0;
    const double re = gauss_kronrod<double, 31>::integrate(f_re, t0, T, 20, 1e-12, &err);
    const double im = lambda.imag() == 0.0 ? 0.0 : gauss_kronrod<double, 31>::integrate(f_im, t0, T, 20, 1e-12, &err);
    return std::abs(cplx(re, im) - resolvent(lambda, x, y, k2));
}

double chapman_kolmogorov_residual(const ModelParams& params, double x, double y, double t, double s,
                                   const Spectrum& sp, const KernelConfig& config, int quad_size) {
    params.validate();
    require_time(t, config);
    require_time(s, config);
    if (quad_size < 3) throw Error(ErrorCode::InvalidArgument, "quad_size must be >= 3");
    const KernelSlice from_y(sp, config, y);
    const auto n = std::size_t(quad_size);
    std::vector<double> prod(n);
    parallel_for(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const double z = double(i) / double(n - 1);
            prod[i] = KernelSlice(sp, config, z).value(x, t) * from_y.value(z, s);
        }
    });
    const double lhs = trapezoid(prod);
    return std::abs(lhs - from_y.value(x, t + s));
}

}  // namespace pnpk
