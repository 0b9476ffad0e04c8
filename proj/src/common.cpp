#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "pnpk/error.hpp"
#include "pnpk/parallel.hpp"
#include "pnpk/quadrature.hpp"
#include "pnpk/types.hpp"

namespace pnpk {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::PoleAtZero: return "PoleAtZero";
        case ErrorCode::NotASimpleRoot: return "NotASimpleRoot";
        case ErrorCode::BracketFailure: return "BracketFailure";
        case ErrorCode::NearSeriesPole: return "NearSeriesPole";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::SingularDiscreteSystem: return "SingularDiscreteSystem";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::TimeTooSmall: return "TimeTooSmall";
        case ErrorCode::ContourThroughPole: return "ContourThroughPole";
        case ErrorCode::WrongHalfPlane: return "WrongHalfPlane";
        case ErrorCode::CalibrationAmbiguous: return "CalibrationAmbiguous";
        case ErrorCode::SolverSingular: return "SolverSingular";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::InvalidStart: return "InvalidStart";
        case ErrorCode::GridMismatch: return "GridMismatch";
    }
    return "Unknown";
}

void ModelParams::validate() const {
    if (!(kappa2 > 0) || !std::isfinite(kappa2)) throw Error(ErrorCode::InvalidArgument, "kappa2 must be > 0");
    if (!(epsilon > 0) || !std::isfinite(epsilon)) throw Error(ErrorCode::InvalidArgument, "epsilon must be > 0");
    if (!std::isfinite(voltage)) throw Error(ErrorCode::InvalidArgument, "voltage must be finite");
}

void ScalarField::validate() const {
    if (values.size() < 2) throw Error(ErrorCode::InvalidArgument, "ScalarField needs at least 2 samples");
    for (double v : values) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "ScalarField holds a non-finite value");
    }
}

std::vector<double> trapezoid_weights(std::size_t n) {
    std::vector<double> w(n, 1.0 / double(n - 1));
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

double trapezoid(const std::vector<double>& values) {
    const std::size_t n = values.size();
    double acc = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < n; ++i) acc += values[i];
    return acc / double(n - 1);
}

unsigned thread_count() {
    if (const char* env = std::getenv("PNPK_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return unsigned(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(thread_count(), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t b = w * chunk, e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back(body, b, e);
    }
    for (auto& t : pool) t.join();
}

}  // namespace pnpk
