#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pnpk {

enum class ErrorCode {
    InvalidArgument,
    PoleAtZero,
    NotASimpleRoot,
    BracketFailure,
    NearSeriesPole,
    SingularSystem,
    SingularDiscreteSystem,
    IndexOutOfRange,
    TimeTooSmall,
    ContourThroughPole,
    WrongHalfPlane,
    CalibrationAmbiguous,
    SolverSingular,
    NonFiniteState,
    InvalidStart,
    GridMismatch,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace pnpk
