#pragma once

#include <stdexcept>
#include <string>

namespace ef {

enum class ErrorCode {
    invalid_input = 1,
    degenerate_quadric = 2,
    not_an_ellipsoid = 3,
    fit_failed = 4,
    orientation_ambiguous = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

struct InvalidInput : Error {
    explicit InvalidInput(const std::string& msg) : Error(ErrorCode::invalid_input, msg) {}
};

struct DegenerateQuadric : Error {
    explicit DegenerateQuadric(const std::string& msg) : Error(ErrorCode::degenerate_quadric, msg) {}
};

struct NotAnEllipsoid : Error {
    explicit NotAnEllipsoid(const std::string& msg) : Error(ErrorCode::not_an_ellipsoid, msg) {}
};

struct FitFailed : Error {
    explicit FitFailed(const std::string& msg) : Error(ErrorCode::fit_failed, msg) {}
};

struct OrientationAmbiguous : Error {
    explicit OrientationAmbiguous(const std::string& msg) : Error(ErrorCode::orientation_ambiguous, msg) {}
};

} // namespace ef
