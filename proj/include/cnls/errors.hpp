#pragma once

#include <stdexcept>
#include <string>

namespace cnls {

// Error categories map to CLI exit codes: validation -> 2, numerical -> 3.
enum class ErrorCategory { validation, numerical };

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message,
          ErrorCategory category = ErrorCategory::validation)
        : std::runtime_error(message), kind_(std::move(kind)), category_(category) {}

    const std::string& kind() const noexcept { return kind_; }
    ErrorCategory category() const noexcept { return category_; }
    int exit_code() const noexcept { return category_ == ErrorCategory::validation ? 2 : 3; }

private:
    std::string kind_;
    ErrorCategory category_;
};

struct ZeroCoefficientsError : Error {
    explicit ZeroCoefficientsError(const std::string& msg = "both coupling constants are zero")
        : Error("ZeroCoefficients", msg) {}
};

struct WrongRegimeError : Error {
    explicit WrongRegimeError(const std::string& msg)
        : Error("WrongRegime", msg) {}
};

struct ZeroAmplitudeError : Error {
    explicit ZeroAmplitudeError(const std::string& msg)
        : Error("ZeroAmplitude", msg) {}
};

struct ZeroTimeError : Error {
    explicit ZeroTimeError(const std::string& msg = "operator undefined at t = 0")
        : Error("ZeroTime", msg) {}
};

struct StepUnderflowError : Error {
    explicit StepUnderflowError(const std::string& msg)
        : Error("StepUnderflow", msg, ErrorCategory::numerical) {}
};

struct DomainExhaustionError : Error {
    explicit DomainExhaustionError(const std::string& msg)
        : Error("DomainExhaustion", msg, ErrorCategory::numerical) {}
};

struct NonFiniteError : Error {
    explicit NonFiniteError(const std::string& msg)
        : Error("NonFinite", msg, ErrorCategory::numerical) {}
};

struct InsufficientDataError : Error {
    explicit InsufficientDataError(const std::string& msg)
        : Error("InsufficientData", msg) {}
};

struct NonPositiveValueError : Error {
    explicit NonPositiveValueError(const std::string& msg)
        : Error("NonPositiveValue", msg) {}
};

struct GridMismatchError : Error {
    explicit GridMismatchError(const std::string& msg)
        : Error("GridMismatch", msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg)
        : Error("ConfigError", msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg)
        : Error("IoError", msg) {}
};

} // namespace cnls
