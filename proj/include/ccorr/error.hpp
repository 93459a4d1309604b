#pragma once

#include <stdexcept>
#include <string>

namespace ccorr {

/// Broad classification used by the CLI to choose an exit code.
enum class ErrorKind {
    InvalidParameter,
    InvalidRegime,
    InvalidRegion,
    InvalidPayoff,
    InvalidData,
    Shape,
    NotImplemented,
    Config,
    Numeric,
    Resource,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

    /// True for failures caused by the inputs rather than by the numerics.
    [[nodiscard]] bool is_validation() const noexcept {
        return kind_ != ErrorKind::Numeric && kind_ != ErrorKind::Resource;
    }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) {
        throw Error(kind, what);
    }
}

}  // namespace ccorr
