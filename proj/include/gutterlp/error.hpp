#ifndef GUTTERLP_ERROR_HPP
#define GUTTERLP_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gutterlp {

enum class ErrorCode {
    InvalidArgument,
    SyntaxError,
    DimensionMismatch,
    ZeroNormal,
    DuplicateIndex,
    DegenerateBasis,
    RankDeficient,
    ScaleExceeded,
    NoObjective,
    Io,
};

/// Base exception for every failure raised by the library. The C API maps
/// `code()` onto its status enum.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class ZeroNormalError : public Error {
public:
    explicit ZeroNormalError(std::size_t index)
        : Error(ErrorCode::ZeroNormal, "constraint " + std::to_string(index) + " has a zero normal"),
          index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, const std::string& message)
        : Error(ErrorCode::SyntaxError, "line " + std::to_string(line) + ": " + message), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

inline void require_dimension(std::size_t expected, std::size_t actual, const char* what) {
    if (expected != actual) {
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": expected dimension " +
                                                      std::to_string(expected) + ", got " +
                                                      std::to_string(actual));
    }
}

}  // namespace gutterlp

#endif  // GUTTERLP_ERROR_HPP
