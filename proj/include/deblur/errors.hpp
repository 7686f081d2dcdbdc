#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace deblur {

/// Failure categories. The CLI maps these onto process exit codes.
enum class ErrorKind {
    InvalidArgument,
    SingularMatrix,
    RankDeficient,
    ConvergenceFailure,
    SingularComponent,
    DegenerateThreshold,
    DecodeFailure,
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& what) : Error(ErrorKind::InvalidArgument, what) {}
};

struct SingularMatrixError : Error {
    explicit SingularMatrixError(const std::string& what) : Error(ErrorKind::SingularMatrix, what) {}
};

struct RankDeficientError : Error {
    explicit RankDeficientError(const std::string& what) : Error(ErrorKind::RankDeficient, what) {}
};

struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& what) : Error(ErrorKind::ConvergenceFailure, what) {}
};

struct SingularComponentError : Error {
    SingularComponentError(const std::string& what, std::size_t index)
        : Error(ErrorKind::SingularComponent, what), index_(index) {}

    /// Zero-based index of the offending singular value.
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

struct DegenerateThresholdError : Error {
    explicit DegenerateThresholdError(const std::string& what) : Error(ErrorKind::DegenerateThreshold, what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace deblur
