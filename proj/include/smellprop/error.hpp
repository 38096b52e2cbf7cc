#pragma once

#include <stdexcept>
#include <string>

namespace smellprop {

// Exit codes surfaced by the CLI.
enum class ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kData = 2,
    kInternal = 3,
};

class Error : public std::runtime_error {
public:
    explicit Error(const std::string &what, ExitCode code)
        : std::runtime_error(what), code_(code) {}

    ExitCode code() const noexcept { return code_; }

private:
    ExitCode code_;
};

// Bad flags, bad config values, missing input files.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string &what) : Error(what, ExitCode::kUsage) {}
};

// Malformed or inconsistent input data.
class DataError : public Error {
public:
    explicit DataError(const std::string &what) : Error(what, ExitCode::kData) {}
};

class ParseError : public DataError {
public:
    ParseError(const std::string &what, std::size_t byte_offset)
        : DataError(what), byte_offset_(byte_offset) {}

    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

class AlignmentError : public DataError {
public:
    using DataError::DataError;
};

// Every token overlapping the span has a null probability.
class UnscorableSpanError : public AlignmentError {
public:
    using AlignmentError::AlignmentError;
};

// A violated internal invariant; indicates a bug rather than bad input.
class InvariantError : public Error {
public:
    explicit InvariantError(const std::string &what) : Error(what, ExitCode::kInternal) {}
};

}  // namespace smellprop
