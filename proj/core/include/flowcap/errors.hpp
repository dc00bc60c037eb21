#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flowcap {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A moment of a configured distribution does not exist (diverges).
class UndefinedMoment : public Error {
public:
    using Error::Error;
};

/// Distribution or model parameters outside their domain.
class InvalidParameters : public Error {
public:
    using Error::Error;
};

/// A configuration value (simulation, ingest, analyzer, CLI) is invalid.
/// `key()` names the offending setting when one is known.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

enum class FitErrorKind {
    InsufficientWorkingData,
    DegenerateData,
    InsufficientSaturationData,
    NoSaturationObserved,
    ParallelLines,
    NegativeIntersection,
    EmptyInput,
};

std::string_view to_string(FitErrorKind kind) noexcept;

class FitError : public Error {
public:
    FitError(FitErrorKind kind, const std::string& detail)
        : Error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

    FitErrorKind kind() const noexcept { return kind_; }

private:
    FitErrorKind kind_;
};

enum class ParseErrorKind {
    BadVersion,
    BadCount,
    TruncatedDatagram,
    ClockInconsistent,
};

std::string_view to_string(ParseErrorKind kind) noexcept;

/// NetFlow decoding failure; `offset()` is the byte position the problem was
/// detected at (0 for errors not tied to a byte position).
class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, std::size_t offset, const std::string& detail)
        : Error(std::string(to_string(kind)) + " at byte " + std::to_string(offset) + ": " + detail),
          kind_(kind),
          offset_(offset) {}

    ParseErrorKind kind() const noexcept { return kind_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    ParseErrorKind kind_;
    std::size_t offset_;
};

/// Sample CSV row that violates the schema. Line numbers are 1-based and
/// count the header line.
class MalformedRow : public Error {
public:
    MalformedRow(std::size_t line, const std::string& detail)
        : Error("malformed row at line " + std::to_string(line) + ": " + detail), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace flowcap
