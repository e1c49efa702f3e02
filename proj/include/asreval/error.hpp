#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace asreval {

// Base of every error thrown by the library. Callers that only need a
// diagnostic can catch this and print what().
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file. line is 1-based; 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(std::string path, std::size_t line, const std::string& what)
        : Error(path + ":" + std::to_string(line) + ": " + what),
          path_(std::move(path)), line_(line) {}

    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

// A well-formed value that breaks a domain invariant (rating out of
// range, probability outside [0,1], ...).
class ValidationError : public Error {
public:
    ValidationError(std::string record_id, std::string detail)
        : Error("record '" + record_id + "': " + detail),
          record_id_(std::move(record_id)), detail_(std::move(detail)) {}

    const std::string& record_id() const noexcept { return record_id_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string record_id_;
    std::string detail_;
};

// Precondition violated on a pure function argument.
class DomainError : public Error {
public:
    using Error::Error;
};

// A numerical fit could not be produced (rank deficiency, bad weights).
class FitError : public Error {
public:
    using Error::Error;
};

// Transport-level remote failure. Retryable.
class TransportError : public Error {
public:
    using Error::Error;
};

// Remote answered, but the answer is unusable. Not retryable.
class ProtocolError : public Error {
public:
    using Error::Error;
};

class MissingChannelError : public Error {
public:
    MissingChannelError(std::string record_id, std::string channel)
        : Error("record '" + record_id + "': missing channel '" + channel + "'"),
          record_id_(std::move(record_id)), channel_(std::move(channel)) {}

    const std::string& record_id() const noexcept { return record_id_; }
    const std::string& channel() const noexcept { return channel_; }

private:
    std::string record_id_;
    std::string channel_;
};

}  // namespace asreval
