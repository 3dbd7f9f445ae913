#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace condense {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite or otherwise out-of-domain numeric input.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Operation is not defined for the given activation or configuration
/// (e.g. multiplicity queries on relu).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration, shape mismatch, or index out of range.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Direction is undefined because a vector has zero norm.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// A prediction has no well-defined answer (zero sum vector, zero polynomial).
class DegenerateError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
public:
    DivergenceError(std::size_t epoch, const std::string& what)
        : Error(what), epoch_(epoch) {}
    std::size_t epoch() const noexcept { return epoch_; }

private:
    std::size_t epoch_;
};

/// Malformed binary or text input; carries the byte offset where parsing failed.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& what)
        : Error(what), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace condense
