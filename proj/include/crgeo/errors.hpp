#pragma once

#include <stdexcept>
#include <string>

namespace crgeo {

/// Malformed expression or manifold file. Carries a byte offset into the
/// parsed text; the manifold loader upgrades it to line/column.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, std::size_t offset)
        : std::runtime_error(std::move(msg)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation hit a domain fault (division by zero, log of a non-positive
/// value, sqrt of a negative value, ...).
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A construction refused to run because its hypotheses fail numerically
/// (e.g. a deformed connection requested on a structure that is not normal).
class GateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Degenerate or inconsistent numerical input: singular metric, rank
/// deficiency where full rank is required, mismatched chart, bad valence.
class NumericsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file could not be opened, read, or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace crgeo
