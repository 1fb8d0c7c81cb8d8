#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace bicontact {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Expression text that does not match the grammar, with a 0-based offset.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A function evaluated outside its domain (tan pole, log of a non-positive
/// number, ...), or an evaluation that produced a non-finite value.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Derivative requested beyond the supported dual-number nesting.
class DepthError : public Error {
public:
    using Error::Error;
};

/// A point where a contact form degenerates (alpha ^ d alpha ~ 0) or a form
/// vanishes, so a Reeb field or kernel plane is undefined.
class DegeneratePointError : public Error {
public:
    DegeneratePointError(const std::string& what, const std::array<double, 3>& where)
        : Error(what), where_(where) {}
    const std::array<double, 3>& where() const noexcept { return where_; }

private:
    std::array<double, 3> where_;
};

/// A trajectory left its chart through a non-periodic face.
class ChartExitError : public Error {
public:
    ChartExitError(const std::string& what, std::string face, double time)
        : Error(what), face_(std::move(face)), time_(time) {}
    const std::string& face() const noexcept { return face_; }
    double time() const noexcept { return time_; }

private:
    std::string face_;
    double time_;
};

/// Model or profile construction with parameters that violate an invariant.
class InvariantError : public Error {
public:
    using Error::Error;
};

/// Seam identity broken beyond tolerance. The identity is exact, so this
/// always indicates a construction bug.
class SeamMismatchError : public Error {
public:
    using Error::Error;
};

}  // namespace bicontact
