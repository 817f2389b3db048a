#pragma once

#include <stdexcept>
#include <string>

namespace restyle {

/// File could not be read, decoded, or written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Input violated a documented precondition (dimensions, ranges, emptiness).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace restyle
