#pragma once

#include <stdexcept>
#include <string>

namespace deformesh {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

class SeedingError : public Error {
public:
    using Error::Error;
};

class ExtractionError : public Error {
public:
    using Error::Error;
};

/// Parse or file-system failure. `line` is 1-based, 0 when not applicable.
class IoError : public Error {
public:
    IoError(const std::string& what, int line = 0)
        : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace deformesh
