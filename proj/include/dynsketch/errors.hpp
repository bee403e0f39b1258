#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dynsketch {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input file could not be parsed; carries the 1-based line number.
struct ParseError : Error {
    ParseError(std::size_t line_number, const std::string& message)
        : Error("line " + std::to_string(line_number) + ": " + message), line(line_number) {}
    std::size_t line;
};

struct InvalidQueryError : Error {
    using Error::Error;
};

struct InvalidCutError : Error {
    using Error::Error;
};

struct ZeroInverseError : Error {
    using Error::Error;
};

struct CapacityOverflowError : Error {
    using Error::Error;
};

struct SizeLimitError : Error {
    using Error::Error;
};

struct ContainerFormatError : Error {
    using Error::Error;
};

struct BuildError : Error {
    using Error::Error;
};

}  // namespace dynsketch
