#pragma once

#include <stdexcept>
#include <string>

namespace steklab {

// Error taxonomy used across the library. Callers that want to distinguish
// failure modes catch the specific type; everything derives from Error.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument values (non-positive lengths, out-of-range indices, ...).
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Inconsistent combinatorial structure (disconnected graphs, bad gluings).
struct StructuralError : Error {
    explicit StructuralError(const std::string& msg) : Error(msg) {}
};

// A configured resource cap would be exceeded. Never silently truncate.
struct CapacityError : Error {
    explicit CapacityError(const std::string& msg) : Error(msg) {}
};

// A chart realization degenerated numerically.
struct GeometricError : Error {
    explicit GeometricError(const std::string& msg) : Error(msg) {}
};

// FEM assembly or solve failure.
struct AssemblyError : Error {
    explicit AssemblyError(const std::string& msg) : Error(msg) {}
};

// Config file problems, with field context where possible.
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

}  // namespace steklab
