#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qsem {

// Base class for everything this library throws on purpose.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed textual input (type expressions, lexicon files, instances).
// `offset` is a byte offset into the offending string where known.
struct input_error : error {
    explicit input_error(const std::string& what, std::size_t offset = npos)
        : error(what), offset(offset) {}
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t offset;
};

// Structural misuse of an operation: unknown wire labels, dimension
// mismatches, plans that do not fit the state they are applied to.
struct dimension_error : error {
    using error::error;
};

// A configured resource limit was exceeded (dense simulation cap).
struct config_error : error {
    using error::error;
};

// A numeric invariant failed at runtime: impure contraction output,
// non-uniform prepared superposition, ill-conditioned reconstruction.
// Carries the measured defect so callers can report it.
struct numeric_error : error {
    explicit numeric_error(const std::string& what, double defect = 0.0)
        : error(what), defect(defect) {}
    double defect;
};

} // namespace qsem
