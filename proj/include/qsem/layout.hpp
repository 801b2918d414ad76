#pragma once

#include <cstddef>
#include <vector>

#include "qsem/errors.hpp"

namespace qsem {

// Row-major index arithmetic over a list of factor dimensions.
// The first factor varies slowest, matching how amplitudes are stored
// and dumped everywhere in this library.

inline std::size_t total_dim(const std::vector<std::size_t>& dims) {
    std::size_t n = 1;
    for (std::size_t d : dims) {
        if (d == 0) throw dimension_error("zero-dimensional factor");
        n *= d;
    }
    return n;
}

inline std::vector<std::size_t> row_major_strides(const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> s(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
    return s;
}

inline std::size_t flatten(const std::vector<std::size_t>& digits,
                           const std::vector<std::size_t>& strides) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) idx += digits[i] * strides[i];
    return idx;
}

inline std::vector<std::size_t> unflatten(std::size_t index,
                                          const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> digits(dims.size());
    for (std::size_t i = dims.size(); i-- > 0;) {
        digits[i] = index % dims[i];
        index /= dims[i];
    }
    return digits;
}

// Odometer over a dimension list; visits indices in row-major order.
// `digits` must start zero-filled. Returns false after the last index.
inline bool advance(std::vector<std::size_t>& digits, const std::vector<std::size_t>& dims) {
    for (std::size_t i = digits.size(); i-- > 0;) {
        if (++digits[i] < dims[i]) return true;
        digits[i] = 0;
    }
    return false;
}

} // namespace qsem
