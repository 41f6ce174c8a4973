#pragma once

#include <cstdio>
#include <string>

namespace cref {

// Deterministic float formatting: fixed significant-digit count, shortest
// form, locale-independent. Default 9 significant digits.
inline std::string format_g(double v, int precision = 9) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

} // namespace cref
