#pragma once

#include <charconv>
#include <string>

namespace mhdlab {

/// Shortest round-trip decimal representation (<= 17 significant digits),
/// the fixed float format of every emitted report and CSV.
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

} // namespace mhdlab
