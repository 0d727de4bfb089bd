#pragma once

#include <cstdio>
#include <string>

namespace qps {

// Shortest-round-trip-ish numeric formatting; every CSV/JSON number goes
// through here so reruns are byte-identical.
inline std::string fmt_g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace qps
