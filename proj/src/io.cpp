#include "rosctl/io.hpp"

#include <charconv>
#include <cmath>

namespace rosctl::io {

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string dump(const Json& j, int indent) { return j.dump(indent) + "\n"; }

}  // namespace rosctl::io
