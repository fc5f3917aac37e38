#include "nmrsim/format_util.hpp"

#include <charconv>
#include <stdexcept>

namespace nmrsim {

std::string shortest_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) {
        throw std::runtime_error("shortest_double: to_chars failed");
    }
    return std::string(buf, res.ptr);
}

}  // namespace nmrsim
