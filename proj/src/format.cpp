#include "dqlstm/format.hpp"

#include <cstdio>
#include <cstdlib>

namespace dqlstm {

std::string format_double(double value) {
    char buf[32];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) break;
    }
    return buf;
}

}  // namespace dqlstm
