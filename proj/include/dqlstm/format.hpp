#pragma once

#include <string>

namespace dqlstm {

// Shortest of %.15g/%.16g/%.17g that parses back to the same double.
std::string format_double(double value);

}  // namespace dqlstm
