#pragma once

#include <string>

namespace diffshape {

// Shortest decimal that parses back to exactly the same double; locale-free.
std::string format_double(double v);

}  // namespace diffshape
