#pragma once

#include <string>

namespace nmrsim {

// Shortest decimal representation that round-trips to the same double.
// Pinned formatting keeps output files byte-identical across runs.
std::string shortest_double(double v);

}  // namespace nmrsim
