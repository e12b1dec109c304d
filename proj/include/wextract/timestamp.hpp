#pragma once

#include <cstdint>

namespace wextract {

// Seconds since epoch in live mode, abstract integer ticks in simulation.
using Timestamp = std::int64_t;

Timestamp wall_clock_now();

}  // namespace wextract
