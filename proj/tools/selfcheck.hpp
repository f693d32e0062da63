#pragma once

#include <cstdint>
#include <ostream>

// Reduced-size identity suites. Returns 0 when every row passes, 4 otherwise.
int run_selfcheck(std::ostream& out, bool inject_fault, std::uint64_t budget);
