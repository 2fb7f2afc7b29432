#pragma once

#include <string>

namespace psofit {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_shortest(double value);

/// Fixed-point text with `decimals` fraction digits, rounding half away from
/// zero on the shortest decimal representation (so 1.005 renders as 1.01).
std::string format_fixed(double value, int decimals);

} // namespace psofit
