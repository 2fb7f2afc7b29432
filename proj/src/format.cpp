#include "psofit/format.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace psofit {

std::string format_shortest(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    if (res.ec != std::errc{})
        throw std::runtime_error("to_chars failed");
    return std::string(buf, res.ptr);
}

std::string format_fixed(double value, int decimals)
{
    if (decimals < 0)
        throw std::invalid_argument("decimals must be non-negative");
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value < 0 ? "-inf" : "inf";

    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
    if (res.ec != std::errc{})
        throw std::runtime_error("to_chars failed");
    const std::string sci(buf, res.ptr);

    // sci looks like "-d.ddde+XX"
    std::size_t pos = 0;
    const bool negative = sci[pos] == '-';
    if (negative)
        ++pos;
    const std::size_t e_pos = sci.find('e');
    std::string digits;
    for (std::size_t i = pos; i < e_pos; ++i)
        if (sci[i] != '.')
            digits.push_back(sci[i]);
    const int exponent = std::stoi(sci.substr(e_pos + 1));

    // value = 0.digits * 10^(exponent + 1); `point` counts integer digits.
    long point = exponent + 1;
    if (point <= 0) {
        digits.insert(0, static_cast<std::size_t>(1 - point), '0');
        point = 1;
    }
    if (static_cast<long>(digits.size()) < point)
        digits.append(static_cast<std::size_t>(point) - digits.size(), '0');

    const std::size_t keep = static_cast<std::size_t>(point) + static_cast<std::size_t>(decimals);
    if (digits.size() < keep)
        digits.append(keep - digits.size(), '0');
    if (digits.size() > keep) {
        const bool round_up = digits[keep] >= '5';
        digits.resize(keep);
        if (round_up) {
            std::size_t i = keep;
            while (i > 0) {
                --i;
                if (digits[i] == '9') {
                    digits[i] = '0';
                } else {
                    ++digits[i];
                    break;
                }
            }
            if (i == 0 && digits[0] == '0') {
                digits.insert(digits.begin(), '1');
                ++point;
            }
        }
    }

    // Trim superfluous leading zeros in the integer part.
    std::size_t lead = 0;
    while (lead + 1 < static_cast<std::size_t>(point) && digits[lead] == '0')
        ++lead;

    std::string out;
    if (negative && digits.find_first_not_of('0') != std::string::npos)
        out.push_back('-');
    out.append(digits, lead, static_cast<std::size_t>(point) - lead);
    if (decimals > 0) {
        out.push_back('.');
        out.append(digits, static_cast<std::size_t>(point), static_cast<std::size_t>(decimals));
    }
    return out;
}

} // namespace psofit
