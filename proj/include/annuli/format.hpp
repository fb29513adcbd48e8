#pragma once

#include <charconv>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "annuli/error.hpp"

namespace annuli {

//! Shortest round-trip decimal form, or `digits` significant digits if > 0.
inline std::string format_double(double value, int digits = 0)
{
    char buf[64];
    auto res = digits > 0 ? std::to_chars(buf, buf + sizeof(buf), value,
                                          std::chars_format::general, digits)
                          : std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text)
{
    double value = 0;
    auto first = text.data();
    auto last = text.data() + text.size();
    if (!text.empty() && *first == '+')
        ++first;
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ParseError("not a number: '" + std::string(text) + "'");
    return value;
}

inline long long parse_integer(std::string_view text)
{
    long long value = 0;
    auto first = text.data();
    auto last = text.data() + text.size();
    if (!text.empty() && *first == '+')
        ++first;
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ParseError("not an integer: '" + std::string(text) + "'");
    return value;
}

inline std::vector<std::string_view> split(std::string_view text, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true)
    {
        auto pos = text.find(sep, start);
        out.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

inline std::vector<double> parse_double_list(std::string_view text)
{
    std::vector<double> out;
    for (auto item : split(text, ','))
        out.push_back(parse_double(item));
    return out;
}

inline std::string join_doubles(std::span<const double> values, int digits = 0)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        if (i)
            out += ',';
        out += format_double(values[i], digits);
    }
    return out;
}

inline std::string_view trim(std::string_view text)
{
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!text.empty() && is_space(text.front()))
        text.remove_prefix(1);
    while (!text.empty() && is_space(text.back()))
        text.remove_suffix(1);
    return text;
}

}  // namespace annuli
