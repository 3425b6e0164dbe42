#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace klsat::text {

// Shortest decimal string that parses back to exactly the same double.
std::string fmt_double(double v);

// Fixed 17-significant-digit form; always round-trips bit-exactly.
std::string fmt_double17(double v);

// Strict parsers: the whole token must be consumed, otherwise
// std::invalid_argument with the offending token in the message.
double parse_double(std::string_view s);
long long parse_int(std::string_view s);
std::uint64_t parse_u64(std::string_view s);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split_ws(std::string_view line);
std::vector<std::string_view> split(std::string_view s, char sep);

// For tokens like "n=42": if token starts with key + '=', sets value to the
// remainder and returns true.
bool consume_key(std::string_view token, std::string_view key,
                 std::string_view& value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace klsat::text
