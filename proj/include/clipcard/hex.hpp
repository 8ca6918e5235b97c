#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace clipcard {

std::string to_hex(const std::vector<std::uint8_t>& bytes);

/// Parses an even-length hex string (case-insensitive). Throws ValidationError.
std::vector<std::uint8_t> from_hex(const std::string& text);

} // namespace clipcard
