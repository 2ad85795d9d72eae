#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace pddlforge::util {

using Digest128 = std::array<uint8_t, 16>;

/// BLAKE2b with a 16-byte output.
Digest128 blake2b_128(std::string_view data);

std::string to_hex(const Digest128& digest);

/// Hex BLAKE2b-128 of `data`, used for config, domain and file hashes.
std::string hash_hex(std::string_view data);

}  // namespace pddlforge::util
