#include "pddlforge/util/hash.hpp"

#include <sodium.h>

#include "pddlforge/error.hpp"

namespace pddlforge::util {

Digest128 blake2b_128(std::string_view data) {
  static const bool ready = sodium_init() >= 0;
  if (!ready) throw Error("libsodium initialization failed");
  Digest128 out{};
  crypto_generichash(out.data(), out.size(), reinterpret_cast<const unsigned char*>(data.data()), data.size(),
                     nullptr, 0);
  return out;
}

std::string to_hex(const Digest128& digest) {
  static const char* kDigits = "0123456789abcdef";
  std::string s;
  s.reserve(32);
  for (uint8_t b : digest) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 15]);
  }
  return s;
}

std::string hash_hex(std::string_view data) { return to_hex(blake2b_128(data)); }

}  // namespace pddlforge::util
