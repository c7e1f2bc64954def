#ifndef STABLEKERN_UTIL_FNV_HPP
#define STABLEKERN_UTIL_FNV_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace stablekern {

// FNV-1a 64-bit content hash; used to fingerprint run artifacts in manifests.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::string& path);  // throws Error if unreadable

}  // namespace stablekern

#endif
