#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace gibbscert {

// 64-bit FNV-1a.
class Fnv1a {
 public:
  void add(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  void add(std::string_view s) { add(s.data(), s.size()); }
  std::uint64_t value() const { return h_; }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
    return buf;
  }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

inline std::string fingerprint(std::string_view s) {
  Fnv1a h;
  h.add(s);
  return h.hex();
}

}  // namespace gibbscert
