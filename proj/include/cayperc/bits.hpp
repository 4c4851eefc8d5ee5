#pragma once

#include <string>

#include <boost/dynamic_bitset.hpp>

namespace cayperc {

/// Hex digit j holds bits 4j..4j+3, lowest bit first.
inline std::string bits_to_hex(const boost::dynamic_bitset<>& bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve((bits.size() + 3) / 4);
  for (std::size_t j = 0; j < bits.size(); j += 4) {
    int nibble = 0;
    for (std::size_t b = 0; b < 4 && j + b < bits.size(); ++b) {
      if (bits[j + b]) nibble |= 1 << b;
    }
    out.push_back(kDigits[nibble]);
  }
  return out;
}

}  // namespace cayperc
