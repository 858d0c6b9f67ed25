#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fddi/bits.hpp"
#include "fddi/link_planner.hpp"
#include "fddi/phy_codec.hpp"

namespace fddi::test {

inline const std::string kDataDir = FDDI_DATA_DIR;

inline const phy::CodeTable& standard_table() {
  static const auto t = phy::CodeTable::load(kDataDir + "/fddi_4b5b.tbl");
  return t;
}

inline const link::MediaTable& standard_media() {
  static const auto t = link::MediaTable::load(kDataDir + "/media.tbl");
  return t;
}

inline Bits random_bits(std::mt19937_64& rng, std::size_t n) {
  std::bernoulli_distribution coin(0.5);
  Bits b(n);
  for (auto& x : b) x = coin(rng) ? 1 : 0;
  return b;
}

}  // namespace fddi::test
