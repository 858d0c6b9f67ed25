#include <gtest/gtest.h>

#include <random>

#include "fddi/scrambler.hpp"
#include "fddi/spm.hpp"
#include "support.hpp"

using namespace fddi;
using namespace fddi::sonet;

TEST(Rates, PublishedHierarchy) {
  struct Row {
    int sts;
    const char* line;
    const char* payload;
    std::optional<int> stm;
  };
  const Row expected[] = {
      {1, "51.84", "50.112", std::nullopt}, {3, "155.52", "150.336", 1},    {9, "466.56", "451.008", 3},
      {12, "622.08", "601.344", 4},         {18, "933.12", "902.016", 6},    {24, "1244.16", "1202.688", 8},
      {36, "1866.24", "1804.032", 12},      {48, "2488.32", "2405.376", 16}, {96, "4976.64", "4810.176", 32},
      {192, "9953.28", "9620.928", 64}};
  ASSERT_EQ(kRateTable.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(kRateTable[i].sts_level, expected[i].sts);
    EXPECT_EQ(kbps_to_mbps_string(kRateTable[i].line_kbps), expected[i].line);
    EXPECT_EQ(kbps_to_mbps_string(kRateTable[i].payload_kbps), expected[i].payload);
    EXPECT_EQ(kRateTable[i].stm_level, expected[i].stm);
  }
}

TEST(Rates, LineRateIsMultipleOfSts1) {
  for (const auto& e : kRateTable) { EXPECT_EQ(e.line_kbps, 51'840 * e.sts_level); }
  for (const auto& e : kRateTable)
    if (e.stm_level) { EXPECT_EQ(e.sts_level, 3 * *e.stm_level); }
}

TEST(Rates, Lookup) {
  EXPECT_EQ(sts_rates(48).line_kbps, 2'488'320);
  EXPECT_THROW(sts_rates(5), Error);
}

TEST(Rates, MbpsFormatting) {
  EXPECT_EQ(kbps_to_mbps_string(125'000), "125");
  EXPECT_EQ(kbps_to_mbps_string(6'144), "6.144");
  EXPECT_EQ(kbps_to_mbps_string(51'840), "51.84");
}

TEST(SpeBandwidth, CitedAndRecomputed) {
  const auto bw = spe_bandwidth();
  // 2349 bytes x 8 bits every 125 us.
  EXPECT_EQ(bw.recomputed_kbps, static_cast<std::int64_t>(2349 * 8 * 1000 / 125));
  EXPECT_EQ(bw.cited_kbps, 139'264);
  EXPECT_FALSE(bw.consistent());
  EXPECT_EQ(bw.cited_bytes * 8 * 1000 / 125, 139'264);
  EXPECT_GT(bw.recomputed_kbps, 125'000);
}

TEST(SpeLayout, RunsAndCapacity) {
  const auto layout = SpeLayout::build();
  const auto a = layout.audit();
  EXPECT_LE(a.max_user_run, kMaxUserRunBytes);
  EXPECT_EQ(a.runs_without_control, 0u);
  EXPECT_EQ(a.path_overhead_bytes, 9u);
  EXPECT_EQ(a.capacity_bits, layout.capacity_bits());
  EXPECT_GE(layout.capacity_bits(), kFddiBitsPerFrame + layout.params().jitter_reserve_bits);
}

TEST(SpeLayout, IndependentRunScan) {
  // Any 17 consecutive bytes that all carry user bits include a control byte.
  const auto layout = SpeLayout::build();
  const auto roles = layout.roles();
  auto user = [](ByteRole r) { return r == ByteRole::user_data || r == ByteRole::stuff_control; };
  for (std::size_t i = 0; i + 18 <= roles.size(); ++i) {
    bool all = true;
    for (std::size_t k = 0; k < 18; ++k) all = all && user(roles[i + k]);
    EXPECT_FALSE(all) << "18-byte user run at " << i;
  }
  for (std::size_t i = 0; i + 17 <= roles.size(); ++i) {
    bool all = true, control = false;
    for (std::size_t k = 0; k < 17; ++k) {
      all = all && user(roles[i + k]);
      control = control || roles[i + k] == ByteRole::stuff_control;
    }
    if (all) {
      EXPECT_TRUE(control) << i;
    }
  }
}

TEST(SpeLayout, InfeasibleParameters) {
  EXPECT_THROW(SpeLayout::build({.block_bytes = 7}), Error);
  EXPECT_THROW(SpeLayout::build({.block_bytes = 26, .fixed_stuff_bytes = 3}), Error);  // 22-byte runs
  EXPECT_THROW(SpeLayout::build({.block_bytes = 20, .fixed_stuff_bytes = 10}), Error);  // too little capacity
  EXPECT_THROW(SpeLayout::build({.block_bytes = 20, .fixed_stuff_bytes = 20}), Error);
}

TEST(SpeMap, RoundTripRandom) {
  const auto layout = SpeLayout::build();
  std::mt19937_64 rng(8);
  for (std::size_t n : {0ul, 1ul, 15'794ul, 15'795ul, 15'796ul, 100'000ul}) {
    const auto bits = test::random_bits(rng, n);
    const auto frames = map_fddi(layout, bits);
    EXPECT_EQ(frames.size(), (n + layout.capacity_bits() - 1) / layout.capacity_bits());
    EXPECT_EQ(extract_fddi(layout, frames), bits);
  }
}

TEST(SpeMap, NonUserBytesUntouched) {
  const auto layout = SpeLayout::build();
  const Bits ones(layout.capacity_bits(), 1);
  const auto frames = map_fddi(layout, ones);
  ASSERT_EQ(frames.size(), 1u);
  for (std::size_t i = 0; i < kSpeBytes; ++i) {
    const auto role = layout.roles()[i];
    const auto b = frames[0].bytes[i];
    if (role == ByteRole::user_data) { EXPECT_EQ(b, 0xFF); }
    if (role == ByteRole::stuff_control) { EXPECT_EQ(b, 0x7F); }
    if (role == ByteRole::fixed_stuff || role == ByteRole::path_overhead) { EXPECT_EQ(b, 0x00); }
  }
}

TEST(SpeMap, LayoutMismatchDetected) {
  const auto layout = SpeLayout::build();
  auto frames = map_fddi(layout, Bits(100, 1));
  frames[0].layout.jitter_reserve_bits = 0;
  EXPECT_THROW(extract_fddi(layout, frames), Error);
}

TEST(SpeMap, AdversarialRunsBoundedAfterScrambling) {
  // User bits chosen to cancel the scrambler. Only user-controlled bytes can
  // turn into a constant run, so the run stays near 17 bytes.
  const auto layout = SpeLayout::build();
  const auto seq = scrambler_sequence();
  const auto pos = layout.user_bit_positions();
  for (int target = 0; target < 2; ++target) {
    Bits user(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) user[i] = static_cast<std::uint8_t>(seq[pos[i] % 127] ^ target);
    const auto frames = map_fddi(layout, user);
    const auto scrambled = scramble(bytes_to_bits(frames[0].bytes));
    const std::size_t bound = 8 * kMaxUserRunBytes + 2 * 7;
    EXPECT_LE(longest_run(scrambled), bound);
    EXPECT_GE(longest_run(scrambled), 8 * (kMaxUserRunBytes - 1));
  }
}
