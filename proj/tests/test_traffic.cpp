#include <gtest/gtest.h>

#include <vector>

#include "wimaxqoe/scenario.hpp"
#include "wimaxqoe/service_class.hpp"
#include "wimaxqoe/traffic.hpp"

using namespace wimaxqoe;

TEST(RateOf, DefaultFlowRates) {
  // 200 B every 1.5 ms and every 1 ms, as listed for the default flows.
  EXPECT_NEAR(rate_of(200, SimTime{1500}), 133.33, 0.005);
  EXPECT_DOUBLE_EQ(rate_of(200, SimTime{1000}), 200.0);
  EXPECT_DOUBLE_EQ(rate_of(200, SimTime{2000}), 200.0 / 0.002 / 1000.0);
}

TEST(RateOf, ZeroIntervalThrows) {
  EXPECT_THROW(rate_of(200, kZeroTime), ZeroInterval);
  EXPECT_THROW(bits_per_second(200, SimTime{-1}), ZeroInterval);
}

TEST(RateOf, KilobyteConversion) {
  EXPECT_DOUBLE_EQ(kbytes_to_bps(150), 1.2e6);
  EXPECT_DOUBLE_EQ(bps_to_kbytes(1.6e6), 200.0);
}

TEST(NextEmission, MaxRateCadence) {
  const FlowSpec f2 = default_scenario().flows[1];
  const auto e = next_emission(f2, f2.max_rate_bps(), kZeroTime);
  EXPECT_EQ(e.next_time, SimTime{1000});
  EXPECT_EQ(e.packet.flow_id, 2);
  EXPECT_EQ(e.packet.size, 200u);
  EXPECT_EQ(e.packet.created_at, kZeroTime);
  EXPECT_FALSE(e.packet.delivered_at.has_value());
}

TEST(NextEmission, HalfRateDoublesGap) {
  const FlowSpec f2 = default_scenario().flows[1];
  const SimTime full = next_emission(f2, f2.max_rate_bps(), kZeroTime).next_time;
  const SimTime half = next_emission(f2, f2.max_rate_bps() / 2, kZeroTime).next_time;
  EXPECT_EQ(half, 2 * full);
}

TEST(NextEmission, MinRateGapRoundsHalfUp) {
  const FlowSpec f1 = default_scenario().flows[0];
  // 1600 bits at 120 kB/s = 1666.67 us
  const double exact_us = 200.0 / (120.0 * 1000.0) * 1e6;
  const auto e = next_emission(f1, f1.min_rate_bps, SimTime{5000});
  EXPECT_EQ(e.next_time - SimTime{5000}, SimTime{static_cast<std::int64_t>(exact_us + 0.5)});
  EXPECT_EQ(e.next_time, SimTime{5000 + 1667});
}

TEST(EmissionGap, HalfMicrosecondRoundsUp) {
  // 1 byte at 16 Mbit/s = 0.5 us
  EXPECT_EQ(emission_gap(1, 16e6), SimTime{1});
  EXPECT_EQ(emission_gap(1, 17e6), SimTime{0});
}

TEST(CbrSource, SequenceNumbersAreDenseUnderRateChanges) {
  CbrSource src(default_scenario().flows[2]);
  SimTime t = kZeroTime;
  const double rates[] = {1.6e6, 1.3e6, 1.2e6, 1.6e6};
  for (std::uint64_t i = 0; i < 400; ++i) {
    const auto e = src.emit(rates[i / 100], t);
    EXPECT_EQ(e.packet.seq, i);
    EXPECT_GT(e.next_time, t);
    t = e.next_time;
  }
  EXPECT_EQ(src.emitted(), 400u);
}

TEST(CbrSource, EmittedBitsMatchRateWithinOnePacket) {
  for (double rate : {1.6e6, 1.2e6, 0.96e6, 1.0666e6, 1.37e6}) {
    CbrSource src(default_scenario().flows[0]);
    const SimTime window = from_seconds(10);
    SimTime t = kZeroTime;
    std::int64_t bits = 0;
    while (t < window) {
      auto e = src.emit(rate, t);
      bits += e.packet.bits();
      t = e.next_time;
    }
    const double expected = rate * to_seconds(window);
    // One packet of quantisation plus the sub-microsecond gap rounding.
    const double rounding = expected * 0.5 / static_cast<double>(emission_gap(200, rate).count());
    EXPECT_LE(std::abs(static_cast<double>(bits) - expected), 1600.0 + rounding) << rate;
  }
}

TEST(ServiceClass, UgsParameters) {
  const auto p = qos_parameters(ServiceClass::UGS);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[0], QosParameter::MaximumSustainedRate);
  EXPECT_EQ(p[1], QosParameter::MaximumLatencyTolerance);
  EXPECT_EQ(p[2], QosParameter::JitterTolerance);
  EXPECT_EQ(qos_parameters(ServiceClass::ertPS).size(), 5u);
  EXPECT_EQ(qos_parameters(ServiceClass::BE).size(), 2u);
}

TEST(ServiceClass, NamesRoundTrip) {
  for (auto c : {ServiceClass::UGS, ServiceClass::rtPS, ServiceClass::ertPS, ServiceClass::nrtPS,
                 ServiceClass::BE})
    EXPECT_EQ(parse_service_class(to_string(c)), c);
  EXPECT_FALSE(parse_service_class("ugs").has_value());
  EXPECT_TRUE(is_scheduled(ServiceClass::UGS));
  EXPECT_FALSE(is_scheduled(ServiceClass::BE));
}

TEST(SimTime, FormatAndParse) {
  EXPECT_EQ(format_seconds(SimTime{1500}), "0.001500");
  EXPECT_EQ(format_seconds(SimTime{200'000'000}), "200.000000");
  EXPECT_EQ(parse_seconds("0.0015"), SimTime{1500});
  EXPECT_EQ(parse_seconds("12"), SimTime{12'000'000});
  EXPECT_FALSE(parse_seconds("0.0000001").has_value());
  EXPECT_FALSE(parse_seconds("1.").has_value());
  EXPECT_FALSE(parse_seconds("-1.0").has_value());
  EXPECT_FALSE(parse_seconds("1e3").has_value());
  for (std::int64_t us : {0LL, 1LL, 999999LL, 1000000LL, 123456789LL})
    EXPECT_EQ(parse_seconds(format_seconds(SimTime{us})), SimTime{us});
}
