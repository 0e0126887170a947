#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>

#include "wimaxqoe/errors.hpp"
#include "wimaxqoe/service_class.hpp"
#include "wimaxqoe/sim_time.hpp"

namespace wimaxqoe {

// Configured rates are in kilobytes per second (1000 B/s); internally every
// rate is bits per second.
inline constexpr double kBitsPerSecondPerKBps = 8000.0;

constexpr double kbytes_to_bps(double kbytes_per_s) noexcept {
  return kbytes_per_s * kBitsPerSecondPerKBps;
}
constexpr double bps_to_kbytes(double bps) noexcept { return bps / kBitsPerSecondPerKBps; }

inline double bits_per_second(std::uint32_t packet_size_bytes, SimTime interval) {
  if (interval <= kZeroTime) throw ZeroInterval{};
  return static_cast<double>(packet_size_bytes) * 8.0 / to_seconds(interval);
}

// Rate of a CBR source in kB/s: packet_size / interval / 1000.
inline double rate_of(std::uint32_t packet_size_bytes, SimTime interval) {
  return bps_to_kbytes(bits_per_second(packet_size_bytes, interval));
}

struct FlowSpec {
  int flow_id{};
  std::uint32_t packet_size{};  // bytes
  SimTime send_interval{};      // cadence at max_rate
  double min_rate_bps{};        // minimum subjective rate requirement
  ServiceClass service_class{ServiceClass::UGS};
  int priority{0};

  double max_rate_bps() const { return bits_per_second(packet_size, send_interval); }
  std::int64_t packet_bits() const noexcept { return std::int64_t{packet_size} * 8; }

  bool operator==(const FlowSpec&) const = default;
};

struct Packet {
  int flow_id{};
  std::uint64_t seq{};
  std::uint32_t size{};  // bytes
  SimTime created_at{};
  std::optional<SimTime> delivered_at;

  std::int64_t bits() const noexcept { return std::int64_t{size} * 8; }
};

// Inter-packet gap at `rate_bps`, rounded half-up to whole microseconds.
inline SimTime emission_gap(std::uint32_t packet_size_bytes, double rate_bps) {
  const double us = static_cast<double>(packet_size_bytes) * 8.0 * 1e6 / rate_bps;
  return SimTime{static_cast<std::int64_t>(std::floor(us + 0.5))};
}

struct Emission {
  Packet packet;
  SimTime next_time;
};

// Emits packet `seq` of `flow` at `now`; the following emission is one gap
// later at the rate in force now. Precondition: current_rate_bps > 0.
inline Emission next_emission(const FlowSpec& flow, double current_rate_bps, SimTime now,
                              std::uint64_t seq = 0) {
  Packet p{flow.flow_id, seq, flow.packet_size, now, std::nullopt};
  return {p, now + emission_gap(flow.packet_size, current_rate_bps)};
}

// Constant-bit-rate source for one subscriber-station flow.
class CbrSource {
 public:
  explicit CbrSource(FlowSpec spec) : spec_(std::move(spec)) {}

  Emission emit(double current_rate_bps, SimTime now) {
    return next_emission(spec_, current_rate_bps, now, next_seq_++);
  }

  const FlowSpec& spec() const noexcept { return spec_; }
  std::uint64_t emitted() const noexcept { return next_seq_; }

 private:
  FlowSpec spec_;
  std::uint64_t next_seq_{0};
};

}  // namespace wimaxqoe
