#pragma once

#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wimaxqoe/metrics.hpp"
#include "wimaxqoe/qoe_controller.hpp"

namespace wimaxqoe {

// CSV report, one row per (flow, mode):
//   flow_id,mode,avg_throughput,loss_rate,avg_delay,avg_jitter
// throughput in bit/s (3 decimals), loss as a fraction, delay and jitter in
// seconds (9 decimals). avg_delay is left empty for a flow with no deliveries.
inline constexpr std::string_view kCsvHeader =
    "flow_id,mode,avg_throughput,loss_rate,avg_delay,avg_jitter";

inline std::string format_csv_row(const FlowMetrics& m, std::string_view mode) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d,%.*s,%.3f,%.9f,", m.flow_id, static_cast<int>(mode.size()),
                mode.data(), m.avg_throughput_bps, m.loss_rate);
  std::string row = buf;
  if (m.has_delay()) {
    std::snprintf(buf, sizeof buf, "%.9f", m.avg_delay_s);
    row += buf;
  }
  std::snprintf(buf, sizeof buf, ",%.9f", m.avg_jitter_s);
  row += buf;
  return row;
}

inline std::string format_csv(std::span<const FlowMetrics> metrics, std::string_view mode) {
  std::string out{kCsvHeader};
  out += '\n';
  for (const auto& m : metrics) {
    out += format_csv_row(m, mode);
    out += '\n';
  }
  return out;
}

struct FlowComparison {
  FlowMetrics baseline;
  FlowMetrics qoe;

  double throughput_delta() const { return qoe.avg_throughput_bps - baseline.avg_throughput_bps; }
  double loss_delta() const { return qoe.loss_rate - baseline.loss_rate; }
  double delay_delta() const { return qoe.avg_delay_s - baseline.avg_delay_s; }
  double jitter_delta() const { return qoe.avg_jitter_s - baseline.avg_jitter_s; }
};

struct ComparisonReport {
  std::vector<FlowComparison> flows;  // ascending flow id

  // Baseline row before QoE row for each flow.
  std::string csv() const {
    std::string out{kCsvHeader};
    out += '\n';
    for (const auto& f : flows) {
      out += format_csv_row(f.baseline, to_string(ControllerMode::Baseline));
      out += '\n';
      out += format_csv_row(f.qoe, to_string(ControllerMode::QoE));
      out += '\n';
    }
    return out;
  }

  std::string summary() const {
    std::string out =
        "flow  d_throughput(kbit/s)  d_loss_rate  d_delay(ms)  d_jitter(ms)   [qoe - baseline]\n";
    char buf[160];
    for (const auto& f : flows) {
      std::snprintf(buf, sizeof buf, "%4d  %20.3f  %11.6f  %11.3f  %12.3f\n", f.baseline.flow_id,
                    f.throughput_delta() / 1e3, f.loss_delta(), f.delay_delta() * 1e3,
                    f.jitter_delta() * 1e3);
      out += buf;
    }
    return out;
  }
};

}  // namespace wimaxqoe
