#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "wimaxqoe/errors.hpp"
#include "wimaxqoe/sim_time.hpp"
#include "wimaxqoe/traffic.hpp"

namespace wimaxqoe {

enum class ControllerMode { Baseline, QoE };

constexpr std::string_view to_string(ControllerMode m) noexcept {
  return m == ControllerMode::Baseline ? "baseline" : "qoe";
}
constexpr std::optional<ControllerMode> parse_controller_mode(std::string_view s) noexcept {
  if (s == "baseline") return ControllerMode::Baseline;
  if (s == "qoe") return ControllerMode::QoE;
  return std::nullopt;
}

// Which flows a loss marks for reduction.
enum class LossScope { AllFlows, CulpritOnly };

constexpr std::string_view to_string(LossScope s) noexcept {
  return s == LossScope::AllFlows ? "all_flows" : "culprit_only";
}
constexpr std::optional<LossScope> parse_loss_scope(std::string_view s) noexcept {
  if (s == "all_flows") return LossScope::AllFlows;
  if (s == "culprit_only") return LossScope::CulpritOnly;
  return std::nullopt;
}

struct ControllerConfig {
  ControllerMode mode{ControllerMode::QoE};
  SimTime reset_period{20'000'000};
  SimTime descent_duration{18'000'000};
  SimTime control_epoch{500'000};
  LossScope loss_scope{LossScope::AllFlows};

  std::int64_t epochs_per_descent() const noexcept {
    return descent_duration.count() / control_epoch.count();
  }

  void validate() const {
    if (control_epoch <= kZeroTime) throw ConfigInvalid("controller.control_epoch must be > 0");
    if (descent_duration <= kZeroTime)
      throw ConfigInvalid("controller.descent_duration must be > 0");
    if (descent_duration >= reset_period)
      throw ConfigInvalid("controller.descent_duration must be shorter than reset_period");
    if (descent_duration.count() % control_epoch.count() != 0)
      throw ConfigInvalid("controller.control_epoch must divide descent_duration");
  }

  bool operator==(const ControllerConfig&) const = default;
};

struct RateState {
  int flow_id{};
  double current_rate{};  // bits/s
  double max_rate{};
  double min_rate{};
  double step{};                 // (max - min) / epochs_per_descent
  std::int64_t steps_taken{0};   // reductions since the last reset
  bool loss_seen_this_epoch{false};
};

// Per-flow rate controller. Every flow starts at its maximum rate. A loss
// flags flows for reduction; at each control epoch flagged flows above their
// minimum drop by one step, and every reset_period all rates return to
// maximum. Rates never climb between resets.
//
// The rate after k reductions is computed as max - k*(max-min)/n and pinned to
// min at k == n, so every flow lands on its floor on the same epoch with no
// accumulated rounding.
class RateController {
 public:
  RateController(std::span<const FlowSpec> flows, ControllerConfig cfg) : cfg_(cfg) {
    const auto n = static_cast<double>(cfg_.epochs_per_descent());
    states_.reserve(flows.size());
    for (const auto& f : flows) {
      const double max = f.max_rate_bps();
      states_.push_back(RateState{f.flow_id, max, max, f.min_rate_bps,
                                  (max - f.min_rate_bps) / n, 0, false});
    }
  }

  void on_loss(int flow_id) {
    if (cfg_.mode == ControllerMode::Baseline) return;
    if (cfg_.loss_scope == LossScope::CulpritOnly) {
      mutable_state(flow_id).loss_seen_this_epoch = true;
      return;
    }
    for (auto& s : states_) s.loss_seen_this_epoch = true;
  }

  void on_control_epoch() {
    if (cfg_.mode == ControllerMode::Baseline) return;
    const std::int64_t n = cfg_.epochs_per_descent();
    for (auto& s : states_) {
      if (s.loss_seen_this_epoch && s.steps_taken < n) {
        ++s.steps_taken;
        s.current_rate = s.steps_taken == n ? s.min_rate : rate_after(s, n);
      }
      s.loss_seen_this_epoch = false;
    }
  }

  void on_reset() {
    if (cfg_.mode == ControllerMode::Baseline) return;
    for (auto& s : states_) {
      s.current_rate = s.max_rate;
      s.steps_taken = 0;
      s.loss_seen_this_epoch = false;
    }
  }

  double current_grant_rate(int flow_id) const {
    const RateState& s = state(flow_id);
    return cfg_.mode == ControllerMode::Baseline ? s.max_rate : s.current_rate;
  }

  const RateState& state(int flow_id) const {
    auto it = std::find_if(states_.begin(), states_.end(),
                           [&](const RateState& s) { return s.flow_id == flow_id; });
    if (it == states_.end()) throw UnknownFlow(flow_id);
    return *it;
  }

  std::span<const RateState> states() const noexcept { return states_; }
  const ControllerConfig& config() const noexcept { return cfg_; }

 private:
  RateState& mutable_state(int flow_id) {
    return const_cast<RateState&>(std::as_const(*this).state(flow_id));
  }

  static double rate_after(const RateState& s, std::int64_t n) {
    const double r = s.max_rate - (s.max_rate - s.min_rate) * static_cast<double>(s.steps_taken) /
                                      static_cast<double>(n);
    return std::clamp(r, s.min_rate, s.max_rate);
  }

  ControllerConfig cfg_;
  std::vector<RateState> states_;
};

}  // namespace wimaxqoe
