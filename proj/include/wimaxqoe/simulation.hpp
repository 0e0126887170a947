#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wimaxqoe/engine.hpp"
#include "wimaxqoe/mac.hpp"
#include "wimaxqoe/metrics.hpp"
#include "wimaxqoe/qoe_controller.hpp"
#include "wimaxqoe/scenario.hpp"
#include "wimaxqoe/trace.hpp"
#include "wimaxqoe/traffic.hpp"

namespace wimaxqoe {

// Optional hooks into a running simulation, for tests and debug dumps.
class SimulationObserver {
 public:
  virtual ~SimulationObserver() = default;
  virtual void on_event(const Event&) {}
  virtual void on_frame(SimTime /*frame_end*/, std::span<const Grant> /*grants*/,
                        std::int64_t /*bits_sent*/) {}
  virtual void on_rates(SimTime /*now*/, const RateController&) {}
};

struct FlowCounters {
  int flow_id{};
  std::uint64_t created{};
  std::uint64_t delivered{};
  std::uint64_t dropped{};
  std::uint64_t queued{};
};

struct SimulationResult {
  ControllerMode mode{ControllerMode::Baseline};
  std::vector<FlowMetrics> metrics;  // config flow order
  std::vector<FlowCounters> counters;
  std::size_t events{0};
  std::size_t resets{0};
  std::size_t control_epochs{0};
};

// One uplink cell: CBR sources feeding drop-tail queues, a frame-by-frame UGS
// grant allocator, and the rate controller. A run is deterministic in
// (config, mode).
class Simulation {
 public:
  Simulation(ScenarioConfig cfg, ControllerMode mode, TraceWriter* trace = nullptr,
             SimulationObserver* observer = nullptr)
      : cfg_(validated(std::move(cfg))),
        mode_(mode),
        trace_(trace),
        observer_(observer),
        engine_(cfg_.seed),
        controller_(cfg_.flows, with_mode(cfg_.controller, mode)) {
    for (const auto& f : cfg_.flows) {
      sources_.emplace_back(f);
      queues_.emplace_back(f.flow_id, cfg_.mac.queue_limit);
      accumulators_.emplace_back(f.flow_id);
    }
  }

  SimulationResult run() {
    const SimTime end = cfg_.duration;
    for (std::size_t i = 0; i < sources_.size(); ++i)
      engine_.schedule({kZeroTime, EventKind::PacketArrival, static_cast<int>(i)});
    if (cfg_.mac.frame_duration <= end)
      engine_.schedule({cfg_.mac.frame_duration, EventKind::FrameBoundary, kBroadcast});
    if (mode_ == ControllerMode::QoE) {
      if (cfg_.controller.reset_period < end)
        engine_.schedule({cfg_.controller.reset_period, EventKind::RateReset, kBroadcast});
      if (cfg_.controller.control_epoch <= end)
        engine_.schedule({cfg_.controller.control_epoch, EventKind::ControlEpoch, kBroadcast});
    }
    engine_.schedule({end, EventKind::EndOfSimulation, kBroadcast});
    if (observer_) observer_->on_rates(kZeroTime, controller_);

    SimulationResult result;
    result.mode = mode_;
    result.events = engine_.run(end, [this](Engine& eng, const Event& ev) { dispatch(eng, ev); });
    result.resets = resets_;
    result.control_epochs = epochs_;
    for (std::size_t i = 0; i < queues_.size(); ++i) {
      const auto& q = queues_[i];
      result.metrics.push_back(accumulators_[i].finish(end, q.size()));
      result.counters.push_back(
          {q.flow_id(), sources_[i].emitted(), q.delivered(), q.dropped(), q.size()});
    }
    return result;
  }

  const RateController& controller() const noexcept { return controller_; }
  std::span<const FlowQueue> queues() const noexcept { return queues_; }

 private:
  static ScenarioConfig validated(ScenarioConfig c) {
    c.validate();
    return c;
  }

  static ControllerConfig with_mode(ControllerConfig c, ControllerMode m) {
    c.mode = m;
    return c;
  }

  void dispatch(Engine& eng, const Event& ev) {
    if (observer_) observer_->on_event(ev);
    switch (ev.kind) {
      case EventKind::PacketArrival: on_arrival(eng, static_cast<std::size_t>(ev.subject)); break;
      case EventKind::FrameBoundary: on_frame(eng); break;
      case EventKind::ControlEpoch:
        controller_.on_control_epoch();
        ++epochs_;
        if (observer_) observer_->on_rates(eng.now(), controller_);
        reschedule(eng, cfg_.controller.control_epoch, EventKind::ControlEpoch, true);
        break;
      case EventKind::RateReset:
        controller_.on_reset();
        ++resets_;
        if (observer_) observer_->on_rates(eng.now(), controller_);
        reschedule(eng, cfg_.controller.reset_period, EventKind::RateReset, false);
        break;
      case EventKind::EndOfSimulation: break;
    }
  }

  void reschedule(Engine& eng, SimTime period, EventKind kind, bool include_end) {
    const SimTime next = eng.now() + period;
    if (next < cfg_.duration || (include_end && next == cfg_.duration))
      eng.schedule({next, kind, kBroadcast});
  }

  void on_arrival(Engine& eng, std::size_t idx) {
    auto& src = sources_[idx];
    const int flow_id = src.spec().flow_id;
    auto [packet, next] = src.emit(controller_.current_grant_rate(flow_id), eng.now());
    const TraceEvent sent{TraceKind::Sent, eng.now(), flow_id, packet.seq, packet.size};
    accumulators_[idx].record_sent();
    emit(sent);
    if (queues_[idx].enqueue(packet) == EnqueueResult::Dropped) {
      accumulators_[idx].record_dropped();
      emit({TraceKind::Dropped, eng.now(), flow_id, sent.seq, sent.size});
      controller_.on_loss(flow_id);
    }
    if (next <= cfg_.duration) eng.schedule({next, EventKind::PacketArrival, static_cast<int>(idx)});
  }

  void on_frame(Engine& eng) {
    demands_.clear();
    for (const auto& s : controller_.states()) {
      const double rate = cfg_.mac.grant_basis == GrantBasis::Reserved
                              ? s.max_rate
                              : controller_.current_grant_rate(s.flow_id);
      demands_.push_back({s.flow_id, rate});
    }
    const auto grants = allocate_grants(demands_, cfg_.mac);
    const auto tx = transmit_frame(queues_, grants, eng.now(), cfg_.mac.fragmentation);
    for (const auto& p : tx.delivered) {
      const std::size_t idx = index_of(p.flow_id);
      accumulators_[idx].record_delivered(p.bits(), *p.delivered_at - p.created_at);
      emit({TraceKind::Received, eng.now(), p.flow_id, p.seq, p.size});
    }
    if (observer_) observer_->on_frame(eng.now(), grants, tx.bits_on_air);
    reschedule(eng, cfg_.mac.frame_duration, EventKind::FrameBoundary, true);
  }

  std::size_t index_of(int flow_id) const {
    for (std::size_t i = 0; i < queues_.size(); ++i)
      if (queues_[i].flow_id() == flow_id) return i;
    throw UnknownFlow(flow_id);
  }

  void emit(const TraceEvent& e) {
    if (trace_) trace_->emit(e);
  }

  ScenarioConfig cfg_;
  ControllerMode mode_;
  TraceWriter* trace_;
  SimulationObserver* observer_;
  Engine engine_;
  RateController controller_;
  std::vector<CbrSource> sources_;
  std::vector<FlowQueue> queues_;
  std::vector<FlowMetricsAccumulator> accumulators_;
  std::vector<GrantDemand> demands_;
  std::size_t resets_{0};
  std::size_t epochs_{0};
};

inline SimulationResult simulate(const ScenarioConfig& cfg, ControllerMode mode,
                                 TraceWriter* trace = nullptr,
                                 SimulationObserver* observer = nullptr) {
  return Simulation(cfg, mode, trace, observer).run();
}

}  // namespace wimaxqoe
