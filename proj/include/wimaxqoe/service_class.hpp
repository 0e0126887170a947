#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

namespace wimaxqoe {

// 802.16 uplink scheduling services. Only UGS is scheduled by this simulator;
// the others exist so configurations can name them and be rejected cleanly.
enum class ServiceClass { UGS, rtPS, ertPS, nrtPS, BE };

enum class QosParameter {
  MaximumSustainedRate,
  MinimumReservedRate,
  MaximumReservedRate,
  MaximumLatencyTolerance,
  JitterTolerance,
  TrafficPriority,
};

namespace detail {
inline constexpr std::array kUgsParams{QosParameter::MaximumSustainedRate,
                                       QosParameter::MaximumLatencyTolerance,
                                       QosParameter::JitterTolerance};
inline constexpr std::array kRtpsParams{QosParameter::TrafficPriority,
                                        QosParameter::MaximumLatencyTolerance,
                                        QosParameter::MaximumReservedRate};
inline constexpr std::array kErtpsParams{
    QosParameter::MinimumReservedRate, QosParameter::MaximumSustainedRate,
    QosParameter::MaximumLatencyTolerance, QosParameter::JitterTolerance,
    QosParameter::TrafficPriority};
inline constexpr std::array kNrtpsParams{QosParameter::TrafficPriority,
                                         QosParameter::MaximumReservedRate,
                                         QosParameter::MaximumSustainedRate};
inline constexpr std::array kBeParams{QosParameter::MaximumSustainedRate,
                                      QosParameter::TrafficPriority};
}  // namespace detail

constexpr std::span<const QosParameter> qos_parameters(ServiceClass cls) noexcept {
  switch (cls) {
    case ServiceClass::UGS: return detail::kUgsParams;
    case ServiceClass::rtPS: return detail::kRtpsParams;
    case ServiceClass::ertPS: return detail::kErtpsParams;
    case ServiceClass::nrtPS: return detail::kNrtpsParams;
    case ServiceClass::BE: return detail::kBeParams;
  }
  return {};
}

constexpr bool is_scheduled(ServiceClass cls) noexcept { return cls == ServiceClass::UGS; }

constexpr std::string_view to_string(ServiceClass cls) noexcept {
  switch (cls) {
    case ServiceClass::UGS: return "UGS";
    case ServiceClass::rtPS: return "rtPS";
    case ServiceClass::ertPS: return "ertPS";
    case ServiceClass::nrtPS: return "nrtPS";
    case ServiceClass::BE: return "BE";
  }
  return "?";
}

constexpr std::optional<ServiceClass> parse_service_class(std::string_view name) noexcept {
  for (auto cls : {ServiceClass::UGS, ServiceClass::rtPS, ServiceClass::ertPS,
                   ServiceClass::nrtPS, ServiceClass::BE}) {
    if (to_string(cls) == name) return cls;
  }
  return std::nullopt;
}

}  // namespace wimaxqoe
