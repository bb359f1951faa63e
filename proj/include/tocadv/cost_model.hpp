#pragma once

#include <span>

#include "tocadv/domain.hpp"

namespace tocadv {

enum class CostVariant { linear, discrete };

const char* to_string(CostVariant variant);
CostVariant cost_variant_from_string(std::string_view name);

/// Selects how occupied space turns into cents per hour. The linear variant
/// charges price * used GB. The discrete variant splits the charge into a
/// fixed per-device part (alpha * price * capacity, owed once a class holds
/// any data) and a proportional part ((1 - alpha) * price * used GB).
struct CostModelConfig {
  CostVariant variant = CostVariant::linear;
  double alpha = 0.0;  // discrete variant only, in [0, 1]
  /// When true, the fixed part is owed even for classes holding no data.
  bool discrete_counts_empty_classes = false;
};

void validate(const CostModelConfig& config);

/// Cost in cents per hour for a capacity-valid layout. Under the discrete
/// variant, usage above capacity is a precondition error.
double layout_cost(const Layout& layout,
                   const std::vector<StorageClass>& classes,
                   const CostModelConfig& config);

/// Same computation on a raw usage vector aligned with `classes`. The search
/// engines score hypothetical relocations with enforce_capacity = false so an
/// over-capacity baseline still yields a defined cost.
double cost_from_usage(std::span<const double> usage_gb,
                       const std::vector<StorageClass>& classes,
                       const CostModelConfig& config, bool enforce_capacity);

/// Total operating cost in cents for one workload execution:
/// layout cost (cents/hour) times workload time (hours).
double workload_toc(double layout_cost_cents_per_hour,
                    double workload_time_hours);

}  // namespace tocadv
