#include "tocadv/cost_model.hpp"

#include <cmath>

namespace tocadv {

const char* to_string(CostVariant variant) {
  return variant == CostVariant::linear ? "linear" : "discrete";
}

CostVariant cost_variant_from_string(std::string_view name) {
  if (name == "linear") return CostVariant::linear;
  if (name == "discrete") return CostVariant::discrete;
  throw ValidationError("unknown cost model variant '" + std::string(name) +
                        "' (expected linear or discrete)");
}

void validate(const CostModelConfig& config) {
  if (config.variant == CostVariant::discrete) {
    if (!(config.alpha >= 0.0 && config.alpha <= 1.0))
      throw ValidationError("cost model alpha must be in [0, 1]");
  }
}

double cost_from_usage(std::span<const double> usage_gb,
                       const std::vector<StorageClass>& classes,
                       const CostModelConfig& config, bool enforce_capacity) {
  validate(config);
  if (usage_gb.size() != classes.size())
    throw ValidationError("usage vector does not match the class list");

  double total = 0.0;
  for (std::size_t j = 0; j < classes.size(); ++j) {
    const StorageClass& cls = classes[j];
    double used = usage_gb[j];
    if (used < 0.0 || !std::isfinite(used))
      throw ValidationError("usage for class '" + cls.id +
                            "' must be finite and >= 0");
    if (config.variant == CostVariant::linear) {
      total += cls.price_cents_per_gb_hour * used;
      continue;
    }
    if (enforce_capacity && used > cls.capacity_gb)
      throw ValidationError(
          "discrete cost model requires usage <= capacity, but class '" +
          cls.id + "' holds " + std::to_string(used) + " GB of " +
          std::to_string(cls.capacity_gb) + " GB");
    // The proportional share (used/capacity) * (price * capacity) reduces to
    // price * used; computing it that way keeps the alpha = 0 case equal to
    // the linear variant down to the last bit.
    double fixed = 0.0;
    if (used > 0.0 || config.discrete_counts_empty_classes)
      fixed = config.alpha *
              (cls.price_cents_per_gb_hour * cls.capacity_gb);
    total += fixed + (1.0 - config.alpha) *
                         (cls.price_cents_per_gb_hour * used);
  }
  return total;
}

double layout_cost(const Layout& layout,
                   const std::vector<StorageClass>& classes,
                   const CostModelConfig& config) {
  std::vector<double> usage(classes.size(), 0.0);
  for (std::size_t j = 0; j < classes.size(); ++j) {
    auto it = layout.usage_gb.find(classes[j].id);
    if (it != layout.usage_gb.end()) usage[j] = it->second;
  }
  return cost_from_usage(usage, classes, config, /*enforce_capacity=*/true);
}

double workload_toc(double layout_cost_cents_per_hour,
                    double workload_time_hours) {
  if (!(layout_cost_cents_per_hour >= 0.0) ||
      !std::isfinite(layout_cost_cents_per_hour))
    throw ValidationError("layout cost must be finite and >= 0");
  if (!(workload_time_hours >= 0.0) || !std::isfinite(workload_time_hours))
    throw ValidationError("workload time must be finite and >= 0");
  return layout_cost_cents_per_hour * workload_time_hours;
}

}  // namespace tocadv
