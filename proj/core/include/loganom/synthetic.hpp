#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "loganom/record.hpp"

namespace loganom {

/// Three planted-anomaly archetypes:
///   ReconnectBurst  - rapid repeated establish events from one unfamiliar
///                     client host asking for an unregistered service.
///   OffHoursLogin   - an unfamiliar user connecting in the small hours,
///                     far outside the inlier working-hours distribution.
///   ResourceScan    - one user sweeping the whole service catalog from a
///                     different host each time, overnight.
enum class Archetype { ReconnectBurst = 0, OffHoursLogin = 1, ResourceScan = 2 };

struct SyntheticConfig {
  std::size_t n_records = 1000;
  double outlier_fraction = 0.02;  // in [0, 0.5)
  std::uint64_t seed = 0;
  // Nonnegative weights over the three archetypes; normalized internally.
  // A reconnection burst is one short incident; the other two patterns
  // recur, so they get twice the share by default.
  std::array<double, 3> archetype_mix = {1.0, 2.0, 2.0};
};

struct SyntheticDataset {
  std::vector<ConnectionRecord> records;
  std::vector<int> labels;  // 1 = planted anomaly, aligned with records
};

/// Deterministic for a fixed seed; exactly floor(n * fraction) records are
/// labeled anomalous. Throws ConfigInvalid.
SyntheticDataset generate_synthetic(const SyntheticConfig& config);

}  // namespace loganom
