#pragma once

#include <string>
#include <vector>

#include "dsol/signaling.hpp"

namespace dsol::derivation {

struct AccuracyRow {
  double accuracy_urad;
  std::vector<double> range_au;  // one per PPM order
};

// Published maximum-range grids used to calibrate the required-flux
// registry: one grid for the outage (Rayleigh sigma) pointing approach and
// one for the deterministic (worst-case offset) approach, both under the
// shared reference link conditions.
struct ReferenceRanges {
  std::vector<int> orders;
  std::vector<AccuracyRow> outage_rows;
  std::vector<AccuracyRow> deterministic_rows;
};

ReferenceRanges load_reference_ranges(const std::string& path);

// Back out the decoder's required flux per PPM order from the range grids:
// every cell of both grids implies a required flux through the link
// equation at that cell's optimal antenna gain; the per-order estimates
// are combined by a range-weighted mean. The M=64 entry and the two
// alternate-slot-time entries are pinned to directly calibrated operating
// points instead.
std::vector<signaling::RegistryEntry> derive_registry(
    const ReferenceRanges& ranges);

// Serializes entries in the registry file format (4-decimal flux values).
std::string render_registry(
    const std::vector<signaling::RegistryEntry>& entries);

}  // namespace dsol::derivation
