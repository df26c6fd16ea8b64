#pragma once

#include <span>
#include <vector>

#include "mrcl/rng.hpp"
#include "mrcl/sensing.hpp"
#include "mrcl/world.hpp"

namespace mrcl {

enum class ZoneKind { kSensing, kCommunication };

/// Disc-shaped risk field. The rate peaks at the center and decays linearly
/// to zero at the radius. `threshold` defines zone membership for reporting;
/// attack sampling always uses the continuous rate.
struct DangerZone {
  ZoneKind kind = ZoneKind::kSensing;
  Vec2 center = Vec2::Zero();
  double radius = 1.0;     // > 0
  double peak_rate = 0.0;  // [0, 1]
  double threshold = 0.0;  // [0, 1]
};

/// Linear radial decay: peak_rate * max(0, 1 - dist/radius).
double risk_at(const DangerZone& zone, const Vec2& p);

/// Membership per the set definition risk >= threshold; reporting only.
bool inside_zone(const DangerZone& zone, const Vec2& p);

/// Max risk over zones of the given kind at p; zero with no matching zone.
/// This is both the attack probability and the D_s / D_c rate that feeds the
/// adaptive trigger threshold.
double zone_rate_at(std::span<const DangerZone> zones, ZoneKind kind, const Vec2& p);

/// Fixed bias magnitudes injected into a compromised measurement, one sign
/// drawn per channel.
struct InjectionMagnitude {
  double range = 0.0;    // meters
  double bearing = 0.0;  // radians
};

/// With probability `rate` (drawn from occurrence_rng), adds the bias with
/// random per-channel signs (drawn from sign_rng) and marks the measurement
/// compromised; otherwise returns it unchanged. The simulator feeds a
/// per-link persistent sign stream so one link is pushed consistently instead
/// of averaging itself out.
RelativeMeasurement attack_measurement(const RelativeMeasurement& m, double rate,
                                       const InjectionMagnitude& magnitude,
                                       Rng& occurrence_rng, Rng& sign_rng);

RelativeMeasurement attack_measurement(const RelativeMeasurement& m, double rate,
                                       const InjectionMagnitude& magnitude, Rng& rng);

/// Communication indicator sample: false (link dropped) with probability rate.
bool comm_available(double rate, Rng& rng);

}  // namespace mrcl
