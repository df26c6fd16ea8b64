#include "mrcl/adversary.hpp"

#include <algorithm>

#include "mrcl/angles.hpp"

namespace mrcl {

double risk_at(const DangerZone& zone, const Vec2& p) {
  const double dist = (p - zone.center).norm();
  return zone.peak_rate * std::max(0.0, 1.0 - dist / zone.radius);
}

bool inside_zone(const DangerZone& zone, const Vec2& p) {
  return risk_at(zone, p) >= zone.threshold && zone.threshold > 0.0;
}

double zone_rate_at(std::span<const DangerZone> zones, ZoneKind kind, const Vec2& p) {
  double rate = 0.0;
  for (const DangerZone& zone : zones) {
    if (zone.kind != kind) continue;
    rate = std::max(rate, risk_at(zone, p));
  }
  return rate;
}

RelativeMeasurement attack_measurement(const RelativeMeasurement& m, double rate,
                                       const InjectionMagnitude& magnitude,
                                       Rng& occurrence_rng, Rng& sign_rng) {
  if (!occurrence_rng.bernoulli(rate)) return m;
  RelativeMeasurement out = m;
  const double range_sign = sign_rng.bernoulli(0.5) ? 1.0 : -1.0;
  const double bearing_sign = sign_rng.bernoulli(0.5) ? 1.0 : -1.0;
  out.range = m.range + range_sign * magnitude.range;
  out.bearing = wrap_angle(m.bearing + bearing_sign * magnitude.bearing);
  out.compromised = true;
  return out;
}

RelativeMeasurement attack_measurement(const RelativeMeasurement& m, double rate,
                                       const InjectionMagnitude& magnitude, Rng& rng) {
  return attack_measurement(m, rate, magnitude, rng, rng);
}

bool comm_available(double rate, Rng& rng) { return !rng.bernoulli(rate); }

}  // namespace mrcl
