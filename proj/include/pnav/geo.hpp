#pragma once

#include <stdexcept>

namespace pnav {

// Spherical Earth radius used throughout, in meters.
inline constexpr double kEarthRadiusM = 6'371'000.0;

/// Geodetic coordinate in degrees. lat in [-90, 90], lon in [-180, 180).
struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;
};

/// Thrown by initial_bearing when from == to; callers should treat the
/// degenerate case as "already arrived".
struct DegenerateBearingError : std::domain_error {
    DegenerateBearingError() : std::domain_error("bearing undefined: from == to") {}
};

/// Throws std::invalid_argument if p is non-finite or out of range.
void validate_geo_point(const GeoPoint& p);

/// Normalize an angle to compass convention [0, 360).
double normalize_compass(double deg);

/// Wrap an angle difference to (-180, 180]. Idempotent, value-preserving mod 360.
double wrap_signed(double deg);

/// Great-circle distance in meters. Symmetric, non-negative, zero iff a == b.
double haversine_distance(const GeoPoint& a, const GeoPoint& b);

/// Initial great-circle bearing from `from` to `to`, compass-normalized
/// (0 = true north, 90 = east). Throws DegenerateBearingError if from == to.
double initial_bearing(const GeoPoint& from, const GeoPoint& to);

enum class SteerDirection { Left, Straight, Right };

struct SteeringCommand {
    SteerDirection direction = SteerDirection::Straight;
    double magnitude_deg = 0.0;
};

/// Minimal-steering decision: turn toward the bearing by the signed-wrapped
/// difference, with a deadband (default 2 deg) mapped to Straight.
SteeringCommand steering_command(double bearing_deg, double heading_deg,
                                 double deadband_deg = 2.0);

/// True heading from a magnetic compass reading and local declination
/// (degrees, east-positive): normalize(magnetic + declination).
double true_heading(double magnetic_deg, double declination_deg);

/// Local tangent-plane offset from an origin, in meters (equirectangular).
struct EnuOffset {
    double east_m = 0.0;
    double north_m = 0.0;
};

/// Project p into the local east/north plane at origin. Valid within 10 km;
/// throws std::domain_error outside the approximation domain.
EnuOffset enu_project(const GeoPoint& origin, const GeoPoint& p);

/// Inverse of enu_project. Same 10 km domain restriction.
GeoPoint enu_unproject(const GeoPoint& origin, double east_m, double north_m);

} // namespace pnav
