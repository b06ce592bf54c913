#include "pnav/geo.hpp"

#include <cmath>

namespace pnav {

namespace {
constexpr double kDegToRad = M_PI / 180.0;
constexpr double kRadToDeg = 180.0 / M_PI;
constexpr double kEnuDomainM = 10'000.0;
} // namespace

void validate_geo_point(const GeoPoint& p) {
    if (!std::isfinite(p.lat) || !std::isfinite(p.lon))
        throw std::invalid_argument("GeoPoint has non-finite coordinate");
    if (p.lat < -90.0 || p.lat > 90.0)
        throw std::invalid_argument("GeoPoint latitude out of [-90, 90]");
    if (p.lon < -180.0 || p.lon >= 180.0)
        throw std::invalid_argument("GeoPoint longitude out of [-180, 180)");
}

double normalize_compass(double deg) {
    if (!std::isfinite(deg))
        throw std::invalid_argument("angle is non-finite");
    double r = std::fmod(deg, 360.0);
    if (r < 0.0) r += 360.0;
    if (r >= 360.0) r = 0.0; // fmod rounding at the seam
    return r;
}

double wrap_signed(double deg) {
    if (!std::isfinite(deg))
        throw std::invalid_argument("angle is non-finite");
    double r = std::fmod(deg, 360.0);
    if (r <= -180.0) r += 360.0;
    else if (r > 180.0) r -= 360.0;
    return r;
}

double haversine_distance(const GeoPoint& a, const GeoPoint& b) {
    validate_geo_point(a);
    validate_geo_point(b);
    const double phi1 = a.lat * kDegToRad;
    const double phi2 = b.lat * kDegToRad;
    const double dphi = (b.lat - a.lat) * kDegToRad;
    const double dlam = (b.lon - a.lon) * kDegToRad;
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlam / 2.0);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    return 2.0 * kEarthRadiusM * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

double initial_bearing(const GeoPoint& from, const GeoPoint& to) {
    validate_geo_point(from);
    validate_geo_point(to);
    if (from.lat == to.lat && from.lon == to.lon)
        throw DegenerateBearingError{};
    const double phi1 = from.lat * kDegToRad;
    const double phi2 = to.lat * kDegToRad;
    const double dlam = (to.lon - from.lon) * kDegToRad;
    const double y = std::sin(dlam) * std::cos(phi2);
    const double x = std::cos(phi1) * std::sin(phi2) -
                     std::sin(phi1) * std::cos(phi2) * std::cos(dlam);
    return normalize_compass(std::atan2(y, x) * kRadToDeg);
}

SteeringCommand steering_command(double bearing_deg, double heading_deg,
                                 double deadband_deg) {
    const double delta = wrap_signed(bearing_deg - heading_deg);
    SteeringCommand cmd;
    cmd.magnitude_deg = std::fabs(delta);
    if (delta > deadband_deg) cmd.direction = SteerDirection::Right;
    else if (delta < -deadband_deg) cmd.direction = SteerDirection::Left;
    else cmd.direction = SteerDirection::Straight;
    return cmd;
}

double true_heading(double magnetic_deg, double declination_deg) {
    return normalize_compass(magnetic_deg + declination_deg);
}

EnuOffset enu_project(const GeoPoint& origin, const GeoPoint& p) {
    validate_geo_point(origin);
    validate_geo_point(p);
    if (haversine_distance(origin, p) >= kEnuDomainM)
        throw std::domain_error("point outside the 10 km local-projection domain");
    EnuOffset out;
    out.north_m = kEarthRadiusM * (p.lat - origin.lat) * kDegToRad;
    out.east_m = kEarthRadiusM * std::cos(origin.lat * kDegToRad) *
                 (p.lon - origin.lon) * kDegToRad;
    return out;
}

GeoPoint enu_unproject(const GeoPoint& origin, double east_m, double north_m) {
    validate_geo_point(origin);
    if (!std::isfinite(east_m) || !std::isfinite(north_m))
        throw std::invalid_argument("ENU offset is non-finite");
    if (std::hypot(east_m, north_m) >= kEnuDomainM)
        throw std::domain_error("offset outside the 10 km local-projection domain");
    GeoPoint p;
    p.lat = origin.lat + (north_m / kEarthRadiusM) * kRadToDeg;
    p.lon = origin.lon + (east_m / (kEarthRadiusM * std::cos(origin.lat * kDegToRad))) * kRadToDeg;
    return p;
}

} // namespace pnav
