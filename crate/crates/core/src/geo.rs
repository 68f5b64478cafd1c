//! Spherical-earth primitives: great-circle distance, slant geometry, and
//! spherical interpolation between points.
//!
//! The Earth is modeled as a sphere of radius [`EARTH_RADIUS_KM`]; every
//! distance the toolkit reports is at km precision, where the spherical
//! error (<0.5%) is below the tolerances in use. Link geometry is flat-earth
//! (no curvature bulge correction), which at the ≤121 km ground ranges in
//! play stays under 0.1 km of slant error.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Mean Earth radius in km. The single source for all geodesic math.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeoError {
    #[error("latitude {0} degrees outside [-90, 90]")]
    LatitudeOutOfRange(f64),
    #[error("coordinate is not a finite number")]
    NonFiniteCoordinate,
    #[error("arc length {s_km} km outside the valid interval [0, {length_km}] km")]
    ArcLengthOutOfRange { s_km: f64, length_km: f64 },
    #[error("slant range {slant_km} km is shorter than the altitude difference {altitude_km} km")]
    SlantBelowAltitude { slant_km: f64, altitude_km: f64 },
}

/// A point on the sphere. Longitude is normalized to [-180, 180) once, on
/// construction, so equality and distance never have to re-wrap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    lat_deg: f64,
    lon_deg: f64,
}

impl GeoPoint {
    pub fn new(lat_deg: f64, lon_deg: f64) -> Result<Self, GeoError> {
        if !lat_deg.is_finite() || !lon_deg.is_finite() {
            return Err(GeoError::NonFiniteCoordinate);
        }
        if !(-90.0..=90.0).contains(&lat_deg) {
            return Err(GeoError::LatitudeOutOfRange(lat_deg));
        }
        Ok(Self {
            lat_deg,
            lon_deg: normalize_lon_deg(lon_deg),
        })
    }

    pub fn lat_deg(&self) -> f64 {
        self.lat_deg
    }

    pub fn lon_deg(&self) -> f64 {
        self.lon_deg
    }

    fn to_unit_vector(self) -> [f64; 3] {
        let lat = self.lat_deg.to_radians();
        let lon = self.lon_deg.to_radians();
        [lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin()]
    }

    fn from_unit_vector(v: [f64; 3]) -> Self {
        let lat = v[2].atan2(v[0].hypot(v[1])).to_degrees();
        let lon = v[1].atan2(v[0]).to_degrees();
        Self {
            lat_deg: lat.clamp(-90.0, 90.0),
            lon_deg: normalize_lon_deg(lon),
        }
    }
}

fn normalize_lon_deg(lon: f64) -> f64 {
    let wrapped = (lon + 180.0).rem_euclid(360.0) - 180.0;
    // rem_euclid keeps the result in [-180, 180); -0.0 folds to 0.0
    if wrapped == 0.0 {
        0.0
    } else {
        wrapped
    }
}

/// Great-circle distance between two points in km (haversine, atan2 form).
///
/// Total, symmetric, and zero exactly when the normalized coordinates are
/// identical. Bounded by π·R.
pub fn great_circle_distance(a: GeoPoint, b: GeoPoint) -> f64 {
    let lat1 = a.lat_deg.to_radians();
    let lat2 = b.lat_deg.to_radians();
    let dlat = lat2 - lat1;
    let dlon = (b.lon_deg - a.lon_deg).to_radians();

    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    let h = h.clamp(0.0, 1.0);
    EARTH_RADIUS_KM * 2.0 * h.sqrt().atan2((1.0 - h).sqrt())
}

/// Geometry of a straight path between a ground point and a platform (or
/// between two platforms at the same altitude, where the altitude
/// difference is zero and the path is horizontal).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlantGeometry {
    pub ground_distance_km: f64,
    pub altitude_difference_km: f64,
    pub slant_range_km: f64,
    /// Elevation of the path above the horizontal, in [0, π/2]. Horizontal
    /// paths sit at 0; the degenerate zero-length path uses π/2 (nadir
    /// convention).
    pub elevation_angle_rad: f64,
}

/// Slant geometry from a horizontal ground separation and an altitude
/// difference. Both arguments must be non-negative.
pub fn slant_range(ground_distance_km: f64, altitude_km: f64) -> SlantGeometry {
    assert!(
        ground_distance_km >= 0.0 && altitude_km >= 0.0,
        "slant_range expects non-negative distances"
    );
    let slant = ground_distance_km.hypot(altitude_km);
    let elevation = if ground_distance_km == 0.0 && altitude_km == 0.0 {
        FRAC_PI_2
    } else {
        altitude_km.atan2(ground_distance_km)
    };
    SlantGeometry {
        ground_distance_km,
        altitude_difference_km: altitude_km,
        slant_range_km: slant,
        elevation_angle_rad: elevation,
    }
}

impl SlantGeometry {
    /// Horizontal path of the given length (both endpoints at the same
    /// altitude), e.g. a platform-to-platform link.
    pub fn horizontal(distance_km: f64) -> Self {
        assert!(distance_km >= 0.0, "horizontal path length must be >= 0");
        SlantGeometry {
            ground_distance_km: distance_km,
            altitude_difference_km: 0.0,
            slant_range_km: distance_km,
            elevation_angle_rad: 0.0,
        }
    }

    /// Invert a slant range back into ground distance for a fixed altitude
    /// difference. Fails if the slant is shorter than the altitude.
    pub fn from_slant_and_altitude(slant_km: f64, altitude_km: f64) -> Result<Self, GeoError> {
        if slant_km < altitude_km {
            return Err(GeoError::SlantBelowAltitude {
                slant_km,
                altitude_km,
            });
        }
        let ground = (slant_km * slant_km - altitude_km * altitude_km)
            .max(0.0)
            .sqrt();
        Ok(slant_range(ground, altitude_km))
    }
}

/// Spherical linear interpolation between two points; `t` in [0, 1] moves
/// along the great-circle arc from `a` to `b` proportionally to arc length.
pub fn slerp(a: GeoPoint, b: GeoPoint, t: f64) -> GeoPoint {
    let va = a.to_unit_vector();
    let vb = b.to_unit_vector();
    let dot = (va[0] * vb[0] + va[1] * vb[1] + va[2] * vb[2]).clamp(-1.0, 1.0);
    let omega = dot.acos();
    if omega < 1e-12 {
        return a;
    }
    let sin_omega = omega.sin();
    let ka = ((1.0 - t) * omega).sin() / sin_omega;
    let kb = (t * omega).sin() / sin_omega;
    GeoPoint::from_unit_vector([
        va[0] * ka + vb[0] * kb,
        va[1] * ka + vb[1] * kb,
        va[2] * ka + vb[2] * kb,
    ])
}
