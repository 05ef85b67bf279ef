//! Spherical geodesy: distances, bearings and compass sectors.

use core::fmt;

use serde::{Deserialize, Serialize};

use crate::EARTH_RADIUS_M;

const DEG2RAD: f64 = core::f64::consts::PI / 180.0;

/// A WGS84 latitude/longitude pair in degrees.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Self {
        Self { lat, lon }
    }

    /// True when both coordinates are finite and inside the WGS84 range.
    pub fn is_valid(&self) -> bool {
        self.lat.is_finite()
            && self.lon.is_finite()
            && (-90.0..=90.0).contains(&self.lat)
            && (-180.0..=180.0).contains(&self.lon)
    }
}

impl fmt::Display for GeoPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.5}, {:.5})", self.lat, self.lon)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeoError {
    /// Bearing is undefined for a pair of identical points.
    DegeneratePair,
}

impl fmt::Display for GeoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeoError::DegeneratePair => write!(f, "bearing undefined for identical points"),
        }
    }
}

impl core::error::Error for GeoError {}

/// Great-circle distance in meters on a sphere of [`EARTH_RADIUS_M`].
///
/// Symmetric, zero iff the points coincide. The haversine form stays
/// well conditioned at the meter scales the segment lengths need.
pub fn haversine_m(p1: GeoPoint, p2: GeoPoint) -> f64 {
    let lat1 = p1.lat * DEG2RAD;
    let lat2 = p2.lat * DEG2RAD;
    let dlat = (p2.lat - p1.lat) * DEG2RAD;
    let dlon = (p2.lon - p1.lon) * DEG2RAD;

    let sin_dlat = libm::sin(dlat / 2.0);
    let sin_dlon = libm::sin(dlon / 2.0);
    let a = sin_dlat * sin_dlat + libm::cos(lat1) * libm::cos(lat2) * sin_dlon * sin_dlon;
    let a = if a > 1.0 { 1.0 } else { a };
    2.0 * EARTH_RADIUS_M * libm::asin(libm::sqrt(a))
}

/// Initial great-circle bearing from `p1` to `p2` in degrees, 0 = true
/// north, clockwise, in `[0, 360)`.
pub fn initial_bearing_deg(p1: GeoPoint, p2: GeoPoint) -> Result<f64, GeoError> {
    if p1.lat == p2.lat && p1.lon == p2.lon {
        return Err(GeoError::DegeneratePair);
    }
    let lat1 = p1.lat * DEG2RAD;
    let lat2 = p2.lat * DEG2RAD;
    let dlon = (p2.lon - p1.lon) * DEG2RAD;

    let y = libm::sin(dlon) * libm::cos(lat2);
    let x = libm::cos(lat1) * libm::sin(lat2) - libm::sin(lat1) * libm::cos(lat2) * libm::cos(dlon);
    let theta = libm::atan2(y, x) / DEG2RAD;
    let bearing = if theta < 0.0 { theta + 360.0 } else { theta };
    // atan2 can land exactly on 360.0 after the shift
    Ok(if bearing >= 360.0 { bearing - 360.0 } else { bearing })
}

/// One of the eight 45-degree compass sectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CompassDirection {
    N,
    NE,
    E,
    SE,
    S,
    SW,
    W,
    NW,
}

impl CompassDirection {
    pub const ALL: [CompassDirection; 8] = [
        CompassDirection::N,
        CompassDirection::NE,
        CompassDirection::E,
        CompassDirection::SE,
        CompassDirection::S,
        CompassDirection::SW,
        CompassDirection::W,
        CompassDirection::NW,
    ];

    pub fn token(&self) -> &'static str {
        match self {
            CompassDirection::N => "N",
            CompassDirection::NE => "NE",
            CompassDirection::E => "E",
            CompassDirection::SE => "SE",
            CompassDirection::S => "S",
            CompassDirection::SW => "SW",
            CompassDirection::W => "W",
            CompassDirection::NW => "NW",
        }
    }

    pub fn word(&self) -> &'static str {
        match self {
            CompassDirection::N => "north",
            CompassDirection::NE => "northeast",
            CompassDirection::E => "east",
            CompassDirection::SE => "southeast",
            CompassDirection::S => "south",
            CompassDirection::SW => "southwest",
            CompassDirection::W => "west",
            CompassDirection::NW => "northwest",
        }
    }

    pub fn opposite(&self) -> CompassDirection {
        match self {
            CompassDirection::N => CompassDirection::S,
            CompassDirection::NE => CompassDirection::SW,
            CompassDirection::E => CompassDirection::W,
            CompassDirection::SE => CompassDirection::NW,
            CompassDirection::S => CompassDirection::N,
            CompassDirection::SW => CompassDirection::NE,
            CompassDirection::W => CompassDirection::E,
            CompassDirection::NW => CompassDirection::SE,
        }
    }

    pub fn from_token(s: &str) -> Option<CompassDirection> {
        CompassDirection::ALL
            .iter()
            .copied()
            .find(|d| d.token().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for CompassDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Axis-aligned latitude/longitude box, the AOI of a network.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min_lat: f64,
    pub max_lat: f64,
    pub min_lon: f64,
    pub max_lon: f64,
}

impl BoundingBox {
    /// Smallest box covering all points. `None` for an empty iterator.
    pub fn from_points<I: IntoIterator<Item = GeoPoint>>(points: I) -> Option<BoundingBox> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut bbox = BoundingBox {
            min_lat: first.lat,
            max_lat: first.lat,
            min_lon: first.lon,
            max_lon: first.lon,
        };
        for p in it {
            bbox.min_lat = bbox.min_lat.min(p.lat);
            bbox.max_lat = bbox.max_lat.max(p.lat);
            bbox.min_lon = bbox.min_lon.min(p.lon);
            bbox.max_lon = bbox.max_lon.max(p.lon);
        }
        Some(bbox)
    }

    pub fn contains(&self, p: GeoPoint) -> bool {
        p.lat >= self.min_lat && p.lat <= self.max_lat && p.lon >= self.min_lon && p.lon <= self.max_lon
    }

    /// Largest absolute latitude touched by the box.
    pub fn max_abs_lat(&self) -> f64 {
        let a = if self.min_lat < 0.0 { -self.min_lat } else { self.min_lat };
        let b = if self.max_lat < 0.0 { -self.max_lat } else { self.max_lat };
        if a > b { a } else { b }
    }
}

/// Classifies a bearing in `[0, 360)` into its 45-degree sector.
///
/// Sectors are centered on the eight directions with lower bounds
/// inclusive and upper bounds exclusive, so N covers
/// `[337.5, 360) ∪ [0, 22.5)` and NE starts exactly at 22.5.
pub fn compass_of(bearing_deg: f64) -> CompassDirection {
    debug_assert!((0.0..360.0).contains(&bearing_deg));
    let shifted = bearing_deg + 22.5;
    let shifted = if shifted >= 360.0 { shifted - 360.0 } else { shifted };
    let idx = (shifted / 45.0) as usize;
    CompassDirection::ALL[idx.min(7)]
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from scripts/geodesy_oracle.py (50-digit vector
    // geodesy, independent of the formulas above).
    const ORACLE: &[((f64, f64), (f64, f64), f64, f64)] = &[
        ((0.0, 0.0), (0.0, 1.0), 111_194.92664455874, 90.0),
        ((-43.5103, 172.6318), (-43.5321, 172.6362), 2449.8729534719072, 171.67513782831401),
        ((10.0, 10.0), (11.0, 11.0), 155_941.21480117145, 44.426216835009376),
        ((0.0, 0.0), (1.0, 0.0), 111_194.92664455874, 0.0),
        ((51.5074, -0.1278), (48.8566, 2.3522), 343_556.06034104167, 148.11561687105333),
        ((-33.8688, 151.2093), (-36.8485, 174.7633), 2_155_898.3259777404, 105.57565358519376),
        ((80.0, 10.0), (80.0, 170.0), 2_189_773.2413033756, 10.151081711048133),
    ];

    #[test]
    fn haversine_matches_oracle() {
        for &((lat1, lon1), (lat2, lon2), dist, _) in ORACLE {
            let got = haversine_m(GeoPoint::new(lat1, lon1), GeoPoint::new(lat2, lon2));
            let rel = (got - dist).abs() / dist;
            assert!(rel < 1e-12, "({lat1},{lon1})->({lat2},{lon2}): {got} vs {dist}");
        }
    }

    #[test]
    fn bearing_matches_oracle() {
        for &((lat1, lon1), (lat2, lon2), _, bearing) in ORACLE {
            let got =
                initial_bearing_deg(GeoPoint::new(lat1, lon1), GeoPoint::new(lat2, lon2)).unwrap();
            assert!(
                (got - bearing).abs() < 1e-9,
                "({lat1},{lon1})->({lat2},{lon2}): {got} vs {bearing}"
            );
        }
    }

    #[test]
    fn haversine_identity_is_zero() {
        let p = GeoPoint::new(-43.5103, 172.6318);
        assert_eq!(haversine_m(p, p), 0.0);
    }

    #[test]
    fn bearing_rejects_identical_points() {
        let p = GeoPoint::new(1.0, 2.0);
        assert_eq!(initial_bearing_deg(p, p), Err(GeoError::DegeneratePair));
    }

    #[test]
    fn compass_sector_bounds() {
        assert_eq!(compass_of(0.0), CompassDirection::N);
        assert_eq!(compass_of(22.5), CompassDirection::NE);
        assert_eq!(compass_of(22.499999), CompassDirection::N);
        assert_eq!(compass_of(337.4999), CompassDirection::NW);
        assert_eq!(compass_of(337.5), CompassDirection::N);
        assert_eq!(compass_of(359.9999999), CompassDirection::N);
        assert_eq!(compass_of(90.0), CompassDirection::E);
        assert_eq!(compass_of(112.5), CompassDirection::SE);
        assert_eq!(compass_of(180.0), CompassDirection::S);
        assert_eq!(compass_of(247.5), CompassDirection::W);
        assert_eq!(compass_of(292.5), CompassDirection::NW);
    }

    #[test]
    fn compass_of_all_sector_centers() {
        for (i, d) in CompassDirection::ALL.iter().enumerate() {
            assert_eq!(compass_of(i as f64 * 45.0), *d);
        }
    }
}
