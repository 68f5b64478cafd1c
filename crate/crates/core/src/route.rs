//! Highway centerline ingestion and arc-length bookkeeping: polylines with
//! cumulative arc length, 1-D coverage masks along the route, and gateway
//! sites.
//!
//! Coverage is tracked as arc-length intervals rather than polygons: the
//! planner only ever consumes stretches of the route, so 1-D intervals are
//! the exact representation and no GIS machinery is needed.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::{self, GeoError, GeoPoint};

#[derive(Debug, Error)]
pub enum RouteError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("failed to parse {path}: {message}")]
    Parse { path: String, message: String },
    #[error("unsupported route file extension '{0}' (expected .geojson, .json, or .csv)")]
    UnsupportedFormat(String),
    #[error("route needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("consecutive duplicate vertex at index {0}")]
    DuplicateVertex(usize),
    #[error("degenerate route: total length is zero")]
    DegenerateRoute,
    #[error(transparent)]
    Geo(#[from] GeoError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaskError {
    #[error("interval [{start_km}, {end_km}] is not a forward interval")]
    EmptyInterval { start_km: f64, end_km: f64 },
    #[error("interval [{start_km}, {end_km}] lies outside [0, {length_km}]")]
    OutsideRoute {
        start_km: f64,
        end_km: f64,
        length_km: f64,
    },
    #[error("interval bound is not a finite number")]
    NonFiniteBound,
}

/// A geodesic polyline with per-vertex cumulative arc length.
#[derive(Debug, Clone)]
pub struct RoutePolyline {
    name: String,
    vertices: Vec<GeoPoint>,
    cumulative_s_km: Vec<f64>,
}

impl RoutePolyline {
    /// Build a polyline from ordered vertices, computing cumulative arc
    /// length. Consecutive duplicate vertices are an error rather than
    /// silently merged; silent fixing hides data problems in long traces.
    pub fn from_points(name: impl Into<String>, vertices: Vec<GeoPoint>) -> Result<Self, RouteError> {
        if vertices.len() < 2 {
            return Err(RouteError::TooFewVertices(vertices.len()));
        }
        let mut cumulative = Vec::with_capacity(vertices.len());
        cumulative.push(0.0);
        for i in 1..vertices.len() {
            let seg = geo::great_circle_distance(vertices[i - 1], vertices[i]);
            if seg == 0.0 {
                return Err(RouteError::DuplicateVertex(i));
            }
            cumulative.push(cumulative[i - 1] + seg);
        }
        let total = *cumulative.last().unwrap();
        if total <= 0.0 {
            return Err(RouteError::DegenerateRoute);
        }
        Ok(Self {
            name: name.into(),
            vertices,
            cumulative_s_km: cumulative,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertices(&self) -> &[GeoPoint] {
        &self.vertices
    }

    pub fn cumulative_s_km(&self) -> &[f64] {
        &self.cumulative_s_km
    }

    pub fn length_km(&self) -> f64 {
        *self.cumulative_s_km.last().unwrap()
    }

    /// Point at arc length `s_km`, by spherical interpolation on the
    /// containing segment. `s_km` must lie in [0, length].
    pub fn point_at(&self, s_km: f64) -> Result<GeoPoint, GeoError> {
        let length = self.length_km();
        if !s_km.is_finite() || s_km < 0.0 || s_km > length {
            return Err(GeoError::ArcLengthOutOfRange {
                s_km,
                length_km: length,
            });
        }
        // Largest vertex index whose cumulative arc length is <= s.
        let idx = match self
            .cumulative_s_km
            .binary_search_by(|c| c.partial_cmp(&s_km).unwrap())
        {
            Ok(exact) => return Ok(self.vertices[exact]),
            Err(insert) => insert - 1,
        };
        let seg_start = self.cumulative_s_km[idx];
        let seg_len = self.cumulative_s_km[idx + 1] - seg_start;
        let t = (s_km - seg_start) / seg_len;
        Ok(geo::slerp(self.vertices[idx], self.vertices[idx + 1], t))
    }
}

/// A forward interval of arc length along a route, in km.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcInterval {
    pub start_km: f64,
    pub end_km: f64,
}

impl ArcInterval {
    pub fn new(start_km: f64, end_km: f64) -> Result<Self, MaskError> {
        if !start_km.is_finite() || !end_km.is_finite() {
            return Err(MaskError::NonFiniteBound);
        }
        if start_km < 0.0 || start_km >= end_km {
            return Err(MaskError::EmptyInterval { start_km, end_km });
        }
        Ok(Self { start_km, end_km })
    }

    pub fn length_km(&self) -> f64 {
        self.end_km - self.start_km
    }
}

/// A normalized set of arc-length intervals: sorted, pairwise disjoint,
/// touching intervals merged. The normal form makes the complement within
/// [0, L] well-defined and mask equality structural.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoverageMask {
    intervals: Vec<ArcInterval>,
}

impl CoverageMask {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_intervals<I>(intervals: I) -> Result<Self, MaskError>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut parsed = Vec::new();
        for (start, end) in intervals {
            parsed.push(ArcInterval::new(start, end)?);
        }
        Ok(Self::normalized(parsed))
    }

    /// The full stretch [0, length].
    pub fn full(length_km: f64) -> Self {
        Self {
            intervals: vec![ArcInterval {
                start_km: 0.0,
                end_km: length_km,
            }],
        }
    }

    fn normalized(mut intervals: Vec<ArcInterval>) -> Self {
        intervals.sort_by(|a, b| a.start_km.partial_cmp(&b.start_km).unwrap());
        let mut merged: Vec<ArcInterval> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                Some(last) if iv.start_km <= last.end_km => {
                    last.end_km = last.end_km.max(iv.end_km);
                }
                _ => merged.push(iv),
            }
        }
        Self { intervals: merged }
    }

    pub fn intervals(&self) -> &[ArcInterval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total_length_km(&self) -> f64 {
        self.intervals.iter().map(ArcInterval::length_km).sum()
    }

    /// Leftmost covered point, if any.
    pub fn first_point_km(&self) -> Option<f64> {
        self.intervals.first().map(|iv| iv.start_km)
    }

    pub fn contains(&self, s_km: f64) -> bool {
        self.intervals
            .iter()
            .any(|iv| iv.start_km <= s_km && s_km <= iv.end_km)
    }

    fn check_within(&self, length_km: f64) -> Result<(), MaskError> {
        if let Some(last) = self.intervals.last() {
            if last.end_km > length_km {
                return Err(MaskError::OutsideRoute {
                    start_km: last.start_km,
                    end_km: last.end_km,
                    length_km,
                });
            }
        }
        Ok(())
    }

    /// Set complement within [0, length]. Complementing twice restores the
    /// original mask exactly: endpoints are copied, never recomputed.
    pub fn complement(&self, length_km: f64) -> Result<CoverageMask, MaskError> {
        self.check_within(length_km)?;
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for iv in &self.intervals {
            if iv.start_km > cursor {
                out.push(ArcInterval {
                    start_km: cursor,
                    end_km: iv.start_km,
                });
            }
            cursor = iv.end_km;
        }
        if cursor < length_km {
            out.push(ArcInterval {
                start_km: cursor,
                end_km: length_km,
            });
        }
        Ok(CoverageMask { intervals: out })
    }

    pub fn union(&self, other: &CoverageMask) -> CoverageMask {
        let mut all = self.intervals.clone();
        all.extend_from_slice(&other.intervals);
        CoverageMask::normalized(all)
    }

    pub fn insert(&mut self, interval: ArcInterval) {
        let mut all = std::mem::take(&mut self.intervals);
        all.push(interval);
        *self = CoverageMask::normalized(all);
    }

    pub fn intersect(&self, other: &CoverageMask) -> CoverageMask {
        let mut out = Vec::new();
        let mut j = 0;
        for a in &self.intervals {
            while j < other.intervals.len() && other.intervals[j].end_km <= a.start_km {
                j += 1;
            }
            let mut k = j;
            while k < other.intervals.len() && other.intervals[k].start_km < a.end_km {
                let b = &other.intervals[k];
                let start = a.start_km.max(b.start_km);
                let end = a.end_km.min(b.end_km);
                if start < end {
                    out.push(ArcInterval {
                        start_km: start,
                        end_km: end,
                    });
                }
                k += 1;
            }
        }
        CoverageMask { intervals: out }
    }

    /// Set difference `self \ other`, dropping slivers shorter than
    /// `min_sliver_km` so floating-point dust cannot stall a sweep.
    pub fn subtract(&self, other: &CoverageMask, min_sliver_km: f64) -> CoverageMask {
        let mut out: Vec<ArcInterval> = Vec::new();
        for a in &self.intervals {
            let mut cursor = a.start_km;
            for b in &other.intervals {
                if b.end_km <= cursor {
                    continue;
                }
                if b.start_km >= a.end_km {
                    break;
                }
                if b.start_km > cursor {
                    out.push(ArcInterval {
                        start_km: cursor,
                        end_km: b.start_km,
                    });
                }
                cursor = cursor.max(b.end_km);
                if cursor >= a.end_km {
                    break;
                }
            }
            if cursor < a.end_km {
                out.push(ArcInterval {
                    start_km: cursor,
                    end_km: a.end_km,
                });
            }
        }
        out.retain(|iv| iv.length_km() > min_sliver_km);
        CoverageMask { intervals: out }
    }

    /// Copy of the mask with intervals shorter than `min_len_km` removed.
    pub fn drop_slivers(&self, min_len_km: f64) -> CoverageMask {
        CoverageMask {
            intervals: self
                .intervals
                .iter()
                .filter(|iv| iv.length_km() > min_len_km)
                .copied()
                .collect(),
        }
    }
}

/// A ground station site terminating platform backhaul.
#[derive(Debug, Clone, PartialEq)]
pub struct GatewaySite {
    pub id: String,
    pub location: GeoPoint,
    /// Name of a terminal profile in the FSO parameter config.
    pub terminal: String,
}

// ---------------------------------------------------------------------------
// File ingestion
// ---------------------------------------------------------------------------

fn read_file(path: &Path) -> Result<String, RouteError> {
    fs::read_to_string(path).map_err(|source| RouteError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_error(path: &Path, message: impl Into<String>) -> RouteError {
    RouteError::Parse {
        path: path.display().to_string(),
        message: message.into(),
    }
}

/// Load a route polyline. The format is selected by extension:
/// `.geojson`/`.json` for a GeoJSON FeatureCollection/Feature carrying a
/// LineString (coordinates `[lon, lat]`, WGS84), `.csv` for `lat,lon` rows
/// with a one-line header.
pub fn load_route(path: &Path) -> Result<RoutePolyline, RouteError> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase();
    match ext.as_str() {
        "geojson" | "json" => load_route_geojson(path),
        "csv" => load_route_csv(path),
        other => Err(RouteError::UnsupportedFormat(other.to_string())),
    }
}

fn default_route_name(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("route")
        .to_string()
}

fn load_route_geojson(path: &Path) -> Result<RoutePolyline, RouteError> {
    let text = read_file(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| parse_error(path, e.to_string()))?;

    let (geometry, name) = extract_linestring(&value)
        .ok_or_else(|| parse_error(path, "no LineString geometry found"))?;

    let coords = geometry
        .get("coordinates")
        .and_then(|c| c.as_array())
        .ok_or_else(|| parse_error(path, "LineString has no coordinate array"))?;

    let mut vertices = Vec::with_capacity(coords.len());
    for (i, pos) in coords.iter().enumerate() {
        let pair = pos
            .as_array()
            .filter(|p| p.len() >= 2)
            .ok_or_else(|| parse_error(path, format!("coordinate {i} is not a [lon, lat] pair")))?;
        let lon = pair[0]
            .as_f64()
            .ok_or_else(|| parse_error(path, format!("coordinate {i} longitude is not a number")))?;
        let lat = pair[1]
            .as_f64()
            .ok_or_else(|| parse_error(path, format!("coordinate {i} latitude is not a number")))?;
        vertices.push(GeoPoint::new(lat, lon)?);
    }

    let name = name.unwrap_or_else(|| default_route_name(path));
    RoutePolyline::from_points(name, vertices)
}

/// Find the first LineString geometry in a FeatureCollection, Feature, or
/// bare geometry, along with an optional `name` property.
fn extract_linestring(value: &serde_json::Value) -> Option<(&serde_json::Value, Option<String>)> {
    match value.get("type").and_then(|t| t.as_str())? {
        "FeatureCollection" => value
            .get("features")?
            .as_array()?
            .iter()
            .find_map(extract_linestring),
        "Feature" => {
            let geometry = value.get("geometry")?;
            if geometry.get("type").and_then(|t| t.as_str()) == Some("LineString") {
                let name = value
                    .get("properties")
                    .and_then(|p| p.get("name"))
                    .and_then(|n| n.as_str())
                    .map(String::from);
                Some((geometry, name))
            } else {
                None
            }
        }
        "LineString" => Some((value, None)),
        _ => None,
    }
}

fn load_route_csv(path: &Path) -> Result<RoutePolyline, RouteError> {
    let text = read_file(path)?;
    let mut vertices = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if lineno == 0 {
            continue; // one-line header
        }
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let lat = fields
            .next()
            .and_then(|f| f.trim().parse::<f64>().ok())
            .ok_or_else(|| parse_error(path, format!("line {}: bad latitude", lineno + 1)))?;
        let lon = fields
            .next()
            .and_then(|f| f.trim().parse::<f64>().ok())
            .ok_or_else(|| parse_error(path, format!("line {}: bad longitude", lineno + 1)))?;
        vertices.push(GeoPoint::new(lat, lon)?);
    }
    RoutePolyline::from_points(default_route_name(path), vertices)
}

/// Write a route back out, format selected by extension like [`load_route`].
/// Coordinates round-trip exactly: both writers emit the shortest decimal
/// that parses back to the same f64.
pub fn save_route(route: &RoutePolyline, path: &Path) -> Result<(), RouteError> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase();
    let body = match ext.as_str() {
        "geojson" | "json" => {
            let coords: Vec<[f64; 2]> = route
                .vertices()
                .iter()
                .map(|v| [v.lon_deg(), v.lat_deg()])
                .collect();
            let doc = serde_json::json!({
                "type": "FeatureCollection",
                "features": [{
                    "type": "Feature",
                    "properties": { "name": route.name() },
                    "geometry": { "type": "LineString", "coordinates": coords },
                }],
            });
            let mut text = serde_json::to_string_pretty(&doc).expect("route serializes");
            text.push('\n');
            text
        }
        "csv" => {
            let mut text = String::from("lat,lon\n");
            for v in route.vertices() {
                text.push_str(&format!("{},{}\n", v.lat_deg(), v.lon_deg()));
            }
            text
        }
        other => return Err(RouteError::UnsupportedFormat(other.to_string())),
    };
    fs::write(path, body).map_err(|source| RouteError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Deserialize)]
struct MaskIntervalFile {
    start_km: f64,
    end_km: f64,
}

/// Load a coverage mask: a JSON array of `{"start_km", "end_km"}` objects.
pub fn load_mask(path: &Path) -> Result<CoverageMask, RouteError> {
    let text = read_file(path)?;
    let raw: Vec<MaskIntervalFile> =
        serde_json::from_str(&text).map_err(|e| parse_error(path, e.to_string()))?;
    CoverageMask::from_intervals(raw.iter().map(|iv| (iv.start_km, iv.end_km)))
        .map_err(|e| parse_error(path, e.to_string()))
}

#[derive(Deserialize)]
struct GatewayFile {
    id: String,
    lat: f64,
    lon: f64,
    terminal: String,
}

/// Load gateway sites: a JSON array of `{"id", "lat", "lon", "terminal"}`
/// where `terminal` names a profile in the FSO parameter config.
pub fn load_gateways(path: &Path) -> Result<Vec<GatewaySite>, RouteError> {
    let text = read_file(path)?;
    let raw: Vec<GatewayFile> =
        serde_json::from_str(&text).map_err(|e| parse_error(path, e.to_string()))?;
    let mut sites = Vec::with_capacity(raw.len());
    let mut seen = std::collections::HashSet::new();
    for gw in raw {
        if !seen.insert(gw.id.clone()) {
            return Err(parse_error(path, format!("duplicate gateway id '{}'", gw.id)));
        }
        sites.push(GatewaySite {
            id: gw.id,
            location: GeoPoint::new(gw.lat, gw.lon)?,
            terminal: gw.terminal,
        });
    }
    Ok(sites)
}
