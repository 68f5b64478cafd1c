//! Traffic, latency, storage, and payload dimensioning per vehicle
//! automation level.
//!
//! Data volumes use binary byte units (1 MiB = 2^20 B, 1 GiB = 2^30 B)
//! throughout: those are the units under which the per-level hourly volumes
//! reproduce the published uplink endpoints (23.3 kbit/s at level 2,
//! 119.3 Mbit/s at level 5 for a 10% relevant-data share); decimal units
//! would land at 22.2 kbit/s and 111 Mbit/s instead.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::SPEED_OF_LIGHT_M_S;

pub const BYTES_PER_MIB: f64 = 1024.0 * 1024.0;
pub const BYTES_PER_GIB: f64 = 1024.0 * BYTES_PER_MIB;
pub const BYTES_PER_TIB: f64 = 1024.0 * BYTES_PER_GIB;

/// Safety ceiling on vehicle response time, ms.
pub const RESPONSE_TIME_BOUND_MS: f64 = 200.0;

/// Edge-storage sizing band for one platform, bytes.
pub const STORAGE_BAND_BYTES: (f64, f64) = (10.0 * BYTES_PER_TIB, 100.0 * BYTES_PER_TIB);

#[derive(Debug, Error)]
pub enum DimensioningError {
    #[error("unknown automation level {0} (valid levels are 1..=5)")]
    UnknownLevel(u8),
    #[error("vehicle speed must be positive to compute a contact window")]
    ZeroSpeed,
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("failed to parse {path}: {message}")]
    Parse { path: String, message: String },
}

/// Vehicle automation level, 1 (driver assistance) through 5 (full
/// automation).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct CavLevel(u8);

impl CavLevel {
    pub fn new(level: u8) -> Result<Self, DimensioningError> {
        if (1..=5).contains(&level) {
            Ok(Self(level))
        } else {
            Err(DimensioningError::UnknownLevel(level))
        }
    }

    pub fn get(&self) -> u8 {
        self.0
    }

    pub fn all() -> [CavLevel; 5] {
        [1, 2, 3, 4, 5].map(CavLevel)
    }
}

impl TryFrom<u8> for CavLevel {
    type Error = DimensioningError;
    fn try_from(v: u8) -> Result<Self, Self::Error> {
        CavLevel::new(v)
    }
}

impl From<CavLevel> for u8 {
    fn from(l: CavLevel) -> u8 {
        l.0
    }
}

/// Per-level traffic and storage model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CavLevelProfile {
    pub level: CavLevel,
    /// Data generated on board, bytes per hour (binary units).
    pub hourly_volume_bytes: f64,
    /// Share of the hourly volume worth uplinking (0.10 by default).
    pub uplink_fraction: f64,
    /// Downlink service demand per vehicle, bit/s.
    pub downlink_demand_bps: f64,
    /// Sensor data the platform would ingest for edge storage, bytes per
    /// hour.
    pub storage_generation_bytes_per_hour: f64,
}

impl CavLevelProfile {
    /// Modeling defaults per level. Levels 1-2 generate up to 100 MiB/h;
    /// levels 3-5 span 100-500 GiB/h (level 4 sits at the midpoint).
    /// Storage generation runs from 400 MiB/h (radar only) to 300 GiB/h
    /// (radar + LiDAR + camera). Downlink demand spreads over the
    /// 5-50 Mbit/s quality-of-experience band.
    pub fn default_for(level: CavLevel) -> Self {
        let (volume, downlink, storage) = match level.get() {
            1 => (100.0 * BYTES_PER_MIB, 5e6, 400.0 * BYTES_PER_MIB),
            2 => (100.0 * BYTES_PER_MIB, 10e6, 400.0 * BYTES_PER_MIB),
            3 => (100.0 * BYTES_PER_GIB, 25e6, 100.0 * BYTES_PER_GIB),
            4 => (300.0 * BYTES_PER_GIB, 40e6, 200.0 * BYTES_PER_GIB),
            5 => (500.0 * BYTES_PER_GIB, 50e6, 300.0 * BYTES_PER_GIB),
            _ => unreachable!("CavLevel is validated on construction"),
        };
        CavLevelProfile {
            level,
            hourly_volume_bytes: volume,
            uplink_fraction: 0.10,
            downlink_demand_bps: downlink,
            storage_generation_bytes_per_hour: storage,
        }
    }
}

/// Uplink demand in bit/s: the relevant share of the hourly volume, spread
/// over the hour.
pub fn uplink_demand_bps(profile: &CavLevelProfile) -> f64 {
    profile.uplink_fraction * profile.hourly_volume_bytes * 8.0 / 3600.0
}

/// Whether a cell of `cell_capacity_bps` can carry `n_vehicles` at the
/// given per-vehicle demands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellFeasibility {
    pub feasible: bool,
    /// None when per-vehicle demand is zero (capacity never binds).
    pub max_vehicles: Option<u64>,
    pub unbounded: bool,
}

pub fn cell_feasibility(
    n_vehicles: u64,
    per_vehicle_downlink_bps: f64,
    per_vehicle_uplink_bps: f64,
    cell_capacity_bps: f64,
) -> CellFeasibility {
    assert!(
        per_vehicle_downlink_bps >= 0.0 && per_vehicle_uplink_bps >= 0.0,
        "demands must be non-negative"
    );
    assert!(cell_capacity_bps > 0.0, "cell capacity must be positive");
    let per_vehicle = per_vehicle_downlink_bps + per_vehicle_uplink_bps;
    if per_vehicle == 0.0 {
        return CellFeasibility {
            feasible: true,
            max_vehicles: None,
            unbounded: true,
        };
    }
    let max_vehicles = (cell_capacity_bps / per_vehicle).floor() as u64;
    CellFeasibility {
        feasible: n_vehicles <= max_vehicles,
        max_vehicles: Some(max_vehicles),
        unbounded: false,
    }
}

/// One-way vehicle-to-platform-to-vehicle relay latency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelayLatency {
    pub latency_ms: f64,
    /// How many times the latency fits under the response-time ceiling.
    pub response_margin_ratio: f64,
}

/// Propagation-only relay delay over two slant paths, in ms. Processing
/// delay is excluded: pure propagation already reproduces the expected
/// sub-millisecond band over footprint geometry.
pub fn relay_latency(slant_a_km: f64, slant_b_km: f64) -> RelayLatency {
    assert!(slant_a_km > 0.0 && slant_b_km > 0.0, "slants must be positive");
    let km_per_ms = SPEED_OF_LIGHT_M_S / 1e6;
    let latency_ms = (slant_a_km + slant_b_km) / km_per_ms;
    RelayLatency {
        latency_ms,
        response_margin_ratio: RESPONSE_TIME_BOUND_MS / latency_ms,
    }
}

/// Pass-by contact window for a roadside sensor: the vehicle crosses a
/// circular communication range on a chord through its center.
pub fn sensor_contact_window_s(
    comm_range_m: f64,
    vehicle_speed_kmh: f64,
) -> Result<f64, DimensioningError> {
    assert!(comm_range_m > 0.0, "communication range must be positive");
    if vehicle_speed_kmh <= 0.0 {
        return Err(DimensioningError::ZeroSpeed);
    }
    let speed_m_s = vehicle_speed_kmh / 3.6;
    Ok(2.0 * comm_range_m / speed_m_s)
}

/// One entry of a fleet mix: `count` vehicles of `level` dwelling under the
/// platform for `dwell_h` hours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FleetEntry {
    pub level: CavLevel,
    pub count: u64,
    pub dwell_h: f64,
}

/// Storage sizing verdict against the platform band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StorageVerdict {
    pub total_bytes: f64,
    pub fits_band: bool,
    pub band_min_bytes: f64,
    pub band_max_bytes: f64,
}

/// Total edge storage for a fleet mix: per entry,
/// count x storage generation x dwell x ingest fraction.
pub fn storage_requirement(fleet: &[FleetEntry], ingest_fraction: f64) -> StorageVerdict {
    assert!(
        (0.0..=1.0).contains(&ingest_fraction),
        "ingest fraction must lie in [0, 1]"
    );
    let mut total = 0.0;
    for entry in fleet {
        assert!(entry.dwell_h > 0.0, "dwell must be positive");
        let profile = CavLevelProfile::default_for(entry.level);
        total += entry.count as f64
            * profile.storage_generation_bytes_per_hour
            * entry.dwell_h
            * ingest_fraction;
    }
    let (lo, hi) = STORAGE_BAND_BYTES;
    StorageVerdict {
        total_bytes: total,
        fits_band: total >= lo && total <= hi,
        band_min_bytes: lo,
        band_max_bytes: hi,
    }
}

// ---------------------------------------------------------------------------
// Payload catalog
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PayloadCategory {
    Communication,
    Storage,
    Computing,
    Imaging,
}

/// Which automation tier a component serves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TierFilter {
    #[serde(rename = "1-2")]
    Tier12,
    #[serde(rename = "3-5")]
    Tier35,
    #[serde(rename = "both")]
    Both,
}

/// The two payload configurations a budget can be drawn for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tier {
    #[serde(rename = "1-2")]
    Tier12,
    #[serde(rename = "3-5")]
    Tier35,
}

impl TierFilter {
    fn includes(&self, tier: Tier) -> bool {
        match (self, tier) {
            (TierFilter::Both, _) => true,
            (TierFilter::Tier12, Tier::Tier12) => true,
            (TierFilter::Tier35, Tier::Tier35) => true,
            _ => false,
        }
    }
}

/// One on-board payload item, as cataloged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayloadComponent {
    pub name: String,
    pub category: PayloadCategory,
    pub tier: TierFilter,
    pub power_w: f64,
    pub mass_kg: f64,
}

/// Recomputed totals for one tier.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PayloadBudget {
    pub tier: Tier,
    pub components: Vec<String>,
    pub total_power_w: f64,
    pub total_mass_kg: f64,
}

/// Exact sums over the catalog entries whose tier filter matches.
pub fn payload_totals(catalog: &[PayloadComponent], tier: Tier) -> PayloadBudget {
    let mut total_power = 0.0;
    let mut total_mass = 0.0;
    let mut components = Vec::new();
    for item in catalog {
        assert!(
            item.power_w >= 0.0 && item.mass_kg >= 0.0,
            "catalog entries must have non-negative power and mass"
        );
        if item.tier.includes(tier) {
            total_power += item.power_w;
            total_mass += item.mass_kg;
            components.push(item.name.clone());
        }
    }
    PayloadBudget {
        tier,
        components,
        total_power_w: total_power,
        total_mass_kg: total_mass,
    }
}

/// Printed reference totals the default catalog is checked against:
/// (tier, power W, mass kg). The tier 3-5 printed power is 75 W below its
/// own column sum (it omits the LiDAR and camera rows that the tier 1-2
/// total does include), so recomputation flags it.
pub const REFERENCE_TOTALS: [(Tier, f64, f64); 2] = [
    (Tier::Tier12, 2594.4, 87.2),
    (Tier::Tier35, 3491.4, 89.7),
];

/// Tolerance for matching a printed total, W or kg.
const TOTAL_MATCH_TOLERANCE: f64 = 0.05;

/// A recomputed total that disagrees with the printed reference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrepancy {
    pub tier: Tier,
    pub quantity: String,
    pub stated: f64,
    pub recomputed: f64,
    pub delta: f64,
}

/// Compare a recomputed budget against the printed reference totals.
pub fn reference_discrepancies(budget: &PayloadBudget) -> Vec<Discrepancy> {
    let mut out = Vec::new();
    for (tier, stated_power, stated_mass) in REFERENCE_TOTALS {
        if tier != budget.tier {
            continue;
        }
        if (budget.total_power_w - stated_power).abs() > TOTAL_MATCH_TOLERANCE {
            out.push(Discrepancy {
                tier,
                quantity: "power_w".into(),
                stated: stated_power,
                recomputed: budget.total_power_w,
                delta: budget.total_power_w - stated_power,
            });
        }
        if (budget.total_mass_kg - stated_mass).abs() > TOTAL_MATCH_TOLERANCE {
            out.push(Discrepancy {
                tier,
                quantity: "mass_kg".into(),
                stated: stated_mass,
                recomputed: budget.total_mass_kg,
                delta: budget.total_mass_kg - stated_mass,
            });
        }
    }
    out
}

/// Load a payload catalog: a JSON array of
/// `{"name", "category", "tier", "power_w", "mass_kg"}`.
pub fn load_payload_catalog(path: &Path) -> Result<Vec<PayloadComponent>, DimensioningError> {
    let text = fs::read_to_string(path).map_err(|source| DimensioningError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| DimensioningError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Fleet specification file: ingest fraction plus the vehicle mix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FleetSpec {
    pub ingest_fraction: f64,
    pub vehicles: Vec<FleetEntry>,
}

pub fn load_fleet_spec(path: &Path) -> Result<FleetSpec, DimensioningError> {
    let text = fs::read_to_string(path).map_err(|source| DimensioningError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let spec: FleetSpec = serde_json::from_str(&text).map_err(|e| DimensioningError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(spec)
}
