//! Clear-sky free-space-optical link budgets for platform-to-gateway
//! (slant) and platform-to-platform (horizontal, stratospheric) links.
//!
//! The budget combines three standard pieces: beam-spread geometric loss,
//! an exponential-atmosphere attenuation integral, and a photon-budget rate
//! law. Every optical constant is a config entry, and the receiver
//! sensitivity (photons per bit) is the single calibration knob per
//! terminal class: [`calibrate_sensitivity`] fits it so the model
//! reproduces a published rate anchor exactly.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::{PLANCK_J_S, SPEED_OF_LIGHT_M_S};
use crate::geo::SlantGeometry;

#[derive(Debug, Error)]
pub enum FsoError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("failed to parse {path}: {message}")]
    Parse { path: String, message: String },
    #[error("terminal profile '{0}' not found in FSO config")]
    UnknownTerminal(String),
    #[error("invalid terminal '{label}': {message}")]
    InvalidTerminal { label: String, message: String },
    #[error("invalid atmosphere model: {0}")]
    InvalidAtmosphere(String),
    #[error(
        "calibration target {target_bps} bit/s for '{parameter}' is outside the reachable range \
         [{reachable_min_bps}, {reachable_max_bps}] over sensitivity bracket [{bracket_lo}, {bracket_hi}]"
    )]
    AnchorUnreachable {
        parameter: String,
        target_bps: f64,
        reachable_min_bps: f64,
        reachable_max_bps: f64,
        bracket_lo: f64,
        bracket_hi: f64,
    },
}

/// Everything needed to budget one optical terminal class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FsoTerminalParams {
    #[serde(skip)]
    pub label: String,
    pub transmit_power_dbm: f64,
    pub divergence_half_angle_rad: f64,
    pub tx_aperture_diameter_m: f64,
    pub rx_aperture_diameter_m: f64,
    pub tx_efficiency: f64,
    pub rx_efficiency: f64,
    pub wavelength_nm: f64,
    pub receiver_sensitivity_photons_per_bit: f64,
}

impl FsoTerminalParams {
    pub fn validate(&self) -> Result<(), FsoError> {
        let bad = |message: &str| {
            Err(FsoError::InvalidTerminal {
                label: self.label.clone(),
                message: message.to_string(),
            })
        };
        if !(self.divergence_half_angle_rad > 0.0) {
            return bad("divergence half-angle must be positive");
        }
        if !(self.tx_aperture_diameter_m > 0.0) || !(self.rx_aperture_diameter_m > 0.0) {
            return bad("aperture diameters must be positive");
        }
        if !(self.tx_efficiency > 0.0 && self.tx_efficiency <= 1.0)
            || !(self.rx_efficiency > 0.0 && self.rx_efficiency <= 1.0)
        {
            return bad("efficiencies must lie in (0, 1]");
        }
        if !(self.wavelength_nm > 0.0) {
            return bad("wavelength must be positive");
        }
        if !(self.receiver_sensitivity_photons_per_bit > 0.0) {
            return bad("receiver sensitivity must be positive");
        }
        Ok(())
    }
}

/// Exponential clear-sky atmosphere: extinction density falls off with
/// altitude as exp(-h / scale_height).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtmosphereModel {
    pub sea_level_attenuation_db_per_km: f64,
    pub scale_height_km: f64,
    pub condition: String,
}

impl AtmosphereModel {
    pub fn validate(&self) -> Result<(), FsoError> {
        if self.sea_level_attenuation_db_per_km < 0.0 {
            return Err(FsoError::InvalidAtmosphere(
                "sea-level attenuation must be >= 0".into(),
            ));
        }
        if !(self.scale_height_km > 0.0) {
            return Err(FsoError::InvalidAtmosphere(
                "scale height must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Full budget breakdown for one link geometry.
#[derive(Debug, Clone, Serialize)]
pub struct LinkBudgetResult {
    pub geometric_loss_db: f64,
    pub atmospheric_loss_db: f64,
    pub received_power_dbm: f64,
    pub achievable_rate_bps: f64,
    pub geometry: SlantGeometry,
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * (watts / 1e-3).log10()
}

/// Beam-spread capture loss in dB at the given slant range.
///
/// The beam diameter grows linearly with range, `D_tx + 2 θ L`, and the
/// receive aperture captures the squared diameter ratio of it, capped at
/// full capture.
pub fn geometric_loss_db(params: &FsoTerminalParams, slant_range_km: f64) -> f64 {
    assert!(slant_range_km > 0.0, "slant range must be positive");
    let range_m = slant_range_km * 1000.0;
    let beam_diameter_m =
        params.tx_aperture_diameter_m + 2.0 * params.divergence_half_angle_rad * range_m;
    let captured = (params.rx_aperture_diameter_m / beam_diameter_m).powi(2);
    if captured >= 1.0 {
        0.0
    } else {
        -10.0 * captured.log10()
    }
}

/// Attenuation along a straight path through an exponential atmosphere,
/// entering at `path_base_altitude_km` and climbing by the geometry's
/// altitude difference.
///
/// Slant paths integrate the exponential density along the line of sight:
/// `α0 · H · (e^(-h0/H) - e^(-(h0+Δh)/H)) / sin ε`. Horizontal paths reduce
/// to constant density over the path length: `α0 · e^(-h0/H) · L`.
pub fn atmospheric_loss_db(
    atm: &AtmosphereModel,
    geometry: &SlantGeometry,
    path_base_altitude_km: f64,
) -> f64 {
    assert!(path_base_altitude_km >= 0.0, "base altitude must be >= 0");
    let alpha0 = atm.sea_level_attenuation_db_per_km;
    let h_scale = atm.scale_height_km;
    let h0 = path_base_altitude_km;
    let dh = geometry.altitude_difference_km;
    if dh == 0.0 {
        alpha0 * (-h0 / h_scale).exp() * geometry.slant_range_km
    } else {
        let density_integral = (-h0 / h_scale).exp() - (-(h0 + dh) / h_scale).exp();
        alpha0 * h_scale * density_integral / geometry.elevation_angle_rad.sin()
    }
}

/// Received optical power in dBm after efficiencies and both loss terms.
pub fn received_power_dbm(
    params: &FsoTerminalParams,
    geometry: &SlantGeometry,
    atm: &AtmosphereModel,
    path_base_altitude_km: f64,
) -> f64 {
    params.transmit_power_dbm
        + 10.0 * params.tx_efficiency.log10()
        + 10.0 * params.rx_efficiency.log10()
        - geometric_loss_db(params, geometry.slant_range_km)
        - atmospheric_loss_db(atm, geometry, path_base_altitude_km)
}

/// Photon-budget rate law: received power divided by the energy cost of one
/// bit (`N_b` photons of energy `h·c/λ` each).
pub fn achievable_rate_bps(
    received_power_dbm: f64,
    wavelength_nm: f64,
    sensitivity_photons_per_bit: f64,
) -> f64 {
    assert!(
        sensitivity_photons_per_bit > 0.0,
        "sensitivity must be positive"
    );
    let power_w = dbm_to_watts(received_power_dbm);
    let wavelength_m = wavelength_nm * 1e-9;
    power_w * wavelength_m / (PLANCK_J_S * SPEED_OF_LIGHT_M_S * sensitivity_photons_per_bit)
}

/// Compose the full budget for one geometry.
pub fn link_budget(
    params: &FsoTerminalParams,
    geometry: &SlantGeometry,
    atm: &AtmosphereModel,
    path_base_altitude_km: f64,
) -> LinkBudgetResult {
    let geometric = geometric_loss_db(params, geometry.slant_range_km);
    let atmospheric = atmospheric_loss_db(atm, geometry, path_base_altitude_km);
    let rx_dbm = params.transmit_power_dbm
        + 10.0 * params.tx_efficiency.log10()
        + 10.0 * params.rx_efficiency.log10()
        - geometric
        - atmospheric;
    LinkBudgetResult {
        geometric_loss_db: geometric,
        atmospheric_loss_db: atmospheric,
        received_power_dbm: rx_dbm,
        achievable_rate_bps: achievable_rate_bps(
            rx_dbm,
            params.wavelength_nm,
            params.receiver_sensitivity_photons_per_bit,
        ),
        geometry: *geometry,
    }
}

/// How the sweep distance translates into link geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeometryFamily {
    /// Distance is the slant range from a gateway at `base_altitude_km` up
    /// to a platform `platform_altitude_km` above sea level.
    Slant {
        platform_altitude_km: f64,
        base_altitude_km: f64,
    },
    /// Distance is a horizontal separation at `altitude_km`.
    Horizontal { altitude_km: f64 },
}

impl GeometryFamily {
    /// Geometry plus the path's base altitude for a given link distance.
    pub fn geometry_at(
        &self,
        distance_km: f64,
    ) -> Result<(SlantGeometry, f64), crate::geo::GeoError> {
        match *self {
            GeometryFamily::Slant {
                platform_altitude_km,
                base_altitude_km,
            } => {
                let g = SlantGeometry::from_slant_and_altitude(distance_km, platform_altitude_km)?;
                Ok((g, base_altitude_km))
            }
            GeometryFamily::Horizontal { altitude_km } => {
                Ok((SlantGeometry::horizontal(distance_km), altitude_km))
            }
        }
    }
}

/// Rate-versus-distance table. Row count is `floor((d_max-d_min)/step) + 1`;
/// a single-point table (`d_min == d_max`) is allowed.
pub fn rate_sweep(
    params: &FsoTerminalParams,
    atm: &AtmosphereModel,
    family: &GeometryFamily,
    d_min_km: f64,
    d_max_km: f64,
    step_km: f64,
) -> Result<Vec<(f64, f64)>, crate::geo::GeoError> {
    assert!(
        d_min_km > 0.0 && d_min_km <= d_max_km && step_km > 0.0,
        "bad sweep range"
    );
    let rows = ((d_max_km - d_min_km) / step_km + 1e-9).floor() as usize + 1;
    let mut out = Vec::with_capacity(rows);
    for i in 0..rows {
        let d = d_min_km + i as f64 * step_km;
        let (geometry, base_alt) = family.geometry_at(d)?;
        let budget = link_budget(params, &geometry, atm, base_alt);
        out.push((d, budget.achievable_rate_bps));
    }
    Ok(out)
}

/// A published data-rate point the model must reproduce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateAnchor {
    pub target_rate_bps: f64,
    pub distance_km: f64,
    pub transmit_power_dbm: f64,
}

const SENSITIVITY_BRACKET: (f64, f64) = (1e-6, 1e15);

/// Fit the receiver sensitivity so the modeled rate at the anchor geometry
/// and transmit power equals the anchor rate, by bisection to 1e-7
/// relative. All other parameters stay fixed.
pub fn calibrate_sensitivity(
    params: &FsoTerminalParams,
    atm: &AtmosphereModel,
    family: &GeometryFamily,
    anchor: &RateAnchor,
) -> Result<f64, FsoError> {
    let (geometry, base_alt) =
        family
            .geometry_at(anchor.distance_km)
            .map_err(|e| FsoError::InvalidTerminal {
                label: params.label.clone(),
                message: e.to_string(),
            })?;
    let mut probe = params.clone();
    probe.transmit_power_dbm = anchor.transmit_power_dbm;

    let rate_with = |sensitivity: f64| -> f64 {
        let mut p = probe.clone();
        p.receiver_sensitivity_photons_per_bit = sensitivity;
        link_budget(&p, &geometry, atm, base_alt).achievable_rate_bps
    };

    let (lo, hi) = SENSITIVITY_BRACKET;
    // Rate is strictly decreasing in sensitivity.
    let rate_max = rate_with(lo);
    let rate_min = rate_with(hi);
    if anchor.target_rate_bps > rate_max || anchor.target_rate_bps < rate_min {
        return Err(FsoError::AnchorUnreachable {
            parameter: format!("{}.receiver_sensitivity_photons_per_bit", params.label),
            target_bps: anchor.target_rate_bps,
            reachable_min_bps: rate_min,
            reachable_max_bps: rate_max,
            bracket_lo: lo,
            bracket_hi: hi,
        });
    }

    let (mut lo, mut hi) = (lo, hi);
    while (hi - lo) / (0.5 * (hi + lo)) > 1e-7 {
        let mid = 0.5 * (lo + hi);
        if rate_with(mid) > anchor.target_rate_bps {
            lo = mid; // rate still too high, needs more photons per bit
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

// ---------------------------------------------------------------------------
// Config file
// ---------------------------------------------------------------------------

/// On-disk FSO parameter set: named terminal profiles plus the atmosphere.
/// `calibrated` flips to true when fitted sensitivities are written back.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FsoConfig {
    pub calibrated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub calibration_note: Option<String>,
    pub atmosphere: AtmosphereModel,
    pub terminals: BTreeMap<String, FsoTerminalParams>,
}

impl FsoConfig {
    pub fn terminal(&self, label: &str) -> Result<&FsoTerminalParams, FsoError> {
        self.terminals
            .get(label)
            .ok_or_else(|| FsoError::UnknownTerminal(label.to_string()))
    }
}

pub fn load_fso_config(path: &Path) -> Result<FsoConfig, FsoError> {
    let text = fs::read_to_string(path).map_err(|source| FsoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut config: FsoConfig = serde_json::from_str(&text).map_err(|e| FsoError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    config.atmosphere.validate()?;
    for (label, terminal) in config.terminals.iter_mut() {
        terminal.label = label.clone();
        terminal.validate()?;
    }
    Ok(config)
}

pub fn fso_config_to_json(config: &FsoConfig) -> String {
    let mut text = serde_json::to_string_pretty(config).expect("config serializes");
    text.push('\n');
    text
}
