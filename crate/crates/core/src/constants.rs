//! Physical constants shared across the link-budget and dimensioning math.

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT_M_S: f64 = 2.997_924_58e8;

/// Planck constant, J·s.
pub const PLANCK_J_S: f64 = 6.626_070_15e-34;
