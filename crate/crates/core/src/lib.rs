//! stratoplan: planning and capacity analysis for stratospheric-platform
//! ITS deployments along long highway corridors.
//!
//! The library is organized around the planning pipeline:
//!
//! - [`geo`] — spherical-earth primitives (distances, slant geometry,
//!   interpolation along polylines).
//! - [`route`] — highway centerline ingestion, arc-length coverage masks,
//!   gateway sites.
//! - [`coverage`] — placement of platform footprints over a route so the
//!   target stretches lie inside footprint disks.
//! - [`fso`] — clear-sky free-space-optical link budgets and rate
//!   calibration for platform-to-gateway and platform-to-platform links.
//! - [`backhaul`] — gateway-rooted backhaul forests and bottleneck-limited
//!   per-cell rates.
//! - [`dimensioning`] — traffic, latency, storage, and payload budgets per
//!   vehicle automation level.
//! - [`cli`] — study configuration and the command implementations behind
//!   the `stratoplan` binary.

pub mod backhaul;
pub mod cli;
pub mod constants;
pub mod coverage;
pub mod dimensioning;
pub mod fso;
pub mod geo;
pub mod route;
