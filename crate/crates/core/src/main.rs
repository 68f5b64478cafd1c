//! `stratoplan` — planning and capacity analysis for stratospheric-platform
//! ITS corridors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use stratoplan::cli::{
    cmd_backhaul, cmd_calibrate, cmd_dimension, cmd_linkbudget, cmd_plan, CalibrationAnchors,
    CliError, StudyConfig, SweepKind,
};
use stratoplan::fso::RateAnchor;

#[derive(Parser)]
#[command(
    name = "stratoplan",
    version,
    about = "Plan stratospheric-platform coverage, optical backhaul, and payload budgets \
             along highway corridors",
    after_help = "Units: distances in km, transmit power in dBm, data rates in bit/s, \
                  storage in bytes, power in W, mass in kg. Exit codes: 0 success, \
                  1 domain/connectivity failure, 2 usage/parse failure."
)]
struct Cli {
    /// Study configuration file (JSON); input paths inside it are resolved
    /// relative to its directory.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory; overrides the study config's output_dir.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Stamp JSON reports with the generation time (reports are
    /// timestamp-free and byte-reproducible by default).
    #[arg(long, global = true)]
    stamp: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Place footprint disks (radius in km from the study config) over the
    /// route, optionally only over cellular coverage gaps.
    Plan,

    /// Tabulate achievable data rate (bit/s) versus link distance (km) as
    /// CSV plot data.
    Linkbudget {
        /// Link kind: h2g (slant to a ground gateway) or h2h (horizontal at
        /// platform altitude).
        #[arg(long)]
        kind: SweepKind,
        /// Transmit power in dBm.
        #[arg(long, value_name = "DBM", default_value_t = 20.0)]
        power_dbm: f64,
        /// Sweep start distance in km (slant range for h2g, horizontal
        /// separation for h2h).
        #[arg(long, value_name = "KM")]
        d_min: f64,
        /// Sweep end distance in km; equal to --d-min for a single point.
        #[arg(long, value_name = "KM")]
        d_max: f64,
        /// Distance step in km.
        #[arg(long, value_name = "KM", default_value_t = 1.0)]
        step: f64,
    },

    /// Attach a planned deployment to gateways and report per-tree
    /// bottleneck rates (bit/s), plus a hops-versus-rate chain sweep.
    Backhaul {
        /// Plan JSON produced by the plan command.
        #[arg(long, value_name = "PATH")]
        plan: PathBuf,
        /// Largest chain length for the sweep CSV.
        #[arg(long, default_value_t = 10)]
        max_hops: u32,
        /// Platform-to-platform spacing for the sweep, km.
        #[arg(long, value_name = "KM", default_value_t = 80.0)]
        spacing_km: f64,
        /// Gateway-link slant range for the sweep, km.
        #[arg(long, value_name = "KM", default_value_t = 44.0)]
        sweep_h2g_slant_km: f64,
    },

    /// Quantify per-level traffic demand (bit/s), cell feasibility, relay
    /// latency (ms), edge storage (bytes), and the payload budget (W, kg).
    Dimension {
        /// Fleet mix JSON: ingest_fraction plus vehicles
        /// [{level, count, dwell_h}].
        #[arg(long, value_name = "PATH")]
        fleet: PathBuf,
    },

    /// Fit receiver sensitivities (photons/bit) so the model reproduces the
    /// anchor rates, and emit the updated FSO config.
    Calibrate {
        /// Gateway-link anchor rate in bit/s.
        #[arg(long, default_value_t = 3.5e9)]
        h2g_rate_bps: f64,
        /// Gateway-link anchor slant range in km.
        #[arg(long, value_name = "KM", default_value_t = 121.0)]
        h2g_distance_km: f64,
        /// Gateway-link anchor transmit power in dBm.
        #[arg(long, value_name = "DBM", default_value_t = 20.0)]
        h2g_power_dbm: f64,
        /// Platform-link anchor rate in bit/s.
        #[arg(long, default_value_t = 7.44e9)]
        h2h_rate_bps: f64,
        /// Platform-link anchor horizontal separation in km.
        #[arg(long, value_name = "KM", default_value_t = 80.0)]
        h2h_distance_km: f64,
        /// Platform-link anchor transmit power in dBm.
        #[arg(long, value_name = "DBM", default_value_t = 20.0)]
        h2h_power_dbm: f64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config_path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Usage("--config <PATH> is required".into()))?;
    let config = StudyConfig::load(config_path)?;

    let output = match cli.command {
        Command::Plan => cmd_plan(&config, cli.stamp)?,
        Command::Linkbudget {
            kind,
            power_dbm,
            d_min,
            d_max,
            step,
        } => cmd_linkbudget(&config, kind, power_dbm, d_min, d_max, step)?,
        Command::Backhaul {
            plan,
            max_hops,
            spacing_km,
            sweep_h2g_slant_km,
        } => cmd_backhaul(
            &config,
            &plan,
            max_hops,
            spacing_km,
            sweep_h2g_slant_km,
            cli.stamp,
        )?,
        Command::Dimension { fleet } => cmd_dimension(&config, &fleet, cli.stamp)?,
        Command::Calibrate {
            h2g_rate_bps,
            h2g_distance_km,
            h2g_power_dbm,
            h2h_rate_bps,
            h2h_distance_km,
            h2h_power_dbm,
        } => {
            let anchors = CalibrationAnchors {
                h2g: RateAnchor {
                    target_rate_bps: h2g_rate_bps,
                    distance_km: h2g_distance_km,
                    transmit_power_dbm: h2g_power_dbm,
                },
                h2h: RateAnchor {
                    target_rate_bps: h2h_rate_bps,
                    distance_km: h2h_distance_km,
                    transmit_power_dbm: h2h_power_dbm,
                },
            };
            cmd_calibrate(&config, &anchors)?
        }
    };

    let out_dir = cli.out.unwrap_or_else(|| config.output_dir.clone());
    output.write_to(&out_dir)?;
    print!("{}", output.summary);
    for (name, _) in &output.files {
        println!("wrote {}", out_dir.join(name).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
