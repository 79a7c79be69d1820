//! `sunfleet scan` — map annual specific yield (kWh per kW installed) over
//! a panel tilt × azimuth grid, for siting studies and orientation plots.

use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use sunfleet::ingest::{load_weather, scale_irradiance};
use sunfleet::pv::{generation_series, PvArrayConfig};
use sunfleet::region::Preset;
use sunfleet::synthetic::clear_sky_weather;

use crate::artifacts::{InputRecord, OutDir};
use crate::error::CliResult;
use crate::inputs::{parse_axis, synthetic_climate_for};

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Region preset fixing the default site and synthetic climate.
    #[arg(long, default_value = "Paris")]
    pub region: String,

    /// Site latitude, degrees north (default: the region preset's).
    #[arg(long)]
    pub lat: Option<f64>,

    /// Site longitude, degrees east (default: the region preset's).
    #[arg(long)]
    pub lon: Option<f64>,

    /// Tilt axis, degrees from horizontal: comma list or START:STOP:STEP.
    #[arg(long, default_value = "0:90:10")]
    pub tilts: String,

    /// Azimuth axis, degrees clockwise from north (180 = south).
    #[arg(long, default_value = "90:270:15")]
    pub azimuths: String,

    /// Multiplier applied to all irradiance before simulation.
    #[arg(long, default_value_t = 1.0)]
    pub irradiance_scale: f64,

    /// Hourly weather CSV; the region's synthetic year is used when omitted.
    #[arg(long)]
    pub weather: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
}

pub fn main(args: &ScanArgs) -> CliResult<()> {
    let preset: Preset = args.region.parse()?;
    let profile = preset.profile();
    let lat = args.lat.unwrap_or(profile.latitude);
    let lon = args.lon.unwrap_or(profile.longitude);
    let tilts = parse_axis(&args.tilts)?;
    let azimuths = parse_axis(&args.azimuths)?;

    let mut inputs = std::collections::BTreeMap::new();
    let weather = match &args.weather {
        Some(path) => {
            inputs.insert("weather".to_string(), InputRecord::file(path)?);
            load_weather(path, (lat, lon))?
        }
        None => {
            let mut climate = synthetic_climate_for(preset, &profile);
            climate.latitude = lat;
            climate.longitude = lon;
            inputs.insert(
                "weather".to_string(),
                InputRecord::synthetic(format!(
                    "clear-sky-model year at {lat}°N {lon}°E, mean clearness {}",
                    climate.mean_clearness
                )),
            );
            clear_sky_weather(&climate)
        }
    };
    let weather = scale_irradiance(&weather, args.irradiance_scale)?;

    // Annual yield of a 1 kW array, so each cell reads as kWh/kWp.
    let rows: Vec<Vec<f64>> = tilts
        .par_iter()
        .map(|&tilt| {
            azimuths
                .iter()
                .map(|&azimuth| {
                    let array = PvArrayConfig::new(1.0, tilt, azimuth)?;
                    Ok(generation_series(&weather, &array).annual_sum())
                })
                .collect::<CliResult<Vec<f64>>>()
        })
        .collect::<CliResult<Vec<Vec<f64>>>>()?;

    let mut out = OutDir::create(&args.out)?;
    let mut table = String::with_capacity(rows.len() * azimuths.len() * 24 + 64);
    table.push_str("tilt_deg");
    for az in &azimuths {
        table.push_str(&format!(",{az}"));
    }
    table.push('\n');
    for (tilt, row) in tilts.iter().zip(&rows) {
        table.push_str(&tilt.to_string());
        for y in row {
            table.push_str(&format!(",{y}"));
        }
        table.push('\n');
    }
    out.write("scan.csv", table.as_bytes())?;

    let mut best = (0usize, 0usize);
    for (i, row) in rows.iter().enumerate() {
        for (j, y) in row.iter().enumerate() {
            if *y > rows[best.0][best.1] {
                best = (i, j);
            }
        }
    }
    let parameters = serde_json::json!({
        "region": profile.name,
        "latitude": lat,
        "longitude": lon,
        "tilts": tilts,
        "azimuths": azimuths,
        "irradiance_scale": args.irradiance_scale,
    });
    println!(
        "wrote scan.csv ({} × {} cells), manifest.json to {}",
        tilts.len(),
        azimuths.len(),
        out.path().display()
    );
    println!(
        "best cell: tilt {}°, azimuth {}° → {:.1} kWh/kWp",
        tilts[best.0], azimuths[best.1], rows[best.0][best.1]
    );
    out.finish("scan", parameters, inputs)
}
