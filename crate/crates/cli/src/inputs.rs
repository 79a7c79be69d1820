//! Input resolution shared by the subcommands: region presets, scenario
//! config files, weather/demand series (user CSV or bundled synthetic), and
//! the small grammar for numeric grids on the command line.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use sunfleet::config::{build_scenario, ScenarioConfig};
use sunfleet::ingest::{load_demand, load_weather, WeatherYear};
use sunfleet::region::{Preset, RegionProfile};
use sunfleet::series::HourlySeries;
use sunfleet::synthetic::{clear_sky_weather, demand_series, SyntheticClimate};

use crate::artifacts::InputRecord;
use crate::error::{io_at, CliError, CliResult};

/// Flags shared by `run` and `sweep`.
#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Region preset: Paris, IleDeFrance, or Kyoto.
    #[arg(long, default_value = "Paris")]
    pub region: String,

    /// Scenario TOML file; built-in defaults apply when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Hourly weather CSV; a synthetic clear-sky-model year for the
    /// region's climate is used when omitted.
    #[arg(long)]
    pub weather: Option<PathBuf>,

    /// Hourly demand CSV; a synthetic profile at the region's annual
    /// volume is used when omitted.
    #[arg(long)]
    pub demand: Option<PathBuf>,
}

/// Everything a scenario command needs, plus manifest records describing
/// where each piece came from.
pub struct ResolvedScenario {
    pub profile: RegionProfile,
    pub config: ScenarioConfig,
    pub weather: WeatherYear,
    pub demand: HourlySeries,
    pub inputs: BTreeMap<String, InputRecord>,
}

/// The synthetic climate used when no weather file is given: the region's
/// bundled pattern, relocated to the profile's exact coordinates.
pub fn synthetic_climate_for(preset: Preset, profile: &RegionProfile) -> SyntheticClimate {
    let base = match preset {
        Preset::Paris | Preset::IleDeFrance => SyntheticClimate::paris(),
        Preset::Kyoto => SyntheticClimate::kyoto(),
    };
    SyntheticClimate {
        latitude: profile.latitude,
        longitude: profile.longitude,
        ..base
    }
}

pub fn resolve_scenario(args: &ScenarioArgs) -> CliResult<ResolvedScenario> {
    let preset: Preset = args.region.parse()?;
    let profile = preset.profile();
    let mut inputs = BTreeMap::new();

    let config_text = match &args.config {
        Some(path) => {
            inputs.insert("config".to_string(), InputRecord::file(path)?);
            fs::read_to_string(path).map_err(|e| io_at(path, e))?
        }
        None => String::new(),
    };
    let config = build_scenario(&config_text)?;

    let weather = match &args.weather {
        Some(path) => {
            inputs.insert("weather".to_string(), InputRecord::file(path)?);
            load_weather(path, (profile.latitude, profile.longitude))?
        }
        None => {
            let climate = synthetic_climate_for(preset, &profile);
            inputs.insert(
                "weather".to_string(),
                InputRecord::synthetic(format!(
                    "clear-sky-model year, mean clearness {}, seasonal swing {}",
                    climate.mean_clearness, climate.summer_clearness_swing
                )),
            );
            clear_sky_weather(&climate)
        }
    };

    let demand = match &args.demand {
        Some(path) => {
            inputs.insert("demand".to_string(), InputRecord::file(path)?);
            load_demand(path)?
        }
        None => {
            inputs.insert(
                "demand".to_string(),
                InputRecord::synthetic(format!(
                    "seasonal/diurnal profile scaled to {} kWh/yr",
                    profile.annual_demand_kwh
                )),
            );
            demand_series(profile.annual_demand_kwh)
        }
    };

    Ok(ResolvedScenario {
        profile,
        config,
        weather,
        demand,
        inputs,
    })
}

/// Parse `START:STOP:STEP` into an inclusive ascending grid.
///
/// `0:0.71:0.01` yields 72 points. STOP is included when it lands on the
/// grid to within a half step.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Validation(format!(
            "grid `{spec}` must be START:STOP:STEP"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Validation(format!("grid `{spec}`: {e}")))
        })
        .collect::<CliResult<_>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !step.is_finite() || step <= 0.0 {
        return Err(CliError::Validation(format!(
            "grid `{spec}`: STEP must be positive"
        )));
    }
    if !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(CliError::Validation(format!(
            "grid `{spec}`: need START ≤ STOP"
        )));
    }
    // Count steps, snapping to an integer when STOP sits on the grid up to
    // rounding dust, truncating when it does not.
    let ratio = (stop - start) / step;
    let snapped = ratio.round();
    let steps = if (ratio - snapped).abs() <= 1e-6 * snapped.abs().max(1.0) {
        snapped
    } else {
        ratio.floor()
    };
    if steps > 100_000.0 {
        return Err(CliError::Validation(format!(
            "grid `{spec}` has more than 100000 points"
        )));
    }
    let n = steps.max(0.0) as usize;
    let mut grid: Vec<f64> = (0..=n).map(|i| start + i as f64 * step).collect();
    if let Some(last) = grid.last_mut() {
        // A final point that differs from STOP only by accumulated rounding
        // becomes STOP exactly, so bounds like `0:0.7:0.1` round-trip.
        if (*last - stop).abs() <= 1e-6 * step {
            *last = stop;
        }
    }
    Ok(grid)
}

/// Parse an axis that is either a comma list (`0,20,40`) or a range
/// (`0:90:10`).
pub fn parse_axis(spec: &str) -> CliResult<Vec<f64>> {
    if spec.contains(':') {
        return parse_grid(spec);
    }
    let values: Vec<f64> = spec
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Validation(format!("axis `{spec}`: {e}")))
        })
        .collect::<CliResult<_>>()?;
    if values.is_empty() {
        return Err(CliError::Validation(format!("axis `{spec}` is empty")));
    }
    Ok(values)
}

/// Read a plain numeric series for coherence analysis: one value per line,
/// or `index,value` pairs; a single non-numeric header line is skipped.
pub fn read_series(path: &Path) -> CliResult<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| io_at(path, e))?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cell = line.rsplit(',').next().unwrap_or(line).trim();
        match cell.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if lineno == 0 => continue, // header row
            Err(e) => {
                return Err(CliError::Validation(format!(
                    "{}, line {}: {e}",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    if values.is_empty() {
        return Err(CliError::Validation(format!(
            "{}: no numeric data",
            path.display()
        )));
    }
    Ok(values)
}
