//! `sunfleet run` — simulate one scenario over its full horizon and write
//! the indicator set, the reference-year hourly flows, and the mean daily
//! supply profile.

use std::path::PathBuf;

use clap::Args;
use sunfleet::dispatch::mean_daily_profile;
use sunfleet::run_scenario_full;

use crate::artifacts::OutDir;
use crate::error::CliResult;
use crate::inputs::{resolve_scenario, ScenarioArgs};

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,

    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
}

pub fn main(args: &RunArgs) -> CliResult<()> {
    let resolved = resolve_scenario(&args.scenario)?;
    let run = run_scenario_full(
        &resolved.config,
        &resolved.profile,
        &resolved.weather,
        &resolved.demand,
    )?;
    let mut out = OutDir::create(&args.out)?;

    let period: u16 = resolved.config.period.into();
    let indicators = serde_json::json!({
        "region": resolved.profile.name,
        "system": resolved.config.system,
        "period": period,
        "currency": format!("{period} euros"),
        "coverage": resolved.config.coverage,
        "capacity_kw": run.capacity_kw,
        "battery_replacement_years": run.horizon.replacement_years,
        "fuel_excluded": run.indicators,
        "fuel_included": run.indicators_fuel,
    });
    let mut body = serde_json::to_string_pretty(&indicators).expect("indicator serialization");
    body.push('\n');
    out.write("indicators.json", body.as_bytes())?;

    let reference = run.horizon.reference_year();
    let mut flows = String::with_capacity(reference.hourly.len() * 96 + 128);
    flows.push_str(
        "hour,pv_to_load_kwh,pv_to_battery_kwh,pv_to_grid_kwh,battery_to_load_kwh,grid_to_load_kwh,curtailed_kwh,load_kwh\n",
    );
    let served = run.scenario_demand.values();
    for (h, f) in reference.hourly.iter().enumerate() {
        let load = served[h];
        flows.push_str(&format!(
            "{h},{},{},{},{},{},{},{load}\n",
            f.pv_to_load, f.pv_to_battery, f.pv_to_grid, f.battery_to_load, f.grid_to_load, f.curtailed
        ));
    }
    out.write("flows.csv", flows.as_bytes())?;

    let daily = mean_daily_profile(reference);
    let mut profile_csv =
        String::from("hour_of_day,pv_to_load_kwh,battery_to_load_kwh,grid_to_load_kwh\n");
    for h in 0..24 {
        profile_csv.push_str(&format!(
            "{h},{},{},{}\n",
            daily.pv_to_load[h], daily.battery_to_load[h], daily.grid_to_load[h]
        ));
    }
    out.write("daily_profile.csv", profile_csv.as_bytes())?;

    let parameters = serde_json::json!({
        "region": resolved.profile.name,
        "config": resolved.config,
    });
    println!(
        "wrote indicators.json, flows.csv, daily_profile.csv, manifest.json to {}",
        out.path().display()
    );
    let sc = match run.indicators.self_consumption {
        Some(v) => format!("{:.1} %", 100.0 * v),
        None => "n/a".to_string(),
    };
    println!(
        "self-consumption {sc}, self-sufficiency {:.1} %, energy sufficiency {:.1} %",
        100.0 * run.indicators.self_sufficiency,
        100.0 * run.indicators.energy_sufficiency,
    );
    println!(
        "npv savings {:.0} EUR (electricity only), {:.0} EUR (with fuel bill)",
        run.indicators.npv_savings_eur, run.indicators_fuel.npv_savings_eur,
    );
    out.finish("run", parameters, resolved.inputs)
}
