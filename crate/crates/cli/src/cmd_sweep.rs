//! `sunfleet sweep` — run the scenario across a roof-coverage grid, locate
//! the economic optimum, and write the per-point table plus a compact
//! summary.
//!
//! Two money conventions appear side by side and are labeled: the sweep
//! table's main NPV column counts electricity bills only (the convention
//! for comparing PV investments), while the summary's cost saving includes
//! the avoided fossil-fuel bill of the electrified fleet.

use std::path::PathBuf;

use clap::Args;
use sunfleet::sweep_coverage;

use crate::artifacts::OutDir;
use crate::error::CliResult;
use crate::inputs::{parse_grid, resolve_scenario, ScenarioArgs};

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,

    /// Roof-coverage grid as START:STOP:STEP (fractions of roof area).
    #[arg(long, default_value = "0:0.71:0.01")]
    pub grid: String,

    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
}

pub fn main(args: &SweepArgs) -> CliResult<()> {
    let resolved = resolve_scenario(&args.scenario)?;
    let grid = parse_grid(&args.grid)?;
    let sweep = sweep_coverage(
        &resolved.config,
        &resolved.profile,
        &resolved.weather,
        &resolved.demand,
        &grid,
    )?;
    let mut out = OutDir::create(&args.out)?;

    let mut table = String::with_capacity(sweep.points.len() * 160 + 256);
    table.push_str(
        "coverage,capacity_kw,self_consumption,self_sufficiency,energy_sufficiency,\
         npv_savings_eur,cost_saving_pct,co2_reduction_pct,co2_abatement_kg_per_kwh,\
         capacity_factor,npv_savings_fuel_eur,cost_saving_fuel_pct\n",
    );
    for p in &sweep.points {
        let i = &p.indicators;
        let sc = i
            .self_consumption
            .map(|v| v.to_string())
            .unwrap_or_default();
        table.push_str(&format!(
            "{},{},{sc},{},{},{},{},{},{},{},{},{}\n",
            p.coverage,
            p.capacity_kw,
            i.self_sufficiency,
            i.energy_sufficiency,
            i.npv_savings_eur,
            i.cost_saving_pct,
            i.co2_reduction_pct,
            i.co2_abatement_kg_per_kwh,
            i.capacity_factor,
            p.npv_savings_fuel_eur,
            p.cost_saving_fuel_pct,
        ));
    }
    out.write("sweep.csv", table.as_bytes())?;

    let best = sweep.optimum();
    let optimum = serde_json::json!({
        "index": sweep.optimum_index,
        "coverage": best.coverage,
        "capacity_kw": best.capacity_kw,
        "capacity_gw": best.capacity_kw / 1e6,
        "fuel_excluded": best.indicators,
        "npv_savings_fuel_eur": best.npv_savings_fuel_eur,
        "cost_saving_fuel_pct": best.cost_saving_fuel_pct,
    });
    let mut body = serde_json::to_string_pretty(&optimum).expect("optimum serialization");
    body.push('\n');
    out.write("optimum.json", body.as_bytes())?;

    let sc_pct = best
        .indicators
        .self_consumption
        .map(|v| format!("{:.1}", 100.0 * v))
        .unwrap_or_default();
    let summary = format!(
        "metric,value,unit\n\
         Optimal PV capacity,{:.3},GW\n\
         Self-consumption,{sc_pct},%\n\
         Self-sufficiency,{:.1},%\n\
         Energy sufficiency,{:.1},%\n\
         Cost saving,{:.1},%\n\
         CO₂ emission reduction,{:.1},%\n",
        best.capacity_kw / 1e6,
        100.0 * best.indicators.self_sufficiency,
        100.0 * best.indicators.energy_sufficiency,
        best.cost_saving_fuel_pct,
        best.indicators.co2_reduction_pct,
    );
    out.write("summary.csv", summary.as_bytes())?;

    let parameters = serde_json::json!({
        "region": resolved.profile.name,
        "config": resolved.config,
        "grid": args.grid,
        "coverages": grid,
    });
    println!(
        "wrote sweep.csv ({} points), optimum.json, summary.csv, manifest.json to {}",
        sweep.points.len(),
        out.path().display()
    );
    println!(
        "optimum: coverage {:.2}, capacity {:.3} GW, npv savings {:.0} EUR, cost saving {:.1} % with fuel",
        best.coverage,
        best.capacity_kw / 1e6,
        best.indicators.npv_savings_eur,
        best.cost_saving_fuel_pct,
    );
    out.finish("sweep", parameters, resolved.inputs)
}
