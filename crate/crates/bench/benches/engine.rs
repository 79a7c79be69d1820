//! Benchmarks for the three hot paths: the PV generation chain, the hourly
//! dispatch loop, and the wavelet coherence transform.
//!
//! Run with `cargo bench -p sunfleet-bench`.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use sunfleet::coherence::wavelet_coherence_with;
use sunfleet::config::build_scenario;
use sunfleet::dispatch::{dispatch_hour, DispatchParams, EvFleet};
use sunfleet::fleet::{availability, build_scenario_demand, fleet_limits};
use sunfleet::ingest::scale_irradiance;
use sunfleet::pv::{generation_series, PvArrayConfig};
use sunfleet::region::Preset;
use sunfleet::series::HOURS_PER_YEAR;
use sunfleet::sweep::{coverage_to_capacity, sweep_coverage};

fn generation_year(c: &mut Criterion) {
    let config = build_scenario("").unwrap();
    let weather =
        scale_irradiance(&sunfleet::synthetic::paris_weather(), config.irradiance_scale).unwrap();
    let array = PvArrayConfig::from_scenario(&config, 4.4e6).unwrap();
    c.bench_function("generation-year", |b| {
        b.iter(|| black_box(generation_series(black_box(&weather), &array)))
    });
}

fn dispatch_year(c: &mut Criterion) {
    let profile = Preset::Paris.profile();
    let config = build_scenario("system = \"PVEV\"").unwrap();
    let weather =
        scale_irradiance(&sunfleet::synthetic::paris_weather(), config.irradiance_scale).unwrap();
    let capacity = coverage_to_capacity(profile.roof_area_m2, config.coverage).unwrap();
    let array = PvArrayConfig::from_scenario(&config, capacity).unwrap();
    let gen = generation_series(&weather, &array);
    let base = sunfleet::synthetic::demand_series(profile.annual_demand_kwh);
    let demand = build_scenario_demand(&base, &config, &profile).unwrap();
    let params = DispatchParams::from_scenario(&config);

    c.bench_function("dispatch-year", |b| {
        b.iter(|| {
            let mut fleet = EvFleet::from_scenario(&profile, &config, 2019);
            let mut served = 0.0;
            for h in 0..HOURS_PER_YEAR {
                let avail = availability(h, &fleet.availability);
                let limits = fleet_limits(
                    &fleet.state,
                    avail,
                    fleet.charger_power_kw,
                    params.charge_efficiency,
                    params.discharge_efficiency,
                );
                let f = dispatch_hour(
                    gen.values()[h],
                    demand.values()[h],
                    Some((&mut fleet.state, &limits)),
                    &params,
                    true,
                );
                if f.battery_to_load > 0.0 {
                    fleet
                        .state
                        .apply_degradation(f.battery_to_load / params.discharge_efficiency, 1);
                }
                served += f.pv_to_load + f.battery_to_load;
            }
            black_box(served)
        })
    });
}

fn coverage_sweep(c: &mut Criterion) {
    let profile = Preset::Paris.profile();
    let config = build_scenario("system = \"PVEV\"\nhorizon = 1").unwrap();
    let weather = sunfleet::synthetic::paris_weather();
    let demand = sunfleet::synthetic::demand_series(profile.annual_demand_kwh);
    let grid: Vec<f64> = (0..8).map(|i| i as f64 * 0.1).collect();
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    group.bench_function("coverage-8pt-1yr", |b| {
        b.iter(|| {
            black_box(sweep_coverage(&config, &profile, &weather, &demand, &grid).unwrap())
        })
    });
    group.finish();
}

fn coherence_transform(c: &mut Criterion) {
    let n = 2048;
    let x: Vec<f64> = (0..n)
        .map(|t| (t as f64 * 0.26).sin() + 0.4 * (t as f64 * 0.031).cos())
        .collect();
    let y: Vec<f64> = (0..n).map(|t| (t as f64 * 0.26 + 0.8).sin()).collect();
    let periods: Vec<f64> = (0..=28).map(|j| 4.0 * 2f64.powf(j as f64 / 4.0)).collect();
    c.bench_function("coherence-2048", |b| {
        b.iter(|| black_box(wavelet_coherence_with(&x, &y, &periods, 4096).unwrap()))
    });
}

criterion_group!(
    benches,
    generation_year,
    dispatch_year,
    coverage_sweep,
    coherence_transform
);
criterion_main!(benches);
