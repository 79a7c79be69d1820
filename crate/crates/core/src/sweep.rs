//! End-to-end scenario runs, roof-coverage sweeps and the cross-region
//! sensitivity transplant.
//!
//! `run_scenario_full` is the single assembly line: weather → generation,
//! base demand → scenario demand, fleet → dispatch over the horizon →
//! ledger and indicators. Everything else here is built on top of it.

use crate::config::{ScenarioConfig, System, PANEL_AREA_M2_PER_KW};
use crate::dispatch::{simulate_horizon, EvFleet, HorizonResult};
use crate::econ::{
    build_cashflows, co2_metrics, cost_saving_pct, energy_indicators, IndicatorSet,
};
use crate::error::{Error, Result};
use crate::fleet::build_scenario_demand;
use crate::ingest::{derive_scaled_demand, scale_irradiance, WeatherYear};
use crate::pv::{capacity_factor, generation_series, PvArrayConfig};
use crate::region::RegionProfile;
use crate::series::{HourlySeries, Unit, HOURS_PER_YEAR};
use rayon::prelude::*;

/// Installed PV capacity, kW, for a roof fraction: `area × coverage /
/// panel area per kW`. The pure conversion accepts any fraction of the
/// roof; scenario validation separately caps usable coverage at
/// [`crate::config::MAX_COVERAGE`].
pub fn coverage_to_capacity(roof_area_m2: f64, coverage: f64) -> Result<f64> {
    if !coverage.is_finite() || !(0.0..=1.0).contains(&coverage) {
        return Err(Error::OutOfRange {
            field: "coverage",
            value: coverage,
            min: 0.0,
            max: 1.0,
        });
    }
    Ok(roof_area_m2 * coverage / PANEL_AREA_M2_PER_KW)
}

/// A fully simulated scenario with both economic boundaries evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRun {
    pub capacity_kw: f64,
    /// Year-1 generation before degradation.
    pub generation: HourlySeries,
    /// Demand actually served (base load plus any fleet charging).
    pub scenario_demand: HourlySeries,
    pub horizon: HorizonResult,
    /// Economics over electricity bills only.
    pub indicators: IndicatorSet,
    /// Economics with the combustion fleet's fuel bill inside the boundary.
    pub indicators_fuel: IndicatorSet,
}

fn assemble_indicators(
    hr: &HorizonResult,
    config: &ScenarioConfig,
    profile: &RegionProfile,
    capacity_kw: f64,
    base_annual_load_kwh: f64,
    include_fuel: bool,
    generation: &HourlySeries,
) -> Result<IndicatorSet> {
    let year1 = hr.reference_year();
    let (sc, ss, es) = energy_indicators(year1)?;
    let ledger = build_cashflows(hr, config, profile, capacity_kw, base_annual_load_kwh, include_fuel);
    let scenario_npv = ledger.scenario_npv();
    let co2 = co2_metrics(
        year1,
        profile,
        &config.fuel_assumptions,
        config.system,
        base_annual_load_kwh,
    )?;
    let cf = if capacity_kw > 0.0 {
        capacity_factor(generation, capacity_kw)?
    } else {
        0.0
    };
    Ok(IndicatorSet {
        self_consumption: sc,
        self_sufficiency: ss,
        energy_sufficiency: es,
        npv_savings_eur: ledger.npv_savings(),
        scenario_npv_cost_eur: scenario_npv,
        cost_saving_pct: cost_saving_pct(scenario_npv, ledger.base_annual_cost, config.horizon)?,
        co2_reduction_pct: co2.reduction_pct,
        co2_abatement_kg_per_kwh: co2.abatement_kg_per_kwh,
        capacity_factor: cf,
    })
}

/// Simulate one scenario end to end. `weather` is taken as measured; the
/// configured irradiance scale is applied here, so pass raw data.
pub fn run_scenario_full(
    config: &ScenarioConfig,
    profile: &RegionProfile,
    weather: &WeatherYear,
    demand_base: &HourlySeries,
) -> Result<ScenarioRun> {
    config.validate()?;
    let capacity_kw = coverage_to_capacity(profile.roof_area_m2, config.coverage)?;

    let weather_scaled = scale_irradiance(weather, config.irradiance_scale)?;
    let generation = if capacity_kw > 0.0 {
        let array = PvArrayConfig::from_scenario(config, capacity_kw)?;
        generation_series(&weather_scaled, &array)
    } else {
        HourlySeries::new(
            demand_base.start_year(),
            Unit::KilowattHour,
            vec![0.0; HOURS_PER_YEAR],
        )?
    };

    let scenario_demand = build_scenario_demand(demand_base, config, profile)?;
    let fleet = match config.system {
        System::PvEv => Some(EvFleet::from_scenario(
            profile,
            config,
            scenario_demand.start_year(),
        )),
        System::PvOnly => None,
    };
    let horizon = simulate_horizon(&generation, &scenario_demand, fleet, config)?;

    let base_annual = demand_base.annual_sum();
    let indicators =
        assemble_indicators(&horizon, config, profile, capacity_kw, base_annual, false, &generation)?;
    let indicators_fuel =
        assemble_indicators(&horizon, config, profile, capacity_kw, base_annual, true, &generation)?;

    Ok(ScenarioRun {
        capacity_kw,
        generation,
        scenario_demand,
        horizon,
        indicators,
        indicators_fuel,
    })
}

/// Indicator-only variant of [`run_scenario_full`]. `include_fuel` selects
/// which economic boundary is reported.
pub fn run_scenario(
    config: &ScenarioConfig,
    profile: &RegionProfile,
    weather: &WeatherYear,
    demand_base: &HourlySeries,
    include_fuel: bool,
) -> Result<IndicatorSet> {
    let run = run_scenario_full(config, profile, weather, demand_base)?;
    Ok(if include_fuel {
        run.indicators_fuel
    } else {
        run.indicators
    })
}

/// One grid point of a coverage sweep. `indicators` carries the
/// fuel-excluded economics; the fuel-included figures ride alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub coverage: f64,
    pub capacity_kw: f64,
    pub indicators: IndicatorSet,
    pub npv_savings_fuel_eur: f64,
    pub cost_saving_fuel_pct: f64,
}

/// A completed sweep and the index of its economic optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageSweep {
    pub points: Vec<SweepPoint>,
    pub optimum_index: usize,
}

impl CoverageSweep {
    pub fn optimum(&self) -> &SweepPoint {
        &self.points[self.optimum_index]
    }
}

/// Sweep roof coverage over a strictly increasing grid. The optimum
/// maximizes the fuel-excluded NPV savings; on an exact tie the smaller
/// system wins.
pub fn sweep_coverage(
    config: &ScenarioConfig,
    profile: &RegionProfile,
    weather: &WeatherYear,
    demand_base: &HourlySeries,
    coverages: &[f64],
) -> Result<CoverageSweep> {
    if coverages.is_empty() {
        return Err(Error::Empty("coverage grid"));
    }
    if coverages.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Inconsistent(
            "coverage grid must be strictly increasing".into(),
        ));
    }

    let points: Vec<SweepPoint> = coverages
        .par_iter()
        .map(|&coverage| {
            let mut point_config = config.clone();
            point_config.coverage = coverage;
            let run = run_scenario_full(&point_config, profile, weather, demand_base)?;
            Ok(SweepPoint {
                coverage,
                capacity_kw: run.capacity_kw,
                npv_savings_fuel_eur: run.indicators_fuel.npv_savings_eur,
                cost_saving_fuel_pct: run.indicators_fuel.cost_saving_pct,
                indicators: run.indicators,
            })
        })
        .collect::<Result<_>>()?;

    let mut optimum_index = 0;
    for (i, p) in points.iter().enumerate() {
        if p.indicators.npv_savings_eur > points[optimum_index].indicators.npv_savings_eur {
            optimum_index = i;
        }
    }

    Ok(CoverageSweep {
        points,
        optimum_index,
    })
}

/// Transplant one region's buildings, fleet and demand volume onto another
/// region's sky, grid and prices, preserving per-capita structure.
///
/// The donor's roof stock, vehicle counts and annual demand are scaled by
/// the population ratio; its mobility pattern (use fraction, daily
/// kilometres) is kept as-is. The host contributes weather, demand shape,
/// emission factor, tariffs and location. Transplanting a region onto
/// itself reproduces `run_scenario_full` exactly.
pub fn sensitivity_swap(
    donor: &RegionProfile,
    host: &RegionProfile,
    config: &ScenarioConfig,
    host_weather: &WeatherYear,
    host_demand_base: &HourlySeries,
) -> Result<ScenarioRun> {
    if donor.population <= 0.0 || host.population <= 0.0 {
        return Err(Error::Inconsistent(
            "population must be positive for a sensitivity transplant".into(),
        ));
    }
    let scale = host.population / donor.population;
    let hybrid = RegionProfile {
        name: format!("{}-sized-{}", donor.name, host.name),
        population: host.population,
        roof_area_m2: donor.roof_area_m2 * scale,
        annual_demand_kwh: donor.annual_demand_kwh * scale,
        n_vehicles: donor.n_vehicles * scale,
        n_gasoline: donor.n_gasoline * scale,
        n_diesel: donor.n_diesel * scale,
        weekday_use_fraction: donor.weekday_use_fraction,
        avg_km_per_car_day: donor.avg_km_per_car_day,
        grid_emission_factor: host.grid_emission_factor,
        retail_tariff: host.retail_tariff,
        fit_rate: host.fit_rate,
        latitude: host.latitude,
        longitude: host.longitude,
    };
    // Ratio of nominal annual demands, not of series sums: the host data's
    // shape (and any deviation of its sum from the nominal figure) carries
    // over, and a self-transplant scales by exactly 1.
    let factor = hybrid.annual_demand_kwh / host.annual_demand_kwh;
    let demand = derive_scaled_demand(host_demand_base, factor)?;
    run_scenario_full(config, &hybrid, host_weather, &demand)
}
